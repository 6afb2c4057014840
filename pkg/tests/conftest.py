import os
from pathlib import Path

import pytest

from li_lab import PrecisionContext, bundled_zeros, load_zeros
from li_lab.secondary_zeta import TailModel

ROOT = Path(__file__).resolve().parents[1]
BIG_TABLE_DEFAULT = ROOT / "data" / "zeros_100k.txt"


def big_table_path():
    env = os.environ.get("LI_LAB_ZEROS")
    if env and Path(env).exists():
        return Path(env)
    return BIG_TABLE_DEFAULT if BIG_TABLE_DEFAULT.exists() else None


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext()


@pytest.fixture(scope="session")
def small():
    return bundled_zeros()


@pytest.fixture(scope="session")
def tail():
    return TailModel()


def load_big_table():
    """(table, reason): the 100 000-zero table, or None with the reason it is unavailable."""
    path = big_table_path()
    if path is None:
        return None, "100 000-zero table not available (set LI_LAB_ZEROS)"
    table = load_zeros(path)
    if len(table.pairs) < 100_000:
        return None, f"zero table at {path} has only {len(table.pairs)} ordinates"
    return table, ""


@pytest.fixture(scope="session")
def big():
    table, reason = load_big_table()
    if table is None:
        pytest.skip(reason)
    return table


# --------------------------------------------------------------------------
# acceptance reporting: one pass/fail line per criterion, repeated in the terminal summary

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def _report(k, ok, detail, *, warn_only=False):
        status = "PASS" if ok else ("WARN" if warn_only else "FAIL")
        line = f"criterion {k}: {status}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

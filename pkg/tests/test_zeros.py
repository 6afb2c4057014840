import json
import math

import mpmath
import numpy as np
import pytest

from li_lab.errors import DomainError, ZeroTableError
from li_lab.zeros import (TableKind, ZeroPair, ZeroTable, density_band,
                          empty_synthetic, inject_off_axis, load_zeros, save_zeros, smooth_count,
                          smooth_density, write_metadata, x_of)


def write(tmp_path, lines, name="z.txt"):
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n")
    return p


def test_bundled_table(small):
    assert len(small) == 100
    assert small.kind is TableKind.TABULATED
    assert small.all_real
    assert abs(small.T - 236.524229665816205) < 1e-12
    assert small.source.digits == 30
    # first ordinate cross-checked against mpmath's zero finder at 40 digits
    with mpmath.workdps(40):
        ref = mpmath.zetazero(1).imag
        assert abs(mpmath.mpf(small.pairs[0].tau_re) - ref) < mpmath.mpf(10) ** -29


@pytest.mark.parametrize("k", [2, 37, 100])
def test_bundled_against_independent_zero_finder(small, k):
    with mpmath.workdps(35):
        ref = mpmath.zetazero(k).imag
        assert abs(mpmath.mpf(small.pairs[k - 1].tau_re) - ref) < mpmath.mpf(10) ** -28


@pytest.mark.parametrize("tau,expected", [(0, 0.25), (0.5j, 0), (math.sqrt(3) / 2, 1.0)])
def test_x_of(tau, expected):
    assert abs(x_of(tau) - expected) < 1e-15


def test_x_of_exact():
    mp = mpmath.mp
    assert x_of(mp.sqrt(3) / 2) == pytest.approx(1, abs=1e-15)


def test_zero_pair_rejects_degenerate():
    with pytest.raises(DomainError):
        ZeroPair.from_value(0.5j)
    with pytest.raises(DomainError):
        ZeroPair("-3")


def test_load_missing(tmp_path):
    with pytest.raises(ZeroTableError, match="not found"):
        load_zeros(tmp_path / "nope.txt")


def test_load_empty(tmp_path):
    with pytest.raises(ZeroTableError, match="no ordinates"):
        load_zeros(write(tmp_path, ["# nothing here"]))


def test_swapped_lines_name_the_line(tmp_path, small):
    lines = ["# header"] + [p.tau_re for p in small.pairs[:20]]
    lines[6], lines[7] = lines[7], lines[6]
    with pytest.raises(ZeroTableError) as exc:
        load_zeros(write(tmp_path, lines))
    # file line 7 now holds the larger value; the decrease is detected on line 8
    assert exc.value.line == 8
    assert "line 7" in str(exc.value) and "line 8" in str(exc.value)


def test_malformed_line(tmp_path):
    with pytest.raises(ZeroTableError) as exc:
        load_zeros(write(tmp_path, ["14.134725142", "21.02203963x"]))
    assert exc.value.line == 2


def test_first_zero_mismatch(tmp_path):
    with pytest.raises(ZeroTableError, match="first"):
        load_zeros(write(tmp_path, ["15.0", "21.022039639"]))


def test_density_violation(tmp_path, small):
    # drop every other zero: the count falls far below the smooth count
    lines = [p.tau_re for p in small.pairs[::2]]
    with pytest.raises(ZeroTableError, match="density"):
        load_zeros(write(tmp_path, lines))


def test_expected_digits(tmp_path, small):
    p = write(tmp_path, [p.tau_re for p in small.pairs[:10]])
    assert load_zeros(p, expected_digits=30).source.digits == 30
    with pytest.raises(ZeroTableError):
        load_zeros(p, expected_digits=40)


def test_round_trip(tmp_path, small):
    p = tmp_path / "copy.txt"
    save_zeros(small, p)
    again = load_zeros(p)
    assert [q.tau_re for q in again.pairs] == [q.tau_re for q in small.pairs]
    assert again.source.checksum_sha256 == small.source.checksum_sha256


def test_metadata_json(tmp_path, small):
    p = tmp_path / "meta.json"
    write_metadata(small, p)
    meta = json.loads(p.read_text())
    assert set(meta) == {"source", "digits", "count", "T", "checksum_sha256"}
    assert meta["count"] == 100


def test_smooth_count_values():
    assert abs(smooth_count(2 * math.pi) + 0.125) < 1e-14
    # direct substitution: 2.24963 * log(2.24963) - 2.24963 + 7/8 = 0.44928
    u = 14.134725 / (2 * math.pi)
    assert smooth_count(14.134725) == pytest.approx(u * math.log(u) - u + 0.875, rel=1e-14)
    assert 0 < smooth_count(14.134725) < 1  # the count steps from 0 to 1 at the first zero
    assert smooth_density(100.0) > 0
    assert abs(smooth_count(74920.8) - 100000) < density_band(74920.8)
    mp = mpmath.mp
    assert abs(smooth_count(2 * mp.pi) + mp.mpf(1) / 8) < 1e-14


def test_smooth_count_vectorised():
    t = np.array([20.0, 100.0, 1000.0])
    assert np.allclose(smooth_count(t), [smooth_count(float(x)) for x in t])


def test_counting_band_holds_for_every_zero(small):
    t = small.ordinates
    k = np.arange(1, len(t) + 1)
    assert np.all(np.abs(k - smooth_count(t)) < density_band(t))


def test_inject_off_axis(small):
    before = [p.tau_re for p in small.pairs]
    table = inject_off_axis(small, 50 + 2j)
    assert len(table) == 101
    assert table.kind is TableKind.SYNTHETIC
    assert len(table.injected_pairs) == 1 and table.continuable
    assert [p.tau_re for p in small.pairs] == before  # base untouched
    single = inject_off_axis(empty_synthetic(), complex(math.sqrt(3) / 2, 0.1))
    assert len(single) == 1 and not single.continuable


@pytest.mark.parametrize("tau", [50, 50 + 0j, "14.1"])
def test_inject_rejects_real(small, tau):
    with pytest.raises(DomainError):
        inject_off_axis(small, tau)


def test_inject_normalises_representative(small):
    a = inject_off_axis(small, 50 - 2j).injected_pairs[0]
    b = inject_off_axis(small, -50 + 2j).injected_pairs[0]
    assert a.as_complex() == b.as_complex() == 50 + 2j


def test_truncation_and_cutoffs(small):
    ten = small.truncated(10)
    assert len(ten) == 10 and ten.T == float(small.pairs[9].tau_re)
    T = small.default_cutoff()
    assert small.ordinates[-2] < T < small.ordinates[-1]
    cuts = small.midpoint_cutoffs(0.6 * T, T, 8)
    assert all(small.count_below(c) == small.count_below(c - 1e-9) for c in cuts)


def test_synthetic_table():
    t = ZeroTable.synthetic([math.sqrt(3) / 2])
    assert t.kind is TableKind.SYNTHETIC and not t.continuable
    assert abs(t.pairs[0].x() - 1) < 1e-15

"""Zero tables: parsing and validating flat files of zeta-zero ordinates,
synthetic tables with off-axis pairs, and the smooth zero-counting function.

A zero pair is the couple {1/2 + i tau, 1/2 - i tau}; it is described by
its ordinate ``tau`` (real for zeros on the critical line) and by
``x = 1/4 + tau**2``. Ordinates are kept as exact decimal strings and
converted on demand, so recomputing at a higher precision sees exactly
the same inputs.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .errors import DomainError, ZeroTableError
from .numerics import PrecisionContext, is_complex, mp_context

FIRST_ORDINATE = 14.134725141734693
TWO_PI = 2 * math.pi


class TableKind(str, enum.Enum):
    TABULATED = "tabulated"
    SYNTHETIC = "synthetic"


def _decimal_string(value) -> str:
    """Canonical exact decimal text for a real number."""
    if isinstance(value, str):
        mpmath.mpf(value)  # validates
        return value.strip()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "_mpf_"):
        digits = int(value.context.prec * 0.30103) + 3
        return mpmath.nstr(value, digits, strip_zeros=True, min_fixed=-mpmath.inf,
                           max_fixed=mpmath.inf)
    raise TypeError(f"cannot store ordinate component of type {type(value).__name__}")


def x_of(tau):
    """x = 1/4 + tau**2, the parameter of the zero pair 1/2 +- i tau."""
    if isinstance(tau, str):
        tau = mpmath.mpmathify(tau)
    return tau * tau + 0.25


@dataclass(frozen=True)
class ZeroPair:
    """One zero pair, stored as exact decimal strings for Re and Im of tau."""

    tau_re: str
    tau_im: str = "0"
    injected: bool = False

    def __post_init__(self):
        re_, im_ = mpmath.mpf(self.tau_re), mpmath.mpf(self.tau_im)
        if re_ < 0 or im_ < 0:
            raise DomainError("pair representative must have Re tau >= 0 and Im tau >= 0")
        if re_ == 0 and abs(im_) == 0.5:
            raise DomainError("tau = i/2 gives x = 0 (rho in {0, 1}), which is not a zero of Xi")

    @classmethod
    def from_value(cls, tau, injected=False) -> "ZeroPair":
        if isinstance(tau, str):
            tau = tau.strip()
            if "j" in tau or "i" in tau:
                c = complex(tau.replace("i", "j"))
                return cls.from_value(c, injected)
            return cls(_decimal_string(tau), "0", injected)
        if is_complex(tau):
            re_, im_ = tau.real, tau.imag
            if isinstance(tau, complex):
                re_, im_ = float(re_), float(im_)
            return cls(_decimal_string(re_), _decimal_string(im_), injected)
        return cls(_decimal_string(tau), "0", injected)

    @property
    def is_real(self) -> bool:
        return mpmath.mpf(self.tau_im) == 0

    @property
    def self_conjugate(self) -> bool:
        """Real or purely imaginary tau: the zero set {1/2 +- i tau} is closed under conjugation."""
        return self.is_real or mpmath.mpf(self.tau_re) == 0

    def tau(self, ctx: PrecisionContext | None = None):
        mp = ctx.mp if ctx is not None else mpmath.mp
        if self.is_real:
            return mp.mpf(self.tau_re)
        return mp.mpc(mp.mpf(self.tau_re), mp.mpf(self.tau_im))

    def x(self, ctx: PrecisionContext | None = None):
        return x_of(self.tau(ctx))

    def as_complex(self) -> complex:
        return complex(float(self.tau_re), float(self.tau_im))


@dataclass(frozen=True)
class SourceMeta:
    origin: str
    digits: int
    checksum_sha256: str

    @property
    def ordinate_error(self) -> float:
        return 10.0 ** (-self.digits)


def _checksum(lines: Iterable[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """An immutable, ordered collection of zero pairs.

    ``height`` is the validated height T of a tabulated table (None for
    purely synthetic tables). Synthetic tables built by
    :func:`inject_off_axis` keep the height of their tabulated base so the
    on-axis part can still be completed by a smooth tail.
    """

    pairs: tuple[ZeroPair, ...]
    height: str | None
    source: SourceMeta
    kind: TableKind = TableKind.TABULATED

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def T(self) -> float | None:
        return None if self.height is None else float(self.height)

    @property
    def all_real(self) -> bool:
        return all(p.is_real for p in self.pairs)

    @cached_property
    def _split(self):
        base = tuple(p for p in self.pairs if not p.injected)
        extra = tuple(p for p in self.pairs if p.injected)
        return base, extra

    @property
    def base_pairs(self) -> tuple[ZeroPair, ...]:
        """Pairs that belong to the (possibly tabulated) base table."""
        return self._split[0]

    @property
    def injected_pairs(self) -> tuple[ZeroPair, ...]:
        return self._split[1]

    @property
    def continuable(self) -> bool:
        """True when the base pairs are a validated initial segment of all zeros."""
        return self.height is not None and len(self.base_pairs) > 0

    @cached_property
    def ordinates(self) -> np.ndarray:
        """float64 ordinates of the real base pairs (for vectorised paths)."""
        return np.array([float(p.tau_re) for p in self.base_pairs if p.is_real])

    @cached_property
    def significant_digits(self) -> int:
        if not self.pairs:
            return 0
        top = max(abs(p.as_complex()) for p in self.pairs)
        return self.source.digits + int(math.floor(math.log10(max(top, 1.0)))) + 1

    def base_taus(self, prec: int):
        return self._converted(prec)

    def _converted(self, prec: int):
        cache = self.__dict__.setdefault("_mp_cache", {})
        if prec not in cache:
            mp = mp_context(prec)
            cache[prec] = tuple(mp.mpf(p.tau_re) for p in self.base_pairs)
        return cache[prec]

    def default_cutoff(self) -> float:
        """Midpoint between the two highest tabulated ordinates."""
        if not self.continuable:
            raise DomainError("table has no validated height")
        t = self.ordinates
        if len(t) < 2:
            return float(t[-1])
        return 0.5 * float(t[-1] + t[-2])

    def midpoint_cutoffs(self, lo: float, hi: float, count: int) -> list[float]:
        """``count`` cutoffs spread over [lo, hi], each moved to the midpoint
        of the gap between consecutive tabulated zeros nearest to its target."""
        t = self.ordinates
        mids = 0.5 * (t[1:] + t[:-1])
        mids = mids[(mids >= lo) & (mids <= hi)]
        if len(mids) == 0:
            raise DomainError(f"no zero gaps inside [{lo}, {hi}]")
        targets = np.linspace(lo, hi, count)
        idx = np.clip(np.searchsorted(mids, targets), 0, len(mids) - 1)
        lower = np.clip(idx - 1, 0, len(mids) - 1)
        pick = np.where(np.abs(mids[lower] - targets) <= np.abs(mids[idx] - targets), lower, idx)
        return [float(m) for m in mids[pick]]

    def count_below(self, T: float) -> int:
        return int(np.searchsorted(self.ordinates, T, side="right"))

    def truncated(self, count: int) -> "ZeroTable":
        """The first ``count`` pairs of a tabulated table, as a tabulated table."""
        if self.kind is not TableKind.TABULATED:
            raise DomainError("only tabulated tables can be truncated")
        if not 1 <= count <= len(self):
            raise DomainError(f"count must lie in [1, {len(self)}]")
        pairs = self.pairs[:count]
        meta = SourceMeta(f"{self.source.origin}[:{count}]", self.source.digits,
                          _checksum(p.tau_re for p in pairs))
        return ZeroTable(pairs, pairs[-1].tau_re, meta, TableKind.TABULATED)

    def metadata(self) -> dict:
        return {
            "source": self.source.origin,
            "digits": self.source.digits,
            "count": len(self),
            "T": self.height,
            "checksum_sha256": self.source.checksum_sha256,
        }

    @classmethod
    def synthetic(cls, taus: Sequence, origin: str = "synthetic") -> "ZeroTable":
        """A synthetic table holding exactly the given ordinates (direct sums only)."""
        pairs = tuple(ZeroPair.from_value(t, injected=True) for t in taus)
        pairs = tuple(sorted(pairs, key=lambda p: mpmath.mpf(p.tau_re)))
        meta = SourceMeta(origin, 30, _checksum(f"{p.tau_re},{p.tau_im}" for p in pairs))
        return cls(pairs, None, meta, TableKind.SYNTHETIC)


# --------------------------------------------------------------------------
# smooth counting


def _lib(t):
    if hasattr(t, "_mpf_") or hasattr(t, "_mpc_"):
        return t.context
    if isinstance(t, np.ndarray):
        return np
    return math


def smooth_count(t):
    """Riemann-von Mangoldt smooth count (t/2pi) log(t/2pi) - t/2pi + 7/8."""
    lib = _lib(t)
    u = t / (2 * lib.pi)
    return u * lib.log(u) - u + 0.875


def smooth_density(t):
    """Derivative of :func:`smooth_count`: log(t/2pi)/(2pi)."""
    lib = _lib(t)
    return lib.log(t / (2 * lib.pi)) / (2 * lib.pi)


def density_band(t):
    return 3 + 0.5 * np.log(t)


# --------------------------------------------------------------------------
# loading and saving


def _parse_lines(lines: Iterable[str]):
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        token = line.split()[0] if len(line.split()) == 1 else None
        if token is None:
            raise ZeroTableError(f"expected one ordinate per line, got {line!r}", lineno)
        try:
            v = float(token)
            mpmath.mpf(token)
        except ValueError:
            raise ZeroTableError(f"malformed ordinate {token!r}", lineno) from None
        if not math.isfinite(v):
            raise ZeroTableError(f"non-finite ordinate {token!r}", lineno)
        values.append((lineno, token, v))
    return values


def _decimals(token: str) -> int:
    mant = token.lower().split("e")[0]
    return len(mant.split(".")[1]) if "." in mant else 0


def validate_ordinates(entries, expected_digits: int | None = None) -> int:
    """Check monotonicity, first zero and the density band.

    ``entries`` is a list of ``(lineno, token, float_value)``; returns the
    number of decimals to declare for the table.
    """
    if not entries:
        raise ZeroTableError("no ordinates")
    digits = min(_decimals(tok) for _, tok, _ in entries)
    if expected_digits is not None:
        for lineno, tok, _ in entries:
            if _decimals(tok) < expected_digits:
                raise ZeroTableError(
                    f"ordinate {tok} has fewer than {expected_digits} decimals", lineno)
        digits = expected_digits
    lineno0, tok0, v0 = entries[0]
    if abs(v0 - FIRST_ORDINATE) > 0.01:
        raise ZeroTableError(f"first ordinate {tok0} is not the first zeta zero (14.1347...)",
                             lineno0)
    prev_line, prev_tok = lineno0, tok0
    prev = mpmath.mpf(tok0)
    for lineno, tok, v in entries[1:]:
        cur = mpmath.mpf(tok)
        if not cur > prev:
            raise ZeroTableError(
                f"ordinates not strictly increasing ({tok} after {prev_tok} on line {prev_line})",
                lineno)
        prev, prev_tok, prev_line = cur, tok, lineno
    t = np.array([v for _, _, v in entries])
    k = np.arange(1, len(t) + 1)
    gap = np.abs(k - smooth_count(t)) - density_band(t)
    bad = np.flatnonzero(gap >= 0)
    if len(bad):
        i = int(bad[0])
        raise ZeroTableError(
            f"zero count {i + 1} at t={entries[i][1]} is outside the density band "
            f"(smooth count {smooth_count(float(t[i])):.2f})", entries[i][0])
    return digits


def load_zeros(path, expected_digits: int | None = None) -> ZeroTable:
    """Read and validate a zeros file: one decimal ordinate per line,
    ascending, with optional '#' comment lines."""
    path = Path(path)
    if not path.exists():
        raise ZeroTableError(f"{path}: not found")
    with open(path) as fh:
        entries = _parse_lines(fh)
    digits = validate_ordinates(entries, expected_digits)
    pairs = tuple(ZeroPair(tok) for _, tok, _ in entries)
    meta = SourceMeta(str(path.name), digits, _checksum(tok for _, tok, _ in entries))
    return ZeroTable(pairs, entries[-1][1], meta, TableKind.TABULATED)


def save_zeros(table: ZeroTable, path, header: str | None = None) -> None:
    """Write the ordinates of a real tabulated table in the zeros file format."""
    if not table.all_real:
        raise DomainError("only tables with real ordinates can be written as zeros files")
    with open(path, "w") as fh:
        fh.write(f"# {header or table.source.origin}\n")
        for p in table.pairs:
            fh.write(p.tau_re + "\n")


def write_metadata(table: ZeroTable, path) -> None:
    Path(path).write_text(json.dumps(table.metadata(), indent=2) + "\n")


def bundled_zeros() -> ZeroTable:
    """The first 100 ordinates shipped with the package (30 decimals)."""
    ref = resources.files("li_lab") / "data" / "zeros_100.txt"
    with resources.as_file(ref) as p:
        return load_zeros(p)


# --------------------------------------------------------------------------
# synthetic configurations


def inject_off_axis(base: ZeroTable, tau_star) -> ZeroTable:
    """Add the quadruple of zeros 1/2 +- i tau*, 1/2 +- i conj(tau*) to ``base``.

    For purely imaginary tau* the quadruple degenerates to a single real pair
    of zeros 1/2 -+ Im tau* off the critical line.

    Only the representative with Re, Im >= 0 is stored; sums over pairs add
    the complex-conjugate pair automatically. ``base`` is left untouched.
    """
    c = complex(tau_star) if not isinstance(tau_star, str) else complex(tau_star.replace("i", "j"))
    if c.imag == 0:
        raise DomainError("tau* is real: that is an on-axis zero, not an off-axis injection")
    # tau, -tau, conj(tau), -conj(tau) describe the same zeros
    if hasattr(tau_star, "_mpc_"):
        rep = tau_star.context.mpc(abs(tau_star.real), abs(tau_star.imag))
    else:
        rep = complex(abs(c.real), abs(c.imag))
    new = ZeroPair.from_value(rep, injected=True)
    pairs = sorted(base.pairs + (new,), key=lambda p: mpmath.mpf(p.tau_re))
    meta = SourceMeta(f"{base.source.origin}+{new.tau_re}+{new.tau_im}i", base.source.digits,
                      _checksum([base.source.checksum_sha256, new.tau_re, new.tau_im]))
    return ZeroTable(tuple(pairs), base.height, meta, TableKind.SYNTHETIC)


def empty_synthetic() -> ZeroTable:
    return ZeroTable((), None, SourceMeta("empty", 30, _checksum([])), TableKind.SYNTHETIC)

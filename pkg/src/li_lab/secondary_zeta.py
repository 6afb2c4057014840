"""The secondary zeta function Z(sigma) = sum_k x_k^(-sigma) over zero pairs.

A finite table is completed above a cutoff T by integrating
(1/4 + t^2)^(-sigma) against the smooth zero density
N'(t) = alpha log t + beta (alpha = 1/2pi, beta = -log(2pi)/2pi). The
integrand is expanded as t^(-2 sigma) sum_m C(-sigma, m) (4 t^2)^(-m) and
each term integrates in closed form, which also continues Z(sigma) to the
left of sigma = 1/2 and carries its double pole there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, PoleError
from .numerics import ErrorKind, PrecisionContext, ValueWithError, rounding_error, tree_sum
from .zeros import ZeroTable

LOG2 = math.log(2)


@dataclass(frozen=True)
class PolarData:
    """Coefficients of Z(1/2 + e) = R_minus2/e^2 + R_minus1/e + O(1)."""

    R_minus2: object
    R_minus1: object

    def __post_init__(self):
        if not self.R_minus2 > 0:
            raise DomainError("R_minus2 must be positive")

    @classmethod
    def riemann(cls, ctx: PrecisionContext | None = None) -> "PolarData":
        mp = ctx.mp if ctx is not None else mpmath.mp
        return cls(1 / (8 * mp.pi), -mp.log(2 * mp.pi) / (4 * mp.pi))


@dataclass(frozen=True)
class TailModel:
    """Completion of a truncated zero sum above ``cutoff``.

    ``cutoff=None`` means "the table's default cutoff" (midway between its
    two highest ordinates). ``window`` is given as fractions of the cutoff.
    ``alpha``/``beta`` describe the smooth density alpha log t + beta.
    """

    cutoff: float | None = None
    order: int = 8
    window: tuple[float, float] = (0.6, 1.0)
    averaging_count: int = 32
    alpha: str = "1/(2*pi)"
    beta: str = "-log(2*pi)/(2*pi)"

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("tail expansion order K must be >= 1")
        lo, hi = self.window
        if not 0 < lo < hi <= 1:
            raise DomainError("averaging window must satisfy 0 < T0/T < T1/T <= 1")

    def density(self, ctx: PrecisionContext):
        mp = ctx.mp
        env = {"pi": mp.pi, "log": mp.log, "sqrt": mp.sqrt}
        return (mp.mpf(eval(self.alpha, {"__builtins__": {}}, env)),
                mp.mpf(eval(self.beta, {"__builtins__": {}}, env)))

    def resolve_cutoff(self, table: ZeroTable) -> float:
        if not table.continuable:
            raise DomainError("tail completion needs a tabulated table with a validated height")
        T = table.default_cutoff() if self.cutoff is None else float(self.cutoff)
        if T > table.T:
            raise DomainError(f"cutoff {T} exceeds the validated table height {table.T}")
        return T


def tail_power_integral(a, T, alpha, beta, mp):
    """Closed form (continued in a) of int_T^inf t^-a (alpha log t + beta) dt."""
    am1 = a - 1
    if am1 == 0:
        raise PoleError("tail integral has a pole at a = 1")
    lT = mp.log(T)
    return mp.exp(-am1 * lT) * ((alpha * lT + beta) / am1 + alpha / am1**2)


def _binom_neg(sigma, m, mp):
    """C(-sigma, m)."""
    c = mp.one
    for i in range(m):
        c = c * (-sigma - i) / (i + 1)
    return c


def tail_terms(sigma, T, tail: TailModel, ctx: PrecisionContext, count: int | None = None):
    """The individual expansion terms m = 0..count-1 of the smooth tail."""
    mp = ctx.mp
    alpha, beta = tail.density(ctx)
    T = mp.mpf(T)
    count = tail.order + 1 if count is None else count
    out = []
    for m in range(count):
        coeff = _binom_neg(sigma, m, mp) / mp.mpf(4) ** m
        if coeff == 0:
            out.append(mp.zero)
            continue
        out.append(coeff * tail_power_integral(2 * sigma + 2 * m, T, alpha, beta, mp))
    return out


def tail_value(sigma, T, tail: TailModel, ctx: PrecisionContext) -> ValueWithError:
    terms = tail_terms(sigma, T, tail, ctx, tail.order + 1)
    head = ctx.reduce(terms[:-1])
    err = abs(terms[-1]) + rounding_error(ctx, max(abs(t) for t in terms) + 1, tail.order * 4)
    return ValueWithError(head, err, ErrorKind.HEURISTIC)


# --------------------------------------------------------------------------
# finite sums


def _pair_terms(table: ZeroTable, sigma, ctx: PrecisionContext, pairs):
    """x^-sigma for each pair, adding the conjugate pair for complex tau."""
    mp = ctx.mp
    out = []
    for p in pairs:
        x = p.x(ctx)
        if p.is_real:
            out.append(mp.exp(-sigma * mp.log(x)))
        elif p.self_conjugate:
            out.append(mp.power(mp.mpc(x), -sigma))
        else:
            out.append(mp.power(x, -sigma) + mp.power(mp.conj(x), -sigma))
    return out


def _log_x(table: ZeroTable, prec: int):
    cache = table.__dict__.setdefault("_logx_cache", {})
    if prec not in cache:
        from .numerics import mp_context
        mp = mp_context(prec)
        cache[prec] = tuple(mp.log(t * t + 0.25) for t in table.base_taus(prec))
    return cache[prec]


def _use_numpy(table: ZeroTable, sigma, backend: str) -> bool:
    if backend == "numpy":
        return True
    if backend == "mpmath":
        return False
    return (mpmath.im(sigma) == 0 and table.all_real and len(table.base_pairs) >= 5000
            and table.significant_digits <= 16)


def _base_sum(table: ZeroTable, sigma, count: int, ctx: PrecisionContext, backend: str):
    """Sum of x_k^-sigma over the first ``count`` base pairs, with a rounding bound."""
    mp = ctx.mp
    if count == 0:
        return mp.zero, mpmath.mpf(0)
    if _use_numpy(table, sigma, backend):
        t = table.ordinates[:count]
        terms = np.exp(-float(mpmath.re(sigma)) * np.log(0.25 + t * t))
        s = float(np.sum(terms))
        err = (math.log2(count) + 4) * 2.0**-52 * s
        return mp.mpf(s), mpmath.mpf(err)
    logs = _log_x(table, ctx.bits + ctx.guard_bits)[:count]
    terms = [mp.exp(-sigma * lx) for lx in logs]
    s = ctx.reduce(terms)
    return s, rounding_error(ctx, sum(abs(v) for v in terms[:1]) * count, 4 + int(math.log2(count)))


def _first_omitted(table: ZeroTable, T: float, sigma, mp):
    t = table.ordinates
    i = int(np.searchsorted(t, T, side="right"))
    nxt = t[i] if i < len(t) else T
    return abs(mp.exp(-sigma * mp.log(mp.mpf(nxt) ** 2 + 0.25)))


def z_eval(sigma, table: ZeroTable, tail: TailModel | None = None,
           ctx: PrecisionContext | None = None, *, continuation: bool = False,
           backend: str = "auto") -> ValueWithError:
    """Z(sigma) for Re sigma > 1/2 (or further left with ``continuation``)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    sigma = ctx.convert(sigma)
    if sigma == 0.5:
        raise PoleError("Z has a double pole at sigma = 1/2; use polar_coefficients")
    if mp.re(sigma) <= 0.5 and not continuation:
        raise DomainError("z_eval needs Re sigma > 1/2 (pass continuation=True to continue)")

    if not table.continuable or tail is None:
        terms = _pair_terms(table, sigma, ctx, table.pairs)
        v = ctx.reduce(terms)
        return ValueWithError(v, rounding_error(ctx, max([abs(t) for t in terms] + [1]),
                                                len(terms) + 2))

    T = tail.resolve_cutoff(table)
    count = table.count_below(T)
    head, herr = _base_sum(table, sigma, count, ctx, backend)
    extra = _pair_terms(table, sigma, ctx, table.injected_pairs)
    tv = tail_value(sigma, T, tail, ctx)
    osc = 2 * _first_omitted(table, T, mp.re(sigma), mp)
    out = ValueWithError(head + ctx.reduce(extra), herr, ErrorKind.RIGOROUS) + tv
    return out.widen(osc, ErrorKind.HEURISTIC)


# --------------------------------------------------------------------------
# integer arguments


def _inverse_x(table: ZeroTable, prec: int, count: int):
    cache = table.__dict__.setdefault("_invx_cache", {})
    key = (prec, count)
    if key not in cache:
        cache[key] = tuple(1 / (t * t + 0.25) for t in table.base_taus(prec)[:count])
    return cache[key]


def z_integers(jmax: int, table: ZeroTable, tail: TailModel | None = None,
               ctx: PrecisionContext | None = None) -> list[ValueWithError]:
    """[Z(1), ..., Z(jmax)] sharing one pass of powers of 1/x_k.

    Terms below 2^-(prec+8) of the leading term are dropped; since 1/x_k
    decreases with k, the dropped mass is bounded by count * that threshold.
    """
    ctx = ctx or PrecisionContext()
    if jmax < 1:
        raise DomainError("j must be >= 1")
    mp = ctx.mp
    prec = ctx.bits + ctx.guard_bits
    cache = table.__dict__.setdefault("_zint_cache", {})
    T = tail.resolve_cutoff(table) if (tail is not None and table.continuable) else None
    key = (prec, ctx.reduction_order, T, tail)
    have = cache.get(key, [])
    if len(have) >= jmax:
        return have[:jmax]

    if T is not None:
        count = table.count_below(T)
        pairs_direct = table.injected_pairs
    else:
        count = 0
        pairs_direct = table.pairs
    inv = _inverse_x(table, prec, count) if count else ()
    logs = np.log(0.25 + table.ordinates[:count] ** 2) if count else np.array([])
    direct_x = [p.x(ctx) for p in pairs_direct]

    out = []
    powers = list(inv)
    for j in range(1, jmax + 1):
        if j > 1:
            # keep only terms that still matter at this precision
            if count:
                bound = logs[0] + ((prec + 8) * LOG2 + math.log(count)) / j
                keep = max(1, min(int(np.searchsorted(logs, bound, side="right")), len(powers)))
                powers = [p * q for p, q in zip(powers[:keep], inv[:keep])]
        head = ctx.reduce(powers) if powers else mp.zero
        dropped = (count - len(powers)) * (powers[-1] if powers else 0)
        herr = rounding_error(ctx, head, len(powers) + 2) + abs(dropped)
        dsum = []
        for p, x in zip(pairs_direct, direct_x):
            v = x ** -j
            dsum.append(mp.re(v) if p.self_conjugate else 2 * mp.re(v))
        val = ValueWithError(head + ctx.reduce(dsum), herr)
        if T is not None:
            val = val + tail_value(mp.mpf(j), T, tail, ctx)
            val = val.widen(2 * _first_omitted(table, T, mp.mpf(j), mp), ErrorKind.HEURISTIC)
        out.append(val)
    cache[key] = out
    return out


def z_integer(j: int, table: ZeroTable, tail: TailModel | None = None,
              ctx: PrecisionContext | None = None) -> ValueWithError:
    """Z(j) for a positive integer j."""
    if j < 1:
        raise DomainError("j must be >= 1")
    return z_integers(j, table, tail, ctx)[j - 1]


# --------------------------------------------------------------------------
# continuation left of 1/2


def z_continued(sigma, table: ZeroTable, tail: TailModel | None = None,
                ctx: PrecisionContext | None = None) -> ValueWithError:
    """Z(sigma) for real sigma in (-1/4, 1/2), averaged over many cutoffs."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    sigma = mp.mpf(sigma)
    if not -0.25 < sigma < 0.5:
        raise DomainError("z_continued is implemented for -1/4 < sigma < 1/2 only")
    if not table.continuable or tail is None:
        terms = _pair_terms(table, sigma, ctx, table.pairs)
        return ValueWithError(ctx.reduce(terms), rounding_error(ctx, len(terms) + 1, len(terms) + 1))

    T = tail.resolve_cutoff(table)
    lo, hi = tail.window
    cutoffs = table.midpoint_cutoffs(lo * T, hi * T, tail.averaging_count)
    counts = [table.count_below(c) for c in cutoffs]
    prec = ctx.bits + ctx.guard_bits
    if sigma != 0:
        logs = _log_x(table, prec)[: max(counts)]
        terms = [mp.exp(-sigma * lx) for lx in logs]
    values = []
    tail_err = mpmath.mpf(0)
    start, running = 0, mp.zero
    extra = ctx.reduce(_pair_terms(table, sigma, ctx, table.injected_pairs))
    for c, cnt in sorted(zip(cutoffs, counts), key=lambda x: x[1]):
        if sigma == 0:
            running = mp.mpf(cnt)
        else:
            running = running + tree_sum(terms[start:cnt], mp.zero)
            start = cnt
        tv = tail_value(sigma, c, tail, ctx)
        tail_err = max(tail_err, tv.abs_error)
        values.append(running + extra + tv.value)
    m = len(values)
    mean = ctx.reduce(values) / m
    spread = mp.sqrt(ctx.reduce([(v - mean) ** 2 for v in values]) / max(m - 1, 1))
    err = 2 * spread / mp.sqrt(m) + tail_err + rounding_error(ctx, max(counts) + 1, 8)
    return ValueWithError(mean, err, ErrorKind.HEURISTIC)


def polar_coefficients(tail: TailModel | None = None, ctx: PrecisionContext | None = None,
                       T=None) -> PolarData:
    """R_-2, R_-1 from the Laurent expansion of the m = 0 tail term at sigma = 1/2.

    With a = 2 sigma = 1 + 2e the term is
    T^(-2e) [(alpha log T + beta)/(2e) + alpha/(4e^2)]; expanding
    T^(-2e) = 1 - 2e log T + ... gives the two polar coefficients. The
    finite zero sum and the m >= 1 terms are regular at sigma = 1/2.
    """
    tail = tail or TailModel()
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    alpha, beta = tail.density(ctx)
    T = mp.mpf(T if T is not None else (tail.cutoff or 1000))
    lT = mp.log(T)
    # coefficients of e^-2 and e^-1 in (1 - 2 e lT)(A/e + B/e^2)
    A = (alpha * lT + beta) / 2
    B = alpha / 4
    return PolarData(B, A - 2 * lT * B)


def decay_constant(table: ZeroTable, tail: TailModel | None, ctx: PrecisionContext | None = None,
                   reals=(0.75, 1, 2), imags=(5, 10, 20, 40)) -> float:
    """Smallest C with |Z(a+bi)| <= C Z(a) b^(-3/2) on the grid."""
    ctx = ctx or PrecisionContext()
    c = 0.0
    for a in reals:
        za = z_eval(a, table, tail, ctx)
        for b in imags:
            zab = z_eval(ctx.mp.mpc(a, b), table, tail, ctx)
            c = max(c, float(abs(zab.value) * b**1.5 / za.value))
    return c

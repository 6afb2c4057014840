"""Multiprecision scalar layer: precision policy, values with error bounds,
exact combinatorics and the special functions (log-Gamma, digamma, zeta and
the log-derivatives of zeta and Xi) used throughout the package.

All big-float work goes through a private :class:`mpmath.MPContext` per
working precision, so nothing here touches the global ``mpmath.mp`` state
and every function is safe to call from several threads at once.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

import mpmath

from .errors import NearZeroError, PoleError, PrecisionError

# exact rationals; Fraction already normalises sign and lowest terms
BigRational = Fraction


class ReductionOrder(str, enum.Enum):
    SEQUENTIAL = "sequential"
    FIXED_TREE = "fixed-tree"


class ErrorKind(str, enum.Enum):
    RIGOROUS = "rigorous"
    HEURISTIC = "heuristic"


@lru_cache(maxsize=64)
def mp_context(prec: int) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context fixed at ``prec`` bits. Never mutate it."""
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def tree_sum(values: Sequence, zero=0):
    """Balanced pairwise reduction with a bracketing fixed by ``len(values)``."""
    vals = list(values)
    if not vals:
        return zero
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision and summation policy.

    ``bits`` is the target accuracy; arithmetic runs at ``bits + guard_bits``.
    """

    bits: int = 128
    guard_bits: int = 32
    reduction_order: ReductionOrder = ReductionOrder.FIXED_TREE
    max_em_terms: int = 200_000

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 64:
            raise ValueError(f"bits must be an integer >= 64, got {self.bits}")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be non-negative")
        object.__setattr__(self, "reduction_order", ReductionOrder(self.reduction_order))

    @property
    def mp(self):
        return mp_context(self.bits + self.guard_bits)

    @property
    def eps(self):
        return mpmath.ldexp(mpmath.mpf(1), -self.bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return replace(self, bits=int(bits))

    def doubled(self) -> "PrecisionContext":
        return self.with_bits(2 * self.bits)

    def reduce(self, values: Iterable, zero=None):
        vals = list(values)
        if zero is None:
            zero = self.mp.zero
        if self.reduction_order is ReductionOrder.SEQUENTIAL:
            acc = zero
            for v in vals:
                acc = acc + v
            return acc
        return tree_sum(vals, zero)

    def convert(self, x):
        """Bring a number (str, int, Fraction, float, mpf, mpc) into this context."""
        mp = self.mp
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        if is_complex(x):
            return mp.mpc(x)
        return mp.mpf(x)


def is_complex(x) -> bool:
    """True for Python complex and for complex numbers of any mpmath context."""
    return isinstance(x, complex) or hasattr(x, "_mpc_")


def _err(x) -> mpmath.mpf:
    e = mpmath.mpf(x)
    if e < 0:
        raise ValueError("error bound must be non-negative")
    if not mpmath.isfinite(e):
        raise PrecisionError("error bound is not finite")
    return e


def _merge_kind(*kinds: ErrorKind) -> ErrorKind:
    if any(k is ErrorKind.HEURISTIC for k in kinds):
        return ErrorKind.HEURISTIC
    return ErrorKind.RIGOROUS


@dataclass(frozen=True)
class ValueWithError:
    """A multiprecision value with an absolute error bound.

    Arithmetic propagates bounds to first order (sum of bounds for
    addition, ``|a|db + |b|da + da db`` for products).
    """

    value: Any
    abs_error: Any = field(default_factory=lambda: mpmath.mpf(0))
    error_kind: ErrorKind = ErrorKind.RIGOROUS

    def __post_init__(self):
        object.__setattr__(self, "abs_error", _err(self.abs_error))
        object.__setattr__(self, "error_kind", ErrorKind(self.error_kind))

    @staticmethod
    def _coerce(other):
        if isinstance(other, ValueWithError):
            return other
        return ValueWithError(other, 0, ErrorKind.RIGOROUS)

    def __add__(self, other):
        o = self._coerce(other)
        return ValueWithError(self.value + o.value, self.abs_error + o.abs_error,
                              _merge_kind(self.error_kind, o.error_kind))

    __radd__ = __add__

    def __neg__(self):
        return ValueWithError(-self.value, self.abs_error, self.error_kind)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        err = (abs(self.value) * o.abs_error + abs(o.value) * self.abs_error
               + self.abs_error * o.abs_error)
        return ValueWithError(self.value * o.value, err,
                              _merge_kind(self.error_kind, o.error_kind))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        d = abs(o.value)
        if d <= o.abs_error:
            raise NearZeroError("divisor is not separated from zero by its error bound")
        q = self.value / o.value
        err = (self.abs_error + abs(q) * o.abs_error) / (d - o.abs_error)
        return ValueWithError(q, err, _merge_kind(self.error_kind, o.error_kind))

    @property
    def real(self):
        return ValueWithError(mpmath.re(self.value), self.abs_error, self.error_kind)

    @property
    def imag(self):
        return ValueWithError(mpmath.im(self.value), self.abs_error, self.error_kind)

    def conjugate(self):
        return ValueWithError(mpmath.conj(self.value), self.abs_error, self.error_kind)

    def widen(self, extra, kind: ErrorKind | None = None):
        k = self.error_kind if kind is None else _merge_kind(self.error_kind, kind)
        return ValueWithError(self.value, self.abs_error + _err(extra), k)

    def agrees_with(self, other, slack=0) -> bool:
        """True when the two enclosures overlap (plus optional slack)."""
        o = self._coerce(other)
        return abs(self.value - o.value) <= self.abs_error + o.abs_error + _err(slack)

    def __float__(self):
        return float(mpmath.re(self.value))

    def __complex__(self):
        return complex(self.value)

    def __repr__(self):
        v = mpmath.nstr(self.value, 20)
        return f"ValueWithError({v} ± {mpmath.nstr(self.abs_error, 3)}, {self.error_kind.value})"


def rounding_error(ctx: PrecisionContext, magnitude, ops: int = 1):
    """Bound on accumulated rounding: ``ops`` roundings at working precision."""
    return mpmath.mpf(abs(magnitude)) * ops * mpmath.ldexp(1, -(ctx.bits + ctx.guard_bits - 1))


# --------------------------------------------------------------------------
# exact combinatorics


def binomial(a: int, b: int) -> int:
    """Exact C(a, b) for non-negative integers; 0 when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be non-negative")
    return math.comb(a, b)


# --------------------------------------------------------------------------
# Gamma family


def _check_gamma_pole(s, mp):
    if mp.im(s) == 0 and mp.re(s) <= 0 and mp.isint(mp.re(s)):
        raise PoleError(f"Gamma has a pole at s = {mp.nstr(s, 10)}")


def log_gamma(s, ctx: PrecisionContext) -> ValueWithError:
    """Principal branch of log Gamma(s)."""
    mp = ctx.mp
    s = ctx.convert(s)
    _check_gamma_pole(s, mp)
    v = mp.loggamma(s)
    err = rounding_error(ctx, max(abs(v), 1), 4)
    return ValueWithError(v, err, ErrorKind.RIGOROUS)


def digamma(s, ctx: PrecisionContext) -> ValueWithError:
    """psi(s) = Gamma'(s)/Gamma(s)."""
    mp = ctx.mp
    s = ctx.convert(s)
    _check_gamma_pole(s, mp)
    v = mp.digamma(s)
    err = rounding_error(ctx, max(abs(v), 1), 4)
    return ValueWithError(v, err, ErrorKind.RIGOROUS)


# --------------------------------------------------------------------------
# Euler-Maclaurin zeta


@lru_cache(maxsize=32)
def _bernoulli_weights(prec: int, count: int):
    """B_{2j}/(2j)! for j = 1..count at precision ``prec``."""
    mp = mp_context(prec)
    return tuple(mp.bernoulli(2 * j) / mp.factorial(2 * j) for j in range(1, count + 1))


@lru_cache(maxsize=32)
def _log_table(prec: int, n: int):
    mp = mp_context(prec)
    return tuple(mp.log(k) for k in range(1, n + 1))


def em_parameters(s, bits: int) -> tuple[int, int]:
    """Truncation point N and number of Bernoulli corrections J."""
    t = abs(complex(s).imag)
    n_terms = max(math.ceil(0.35 * bits), math.ceil(t / 2), 2)
    corrections = math.ceil(bits / 8)
    return n_terms, corrections


def _em_sums(s, N: int, J: int, ctx: PrecisionContext, derivative: bool):
    """Euler-Maclaurin pieces for zeta(s) (and zeta'(s) if requested).

    Returns ``(zeta, dzeta, bound, dbound)``; the bounds are the Backlund
    remainder estimate |(s+2J+1)/(sigma+2J+1)| * |T_{J+1}|.
    """
    mp = ctx.mp
    prec = ctx.bits + ctx.guard_bits
    logs = _log_table(prec, N)
    weights = _bernoulli_weights(prec, J + 1)

    heads = []
    dheads = []
    for k in range(2, N):
        lk = logs[k - 1]
        term = mp.exp(-s * lk)
        heads.append(term)
        if derivative:
            dheads.append(-lk * term)
    zeta = mp.one + ctx.reduce(heads)
    dzeta = ctx.reduce(dheads) if derivative else None

    lN = logs[N - 1]
    nps = mp.exp(-s * lN)  # N^{-s}
    sm1 = s - 1
    zeta += N * nps / sm1 + nps / 2
    if derivative:
        dzeta += -N * nps * (lN / sm1 + 1 / sm1**2) - lN * nps / 2

    # T_j = B_{2j}/(2j)! * P_j(s) * N^{-s-2j+1},  P_j(s) = s(s+1)...(s+2j-2)
    poly = s
    dpoly = mp.one
    npow = nps / N  # N^{-s-1}
    corr = []
    dcorr = []
    inv_n2 = mp.one / (N * N)
    tail_term = dtail_term = None
    for j in range(1, J + 2):
        term = weights[j - 1] * poly * npow
        dterm = weights[j - 1] * (dpoly - lN * poly) * npow if derivative else None
        if j <= J:
            corr.append(term)
            if derivative:
                dcorr.append(dterm)
        else:
            tail_term, dtail_term = term, dterm
        # advance P_j -> P_{j+1} (two more linear factors)
        for i in (2 * j - 1, 2 * j):
            dpoly = dpoly * (s + i) + poly
            poly = poly * (s + i)
        npow = npow * inv_n2
    zeta += ctx.reduce(corr)
    if derivative:
        dzeta += ctx.reduce(dcorr)

    sigma = mp.re(s)
    denom = sigma + 2 * J + 1
    if denom <= 0:
        raise PrecisionError("Euler-Maclaurin remainder bound needs Re s > -(2J+1)")
    factor = abs(s + 2 * J + 1) / denom
    bound = factor * abs(tail_term)
    dbound = (factor + 1) * abs(dtail_term) + lN * bound if derivative else None
    return zeta, dzeta, bound, dbound


def _em_evaluate(s, ctx: PrecisionContext, derivative: bool):
    mp = ctx.mp
    s = mp.mpc(s) if is_complex(s) else mp.mpf(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    N, J = em_parameters(s, ctx.bits)
    target = ctx.eps
    while True:
        z, dz, bound, dbound = _em_sums(s, N, J, ctx, derivative)
        scale = max(abs(z), mpmath.mpf(1))
        if bound <= target * scale:
            break
        if 2 * N > ctx.max_em_terms:
            raise PrecisionError(
                f"zeta at s={mp.nstr(s, 8)} needs more than {ctx.max_em_terms} terms")
        N *= 2
    terms = N + J
    err = bound + rounding_error(ctx, scale, terms)
    derr = None
    if derivative:
        derr = dbound + rounding_error(ctx, max(abs(dz), 1) * mp.log(N + 1), terms)
    return z, err, dz, derr


def zeta_em(s, ctx: PrecisionContext) -> ValueWithError:
    """Riemann zeta by Euler-Maclaurin summation with a Backlund error bound."""
    z, err, _, _ = _em_evaluate(s, ctx, derivative=False)
    return ValueWithError(z, err, ErrorKind.RIGOROUS)


def zeta_and_derivative(s, ctx: PrecisionContext) -> tuple[ValueWithError, ValueWithError]:
    """zeta(s) and zeta'(s); the derivative differentiates the EM formula term-wise."""
    z, err, dz, derr = _em_evaluate(s, ctx, derivative=True)
    # the derivative remainder uses the next term's derivative, not a proven bound
    return ValueWithError(z, err, ErrorKind.RIGOROUS), ValueWithError(dz, derr, ErrorKind.HEURISTIC)


def zeta_log_deriv(s, ctx: PrecisionContext) -> ValueWithError:
    z, dz = zeta_and_derivative(s, ctx)
    if abs(z.value) <= z.abs_error:
        raise NearZeroError(f"zeta({ctx.mp.nstr(s, 10)}) is within its error bound of zero")
    return dz / z


def xi_log_deriv(s, ctx: PrecisionContext) -> ValueWithError:
    """d/ds log Xi(s) for Xi(s) = s(s-1) Gamma(s/2) pi^(-s/2) zeta(s)."""
    mp = ctx.mp
    s = ctx.convert(s)
    if s == 0 or s == 1:
        raise PoleError("Xi log-derivative is undefined at s = 0 and s = 1")
    rational = 1 / s + 1 / (s - 1) - mp.log(mp.pi) / 2
    psi = digamma(s / 2, ctx)
    zl = zeta_log_deriv(s, ctx)
    out = zl + psi * mp.mpf(0.5) + rational
    return out.widen(rounding_error(ctx, abs(rational), 6))

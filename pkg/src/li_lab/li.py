"""Li coefficients lambda_n by three independent routes.

* ``lambda_zero_sum``: sum over zero pairs of 1 - (1 - 1/rho)^n, completed
  by a smooth tail above the table height.
* ``lambda_binomial``: the finite alternating sum of binomial-weighted
  values Z(1..n) of the secondary zeta function.
* ``lambda_cauchy``: Taylor coefficients of d/dz log Xi(1/(1-z)) read off
  with the trapezoidal rule on a circle; never looks at a zero table.

``residue_identity_check`` confirms in exact arithmetic that the residues
of Gamma(s+n) Gamma(s-n)/Gamma(2s+1) at s = 1..n reproduce the binomial
weights.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, NearZeroError, PrecisionError
from .numerics import (ErrorKind, PrecisionContext, ValueWithError, binomial, rounding_error,
                       tree_sum, xi_log_deriv)
from .secondary_zeta import TailModel, tail_power_integral, z_integers
from .zeros import ZeroTable

EPS64 = 2.0**-53


class Method(str, enum.Enum):
    ZERO_SUM = "zero_sum"
    BINOMIAL = "binomial"
    CAUCHY = "cauchy"


@dataclass(frozen=True)
class LambdaValue:
    n: int
    value: ValueWithError
    method: Method
    bits_used: int

    def __float__(self):
        return float(self.value)


def precision_for(n: int) -> int:
    """Working bits needed by the binomial route (its terms grow like e^(0.26 n))."""
    return math.ceil(0.5 * n) + 96


def context_for(n: int, base: PrecisionContext | None = None) -> PrecisionContext:
    base = base or PrecisionContext()
    return base.with_bits(max(base.bits, precision_for(n)))


# --------------------------------------------------------------------------
# method A: sum over zeros


def _pair_term_complex(tau, n: int, mp, single: bool = False):
    """2 - w^n - w^-n for the pair tau plus the same for conj(tau) unless ``single``."""
    half_i = mp.mpc(0, 0.5)
    out = mp.zero
    for t in ((tau,) if single else (tau, mp.conj(tau))):
        w = (t + half_i) / (t - half_i)
        wn = w**n
        out += 2 - wn - 1 / wn
    return mp.re(out)


def _series_mul(a, b, deg, zero):
    out = [zero] * (deg + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(min(len(b), deg + 1 - i)):
            out[i + j] += ai * b[j]
    return out


def _sin2_series(n: int, order: int, mp):
    """Coefficients d_m (m = 1..order) of 4 sin^2(n arctan(u/2)) = sum d_m u^(2m)."""
    deg = 2 * order
    # phi = 2n arctan(u/2)
    phi = [mp.zero] * (deg + 1)
    for k in range(0, deg // 2 + 1):
        p = 2 * k + 1
        if p <= deg:
            phi[p] = 2 * n * mp.mpf(-1) ** k / (p * mp.mpf(2) ** p)
    phi2 = _series_mul(phi, phi, deg, mp.zero)
    acc = [mp.zero] * (deg + 1)
    power = [mp.one] + [mp.zero] * deg
    for r in range(1, order + 1):
        power = _series_mul(power, phi2, deg, mp.zero)
        c = 2 * mp.mpf(-1) ** (r + 1) / mp.factorial(2 * r)
        for i in range(deg + 1):
            acc[i] += c * power[i]
    return [acc[2 * m] for m in range(1, order + 1)]


def _tail_series(n: int, T, tail: TailModel, ctx: PrecisionContext, max_order: int = 60):
    mp = ctx.mp
    alpha, beta = tail.density(ctx)
    order = 4
    while True:
        coeffs = _sin2_series(n, order, mp)
        terms = [d * tail_power_integral(2 * m, mp.mpf(T), alpha, beta, mp)
                 for m, d in enumerate(coeffs, start=1)]
        if abs(terms[-1]) <= ctx.eps * abs(terms[0]) or order >= max_order:
            break
        order = min(2 * order, max_order)
    return ctx.reduce(terms[:-1]), abs(terms[-1])


def _tail_quadrature(n: int, T: float, tail: TailModel, ctx: PrecisionContext):
    """int_T^inf 4 sin^2(n arctan(1/2t)) N'(t) dt in the angle variable."""
    alpha, beta = (float(v) for v in tail.density(ctx))
    theta_T = math.atan(0.5 / T)

    def f(th):
        if th == 0:
            return 0.0
        t = 0.5 / math.tan(th)
        return 4 * math.sin(n * th) ** 2 * (alpha * math.log(t) + beta) / (2 * math.sin(th) ** 2)

    pieces = max(1, int(n * theta_T / math.pi) + 1)
    edges = np.linspace(0.0, theta_T, pieces + 1)
    vals, errs = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(f, a, b, limit=200, epsabs=0, epsrel=1e-13)
        vals.append(v)
        errs.append(e)
    total = math.fsum(vals)
    return ctx.mp.mpf(total), mpmath.mpf(math.fsum(errs) + 1e-13 * abs(total))


def zero_sum_tail(n: int, T: float, tail: TailModel, ctx: PrecisionContext) -> ValueWithError:
    """Smooth completion above T of the pair sum for lambda_n."""
    if n / T <= 0.5:
        v, e = _tail_series(n, T, tail, ctx)
    else:
        v, e = _tail_quadrature(n, T, tail, ctx)
    return ValueWithError(v, e + rounding_error(ctx, v, 16), ErrorKind.HEURISTIC)


def _use_numpy(table: ZeroTable, backend: str) -> bool:
    if backend in ("numpy", "mpmath"):
        return backend == "numpy"
    # only the real base ordinates go through float64; injected pairs are summed separately
    return len(table.ordinates) == len(table.base_pairs) >= 5000 and table.significant_digits <= 16


def _base_thetas(table: ZeroTable, prec: int):
    cache = table.__dict__.setdefault("_theta_cache", {})
    if prec not in cache:
        from .numerics import mp_context
        mp = mp_context(prec)
        cache[prec] = tuple(mp.atan(1 / (2 * t)) for t in table.base_taus(prec))
    return cache[prec]


def _direct_pairs_sum(pairs, n: int, ctx: PrecisionContext):
    mp = ctx.mp
    terms = []
    for p in pairs:
        tau = p.tau(ctx)
        if p.is_real:
            terms.append(4 * mp.sin(n * mp.atan(1 / (2 * tau))) ** 2)
        else:
            terms.append(_pair_term_complex(tau, n, mp, single=p.self_conjugate))
    return terms


def lambda_zero_sum_many(ns: Sequence[int], table: ZeroTable, tail: TailModel | None = None,
                         ctx: PrecisionContext | None = None, *, backend: str = "auto",
                         tail_fraction_limit: float = 0.25) -> list[LambdaValue]:
    """Method A for several n at once (the numpy path vectorises over n)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    ns = [int(n) for n in ns]
    if any(n < 1 for n in ns):
        raise DomainError("n must be >= 1")

    use_tail = table.continuable and tail is not None
    if use_tail:
        T = tail.resolve_cutoff(table)
        count = table.count_below(T)
        direct = table.injected_pairs
        nxt = table.ordinates[count] if count < len(table.ordinates) else T
    else:
        count = 0
        direct = table.pairs

    heads: dict[int, tuple] = {}
    if count:
        if _use_numpy(table, backend):
            theta = np.arctan(0.5 / table.ordinates[:count])
            theta_sum = float(np.sum(theta))
            for start in range(0, len(ns), 16):
                chunk = np.array(ns[start:start + 16], dtype=float)
                vals = 4 * np.sin(np.outer(chunk, theta)) ** 2
                sums = vals.sum(axis=1)
                for n, s in zip(ns[start:start + 16], sums):
                    err = EPS64 * (4 * n * theta_sum + (math.log2(count) + 4) * s)
                    heads[n] = (mp.mpf(float(s)), mpmath.mpf(err))
        else:
            thetas = _base_thetas(table, ctx.bits + ctx.guard_bits)[:count]
            for n in ns:
                terms = [4 * mp.sin(n * th) ** 2 for th in thetas]
                s = ctx.reduce(terms)
                heads[n] = (s, rounding_error(ctx, s, 8 + int(math.log2(count)) + n.bit_length()))

    out = []
    for n in ns:
        head, herr = heads.get(n, (mp.zero, mpmath.mpf(0)))
        dterms = _direct_pairs_sum(direct, n, ctx)
        dsum = ctx.reduce(dterms)
        derr = rounding_error(ctx, sum(abs(t) for t in dterms) + 1, 4 * n.bit_length() + 8)
        val = ValueWithError(head + dsum, herr + derr)
        if use_tail:
            tv = zero_sum_tail(n, T, tail, ctx)
            osc = 2 * 4 * math.sin(n * math.atan(0.5 / float(nxt))) ** 2
            val = (val + tv).widen(osc, ErrorKind.HEURISTIC)
            if abs(tv.value) > tail_fraction_limit * abs(val.value):
                # tail carries too much of the total to trust the smooth density
                val = val.widen(abs(tv.value) * 0.1, ErrorKind.HEURISTIC)
        out.append(LambdaValue(n, val, Method.ZERO_SUM, ctx.bits))
    return out


def lambda_zero_sum(n: int, table: ZeroTable, tail: TailModel | None = None,
                    ctx: PrecisionContext | None = None, *, backend: str = "auto") -> LambdaValue:
    """lambda_n = sum over pairs of 4 sin^2(n arctan(1/2 tau)) (+ complex pairs, + tail)."""
    return lambda_zero_sum_many([n], table, tail, ctx, backend=backend)[0]


# --------------------------------------------------------------------------
# method B: binomial sum over Z(j)


@lru_cache(maxsize=512)
def binomial_weights(n: int) -> tuple[Fraction, ...]:
    """Exact weights c_j with lambda_n = sum_j c_j Z(j):  -n (-1)^j / j * C(n+j-1, 2j-1)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return tuple(Fraction(-n * (-1) ** j * binomial(n + j - 1, 2 * j - 1), j)
                 for j in range(1, n + 1))


def lambda_binomial(n: int, zvals: Sequence[ValueWithError], ctx: PrecisionContext | None = None
                    ) -> LambdaValue:
    """Method B from precomputed Z(1..n)."""
    ctx = ctx or context_for(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    if len(zvals) < n:
        raise DomainError(f"need Z(1..{n}), got {len(zvals)} values")
    if ctx.bits < precision_for(n):
        raise PrecisionError(f"n = {n} needs at least {precision_for(n)} bits, got {ctx.bits}")
    mp = ctx.mp
    weights = binomial_weights(n)
    terms = []
    err = mpmath.mpf(0)
    kind = ErrorKind.RIGOROUS
    for c, z in zip(weights, zvals[:n]):
        cz = mp.mpf(c.numerator) / c.denominator
        zv = mp.mpf(mpmath.re(z.value))
        terms.append(cz * zv)
        err += abs(cz) * z.abs_error
        if z.error_kind is ErrorKind.HEURISTIC:
            kind = ErrorKind.HEURISTIC
    value = ctx.reduce(terms)
    magnitude = max(abs(t) for t in terms)
    # bits lost to cancellation, measured against a unit scale so exact zeros are fine
    lost = float(mpmath.log(max(magnitude, 1) / max(abs(value), 1), 2))
    if lost > ctx.bits + ctx.guard_bits - 48:
        raise PrecisionError(f"cancellation loses {lost:.0f} bits, more than available")
    err += rounding_error(ctx, magnitude, 2 * n + 4)
    return LambdaValue(n, ValueWithError(value, err, kind), Method.BINOMIAL, ctx.bits)


def lambda_binomial_table(n: int, table: ZeroTable, tail: TailModel | None = None,
                          ctx: PrecisionContext | None = None) -> LambdaValue:
    ctx = ctx or context_for(n)
    return lambda_binomial(n, z_integers(n, table, tail, ctx), ctx)


# --------------------------------------------------------------------------
# method C: Cauchy coefficients of the generating function


@lru_cache(maxsize=8)
def _cauchy_samples(radius: str, nodes: int, ctx: PrecisionContext):
    """f(z_q) for z_q = r exp(2 pi i q / nodes), q = 0..nodes/2 (rest by conjugation)."""
    mp = ctx.mp
    r = mp.mpf(radius)
    out = []
    for q in range(nodes // 2 + 1):
        z = r * mp.expjpi(mp.mpf(2 * q) / nodes)
        if q == 0:
            z = mp.mpc(r, 0)
        elif 2 * q == nodes:
            z = mp.mpc(-r, 0)
        one_mz = 1 - z
        s = 1 / one_mz
        if abs(s) < 1e-6 or abs(s - 1) < 1e-6:
            raise DomainError("a quadrature node maps onto s = 0 or s = 1")
        try:
            xi = xi_log_deriv(s, ctx)
        except NearZeroError as exc:
            raise DomainError(f"quadrature node near a zeta zero: {exc}") from exc
        out.append(xi / ValueWithError(one_mz**2))
    return tuple(out)


def _coefficient(samples, nodes: int, step: int, k: int, r, mp):
    """Trapezoidal estimate of the z^k coefficient from every ``step``-th node."""
    q_count = nodes // step
    terms = []
    for q in range(q_count):
        idx = q * step
        if idx <= nodes // 2:
            f = samples[idx].value
        else:
            f = mp.conj(samples[nodes - idx].value)
        terms.append(f * mp.expjpi(-mp.mpf(2 * q * k) / q_count))
    return tree_sum(terms, mp.zero) / (q_count * r**k)


def lambda_cauchy(n: int, radius=None, nodes: int | None = None,
                  ctx: PrecisionContext | None = None, *, max_n: int = 32) -> LambdaValue:
    """lambda_n as the z^(n-1) Taylor coefficient of d/dz log Xi(1/(1-z)).

    Uses ``nodes`` and ``2*nodes`` trapezoidal nodes on |z| = radius; their
    difference is the aliasing estimate folded into the error.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if not 1 <= n <= max_n:
        raise DomainError(f"n must lie in [1, {max_n}]")
    radius = "0.9" if radius is None else str(radius)
    nodes = 512 if nodes is None else nodes
    if nodes & (nodes - 1) or nodes <= 4 * n:
        raise DomainError("node count must be a power of two larger than 4n")
    if not 0 < float(radius) < 1:
        raise DomainError("radius must lie in (0, 1)")
    fine = 2 * nodes
    samples = _cauchy_samples(radius, fine, ctx)
    r = mp.mpf(radius)
    k = n - 1
    a_fine = _coefficient(samples, fine, 1, k, r, mp)
    a_mid = _coefficient(samples, fine, 2, k, r, mp)
    a_coarse = _coefficient(samples, fine, 4, k, r, mp)
    d1 = abs(a_mid - a_fine)
    d0 = abs(a_coarse - a_mid)
    floor = ctx.eps * max(abs(a_fine), 1) * 1024 / r**k
    if d1 > floor and d1 >= d0:
        raise ConvergenceError(f"aliasing estimate does not shrink ({float(d0):.3g} -> {float(d1):.3g})")
    sample_err = max(s.abs_error for s in samples) / r**k
    kind = ErrorKind.HEURISTIC
    err = d1 + sample_err + abs(mp.im(a_fine)) + rounding_error(ctx, max(abs(s.value) for s in samples) / r**k, fine)
    return LambdaValue(n, ValueWithError(mp.re(a_fine), err, kind), Method.CAUCHY, ctx.bits)


# --------------------------------------------------------------------------
# residues of the Mellin-Barnes integrand


@dataclass(frozen=True)
class ResidueCertificate:
    n: int
    rows: tuple[tuple[int, Fraction, Fraction], ...]  # (j, residue route, binomial route)

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.rows)

    def __bool__(self):
        return self.ok


def _gamma_residue(m: int) -> Fraction:
    """Res of Gamma at -m: (-1)^m / m!."""
    return Fraction((-1) ** m, math.factorial(m))


def residue_identity_check(n: int) -> ResidueCertificate:
    """Compare -2n(-1)^n Res_{s=j} Gamma(s+n)Gamma(s-n)/Gamma(2s+1) with the weights c_j."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rows = []
    for j, c in zip(range(1, n + 1), binomial_weights(n)):
        # Gamma(s-n) has its pole at s = j with s - n = -(n - j)
        res = math.factorial(j + n - 1) * _gamma_residue(n - j) / math.factorial(2 * j)
        rows.append((j, -2 * n * (-1) ** n * res, c))
    return ResidueCertificate(n, tuple(rows))

"""Stieltjes constants, Stieltjes cumulants and the combinations S_n.

The Stieltjes constants gamma_m are the Laurent coefficients of zeta at 1:
zeta(1+s) = 1/s + sum_m (-1)^m gamma_m s^m / m!.  The cumulants are
g_n = (-1)^(n-1) d^n/ds^n log(s zeta(1+s)) at s = 0, and also

    g_n = -lim_M [ sum_{m<=M} Lambda(m) (log m)^(n-1) / m - (log M)^n / n ],

the second ("prime-sum") form converging slowly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import mpmath
import numpy as np

from .errors import DomainError, PrecisionError, ZeroTableError
from .numerics import ErrorKind, PrecisionContext, ValueWithError, mp_context, rounding_error


class Provenance(str, enum.Enum):
    COMPUTED = "computed"
    INGESTED = "ingested"


class Route(str, enum.Enum):
    SERIES = "series"
    PRIME_SUM = "prime_sum"


@dataclass(frozen=True)
class StieltjesTable:
    gammas: tuple            # mpf values gamma_0 .. gamma_M
    errors: tuple            # absolute error per entry
    digits: int
    provenance: Provenance
    source: str = ""

    def __len__(self):
        return len(self.gammas)

    @property
    def M(self) -> int:
        return len(self.gammas) - 1

    def gamma(self, m: int) -> ValueWithError:
        return ValueWithError(self.gammas[m], self.errors[m], ErrorKind.HEURISTIC)


@dataclass(frozen=True)
class CumulantValue:
    n: int
    g: ValueWithError
    route: Route


def euler_gamma(ctx: PrecisionContext | None = None) -> ValueWithError:
    """gamma = -psi(1), computed by the numerics context."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    return ValueWithError(-mp.digamma(1), rounding_error(ctx, 1, 4), ErrorKind.RIGOROUS)


# --------------------------------------------------------------------------
# Stieltjes constants by Euler-Maclaurin


def _falling_polys(rmax: int, deg: int) -> list[list[int]]:
    """Coefficients p_{r,i} of (u-1)(u-2)...(u-r) = sum_i p_{r,i} u^(r-i)... stored by u-power.

    Returned as polys[r][k] = coefficient of u^k, truncated to k <= deg.
    """
    polys = [[1]]
    cur = [1]
    for r in range(1, rmax + 1):
        nxt = [0] * min(len(cur) + 1, deg + 1)
        for k, c in enumerate(cur):
            if k < len(nxt):
                nxt[k] -= r * c
            if k + 1 < len(nxt):
                nxt[k + 1] += c
        cur = nxt
        polys.append(cur)
    return polys


def _em_stieltjes(M: int, N: int, J: int, prec: int):
    """gamma_0..gamma_M with a truncated Euler-Maclaurin tail at N using J Bernoulli terms.

    The derivatives of (log x)^m / x come from x^(u-1) = sum_m (log x)^m u^m / m! / x:
    d^r/dx^r x^(u-1) = P_r(u) x^(u-1-r) with P_r(u) = (u-1)...(u-r).
    Returns (values, error estimates).
    """
    mp = mp_context(prec)
    # direct part sum_{k<N} (log k)^m / k
    direct = [mp.zero] * (M + 1)
    for k in range(2, N):
        lk = mp.log(k)
        term = mp.one / k
        for m in range(M + 1):
            direct[m] += term
            term *= lk
    direct[0] += 1  # k = 1 contributes only to m = 0
    L = mp.log(N)
    Lpow = [mp.one]
    for _ in range(M + 1):
        Lpow.append(Lpow[-1] * L)
    fact = [mp.one]
    for m in range(1, M + 2):
        fact.append(fact[-1] * m)

    polys = _falling_polys(2 * J + 1, M)
    bern = [mp.bernoulli(2 * j) / mp.factorial(2 * j) for j in range(1, J + 2)]
    # c[i] = sum_j B_2j/(2j)! N^-2j [u^i] P_{2j-1}(u); the last j is kept separately as error
    c = [mp.zero] * (M + 1)
    c_last = [mp.zero] * (M + 1)
    Ninv2 = mp.one / (mp.mpf(N) ** 2)
    scale = mp.one
    for j in range(1, J + 2):
        scale *= Ninv2
        poly = polys[2 * j - 1]
        target = c if j <= J else c_last
        w = bern[j - 1] * scale
        for i, p in enumerate(poly):
            if p:
                target[i] += w * p

    def conv(coeffs, m):
        # m! sum_i coeffs[i] L^(m-i) / (m-i)!
        return fact[m] * mp.fsum(coeffs[i] * Lpow[m - i] / fact[m - i] for i in range(m + 1))

    values, errors = [], []
    for m in range(M + 1):
        f_N = Lpow[m] / N
        v = direct[m] - Lpow[m + 1] / (m + 1) + f_N / 2 - conv(c, m)
        # remainder ~ first omitted Bernoulli term; factor 2 covers the zeta(2J) constant
        err = 2 * abs(conv(c_last, m))
        values.append(v)
        errors.append(err)
    return values, errors


def stieltjes_constants(M: int, ctx: PrecisionContext | None = None, *, N: int | None = None,
                        max_M: int = 2000) -> StieltjesTable:
    """gamma_0..gamma_M to about ctx.bits relative... absolute precision 2^-bits."""
    ctx = ctx or PrecisionContext()
    if M < 0:
        raise DomainError("M must be >= 0")
    if M > max_M:
        raise PrecisionError(f"M = {M} exceeds the configured ceiling {max_M}")
    bits = ctx.bits + ctx.guard_bits
    # (log N)^(m+1)/(m+1) is far bigger than gamma_m; carry the lost bits as extra precision
    L0 = math.log(max(N or 1000, 1000))
    prec = bits + int(M * math.log2(max(L0, 2))) + 64
    J = max(4, math.ceil(bits / 8))
    if N is None:
        N = max(64, math.ceil(16 * (M / L0 + 2 * J) / (2 * math.pi)))
    target = mpmath.mpf(2) ** -ctx.bits
    for _ in range(6):
        values, errors = _em_stieltjes(M, N, J, prec)
        if max(errors) <= target:
            break
        N *= 2
    else:
        raise PrecisionError("Euler-Maclaurin remainder did not reach the requested precision")
    mp = ctx.mp
    vals = tuple(mp.mpf(v) for v in values)
    errs = tuple(mpmath.mpf(e) + target / 2**16 for e in errors)
    digits = int(ctx.bits * math.log10(2))
    return StieltjesTable(vals, errs, digits, Provenance.COMPUTED, f"euler-maclaurin N={N} J={J}")


def load_stieltjes(path: str | Path, digits: int | None = None) -> StieltjesTable:
    """Read gamma_0, gamma_1, ... one per line ('#' comments allowed)."""
    path = Path(path)
    if not path.exists():
        raise ZeroTableError(f"Stieltjes file not found: {path}")
    vals = []
    prec = 64
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            float(line)
        except ValueError:
            raise ZeroTableError("malformed value", line=lineno) from None
        prec = max(prec, int(len(line) * 3.33) + 16)
        vals.append(line)
    if not vals:
        raise ZeroTableError("no values in Stieltjes file")
    mp = mp_context(prec)
    gammas = tuple(mp.mpf(v) for v in vals)
    if digits is None:
        digits = min(len(v.split(".")[-1]) for v in vals)
    if abs(gammas[0] - mp.euler) > mpmath.mpf(10) ** -min(digits, 30):
        raise ZeroTableError("first entry does not agree with Euler's constant", line=1)
    err = mpmath.mpf(10) ** -digits
    return StieltjesTable(gammas, (err,) * len(gammas), digits, Provenance.INGESTED, str(path))


# --------------------------------------------------------------------------
# cumulants


def _log_series(a: Sequence, da: Sequence, n: int, mp):
    """Coefficients l_1..l_n of log(1 + sum_k a_k s^k) with first-order error bounds."""
    ell = [mp.zero] * (n + 1)
    dl = [mpmath.mpf(0)] * (n + 1)
    for k in range(1, n + 1):
        acc = a[k]
        err = da[k]
        for i in range(1, k):
            acc -= mp.mpf(i) / k * ell[i] * a[k - i]
            err += mpmath.mpf(i) / k * (dl[i] * abs(a[k - i]) + abs(ell[i]) * da[k - i])
        ell[k] = acc
        dl[k] = err
    return ell, dl


def cumulants_series(nmax: int, table: StieltjesTable, ctx: PrecisionContext | None = None
                     ) -> list[CumulantValue]:
    """g_1..g_nmax from the power series of s zeta(1+s)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if nmax < 1:
        raise DomainError("n must be >= 1")
    if len(table) < nmax:
        raise DomainError(f"Stieltjes table too short: need gamma_0..gamma_{nmax - 1}")
    # s zeta(1+s) = 1 + sum_m (-1)^m gamma_m / m! s^(m+1)
    a = [mp.zero] * (nmax + 1)
    da = [mpmath.mpf(0)] * (nmax + 1)
    fact = mp.one
    for m in range(nmax):
        if m:
            fact *= m
        a[m + 1] = (-1) ** m * mp.mpf(table.gammas[m]) / fact
        da[m + 1] = table.errors[m] / fact
    ell, dl = _log_series(a, da, nmax, mp)
    out = []
    nfact = mp.one
    for n in range(1, nmax + 1):
        nfact *= n
        g = (-1) ** (n - 1) * nfact * ell[n]
        err = nfact * (dl[n] + rounding_error(ctx, abs(ell[n]) + 1, 4 * n))
        out.append(CumulantValue(n, ValueWithError(g, err, ErrorKind.HEURISTIC), Route.SERIES))
    return out


def cumulant_series(n: int, table: StieltjesTable, ctx: PrecisionContext | None = None
                    ) -> CumulantValue:
    return cumulants_series(n, table, ctx)[-1]


def eta_values(cumulants: Sequence[CumulantValue]) -> list[ValueWithError]:
    """eta_{n-1} = (-1)^n g_n / (n-1)!."""
    out = []
    for c in cumulants:
        f = math.factorial(c.n - 1)
        out.append(c.g * ((-1) ** c.n) / f)
    return out


def sn_precision(n: int) -> int:
    return 4 * n + 96


def s_n_many(nmax: int, table: StieltjesTable, ctx: PrecisionContext | None = None
             ) -> list[ValueWithError]:
    """S_1..S_nmax with S_n = sum_j ((-1)^(j-1)/(j-1)!) C(n,j) g_j."""
    ctx = ctx or PrecisionContext(bits=sn_precision(nmax))
    if ctx.bits < sn_precision(nmax):
        raise PrecisionError(f"S_{nmax} needs at least {sn_precision(nmax)} bits, got {ctx.bits}")
    cums = cumulants_series(nmax, table, ctx)
    weighted = []
    werr = []
    for c in cums:
        f = math.factorial(c.n - 1)
        weighted.append((-1) ** (c.n - 1) * c.g.value / f)
        werr.append(c.g.abs_error / f)
    out = []
    for n in range(1, nmax + 1):
        terms = []
        err = mpmath.mpf(0)
        for j in range(1, n + 1):
            b = math.comb(n, j)
            terms.append(b * weighted[j - 1])
            err += b * werr[j - 1]
        v = ctx.reduce(terms)
        err += rounding_error(ctx, max(abs(t) for t in terms), 2 * n + 4)
        out.append(ValueWithError(v, err, ErrorKind.HEURISTIC))
    return out


def s_n(n: int, table: StieltjesTable, ctx: PrecisionContext | None = None) -> ValueWithError:
    if n < 1:
        raise DomainError("n must be >= 1")
    return s_n_many(n, table, ctx)[-1]


# --------------------------------------------------------------------------
# prime-sum route


@dataclass
class PrimeSums:
    """sum_{m<=X} Lambda(m) (log m)^(k) / m for k = 0..kmax at X = M and X = M/2."""
    M: int
    kmax: int
    full: np.ndarray
    half: np.ndarray
    segments: int = 0
    extra: dict = field(default_factory=dict)


def _base_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


def prime_sums(M: int, kmax: int, *, segment: int = 1 << 21, max_M: int = 10**9) -> PrimeSums:
    """Segmented sieve of Eratosthenes over [2, M]; pairwise (fixed-tree) summation per segment."""
    if M < 100:
        raise DomainError("sieve bound must be >= 100")
    if M > max_M:
        raise DomainError(f"sieve bound {M} exceeds capacity {max_M}")
    half = M // 2
    root = math.isqrt(M)
    base = _base_primes(root)
    seg_full: list[np.ndarray] = []
    seg_half: list[np.ndarray] = []
    ks = np.arange(kmax + 1)

    def contrib(primes: np.ndarray) -> np.ndarray:
        if primes.size == 0:
            return np.zeros(kmax + 1)
        lp = np.log(primes.astype(np.float64))
        w = lp / primes
        return np.array([np.sum(w * lp**k) for k in ks])

    nseg = 0
    for lo in range(2, M + 1, segment):
        hi = min(lo + segment, M + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mark[start - lo::p] = False
        primes = np.flatnonzero(mark) + lo
        seg_full.append(contrib(primes))
        seg_half.append(contrib(primes[primes <= half]))
        nseg += 1

    # prime powers p^e, e >= 2
    pw_full, pw_half = [], []
    for p in base:
        p = int(p)
        lp = math.log(p)
        q = p * p
        while q <= M:
            lq = math.log(q)
            row = np.array([lp / q * lq**k for k in ks])
            pw_full.append(row)
            if q <= half:
                pw_half.append(row)
            q *= p

    def tree(rows):
        rows = list(rows)
        if not rows:
            return np.zeros(kmax + 1)
        while len(rows) > 1:
            rows = [rows[i] + rows[i + 1] if i + 1 < len(rows) else rows[i]
                    for i in range(0, len(rows), 2)]
        return rows[0]

    full = tree(seg_full) + tree(pw_full)
    hsum = tree(seg_half) + tree(pw_half)
    return PrimeSums(M, kmax, full, hsum, nseg)


def cumulants_prime_sum(nmax: int, M: int, sums: PrimeSums | None = None) -> list[CumulantValue]:
    """g_n ~ -[sum Lambda(m)(log m)^(n-1)/m - (log M)^n/n]; error = |value(M) - value(M/2)|."""
    if nmax < 1:
        raise DomainError("n must be >= 1")
    if sums is None or sums.M != M or sums.kmax < nmax - 1:
        sums = prime_sums(M, nmax - 1)
    out = []
    lm, lh = math.log(M), math.log(M // 2)
    for n in range(1, nmax + 1):
        vf = -(sums.full[n - 1] - lm**n / n)
        vh = -(sums.half[n - 1] - lh**n / n)
        err = abs(vf - vh) + 1e-12 * lm**n
        out.append(CumulantValue(n, ValueWithError(mpmath.mpf(vf), err, ErrorKind.HEURISTIC),
                                 Route.PRIME_SUM))
    return out


def cumulant_prime_sum(n: int, M: int) -> CumulantValue:
    return cumulants_prime_sum(n, M)[-1]

"""Large-n behaviour of lambda_n in both regimes, and saddle-point diagnostics.

With all zeros on the critical line, lambda_n grows like n log n with a
constant fixed by the polar data (R_-2, R_-1) of the secondary zeta function;
for the Riemann zeros this reduces to n/2 (log n - log 2 pi - 1 + gamma).
An off-axis pair tau instead contributes a term growing like |w|^n with
w = (tau + i/2)/(tau - i/2), which eventually dominates and turns negative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from scipy import optimize

from .errors import DomainError
from .numerics import PrecisionContext
from .secondary_zeta import PolarData, TailModel, z_eval
from .zeros import ZeroTable, inject_off_axis

DELTA = mpmath.mpf(7) / 4  # 2 Z(0)


class PredictorKind(str, enum.Enum):
    RH_TRUE_GENERAL = "rh_true_general"
    RH_TRUE_RIEMANN = "rh_true_riemann"
    RH_FALSE = "rh_false"


def _check_off_axis(taus):
    out = []
    for t in taus:
        t = complex(t)
        if t.imag == 0:
            raise DomainError("off-axis tau must have a nonzero imaginary part")
        if t.imag < 0:
            raise DomainError("off-axis tau must satisfy arg tau > 0")
        out.append(t)
    if not out:
        raise DomainError("at least one off-axis tau is required")
    return out


@dataclass(frozen=True)
class Predictor:
    kind: PredictorKind
    polar: PolarData | None = None
    off_axis: tuple = ()
    include_delta: bool = False

    def __post_init__(self):
        if self.kind is PredictorKind.RH_FALSE:
            _check_off_axis(self.off_axis)
        if self.kind is PredictorKind.RH_TRUE_GENERAL and self.polar is None:
            raise DomainError("general predictor needs polar data")

    def __call__(self, n: int, ctx: PrecisionContext | None = None):
        if self.kind is PredictorKind.RH_TRUE_RIEMANN:
            return predict_riemann(n, ctx, include_delta=self.include_delta)
        if self.kind is PredictorKind.RH_TRUE_GENERAL:
            return predict_rh_true_general(n, self.polar, ctx, include_delta=self.include_delta)
        return predict_rh_false(n, self.off_axis, ctx).value


def predict_rh_true_general(n: int, polar: PolarData, ctx: PrecisionContext | None = None, *,
                            include_delta: bool = False):
    """2 pi n [2 R_-2 log n - 2 R_-2 (1 - gamma) + R_-1]."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if n < 1:
        raise DomainError("n must be >= 1")
    r2, r1 = mp.mpf(polar.R_minus2), mp.mpf(polar.R_minus1)
    v = 2 * mp.pi * n * (2 * r2 * mp.log(n) - 2 * r2 * (1 - mp.euler) + r1)
    return v + DELTA if include_delta else v


def predict_riemann(n: int, ctx: PrecisionContext | None = None, *, include_delta: bool = False):
    """n/2 (log n - log 2 pi - 1 + gamma)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if n < 1:
        raise DomainError("n must be >= 1")
    v = mp.mpf(n) / 2 * (mp.log(n) - mp.log(2 * mp.pi) - 1 + mp.euler)
    return v + DELTA if include_delta else v


def predict_riemann_array(ns, include_delta: bool = False) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    v = ns / 2 * (np.log(ns) - math.log(2 * math.pi) - 1 + float(mpmath.euler))
    return v + 1.75 if include_delta else v


@dataclass(frozen=True)
class RhFalsePrediction:
    n: int
    value: object              # real: sum of w^n + conj
    complex_sum: object        # sum of w^n over the off-axis taus
    growth_rates: tuple        # log |w| per tau
    n_onset: float             # min over tau of 1/|Im(1/tau)|

    @property
    def modulus(self):
        return abs(self.complex_sum)


def growth_rate(tau, ctx: PrecisionContext | None = None):
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    t = mp.mpc(complex(tau)) if not hasattr(tau, "_mpc_") else mp.mpc(tau)
    return mp.log(abs(t + mp.mpc(0, 0.5)) / abs(t - mp.mpc(0, 0.5)))


def onset_estimate(tau) -> float:
    return 1.0 / abs((1 / complex(tau)).imag)


def predict_rh_false(n: int, off_axis: Sequence, ctx: PrecisionContext | None = None
                     ) -> RhFalsePrediction:
    """sum_k w_k^n + c.c. with w_k = (tau_k + i/2)/(tau_k - i/2)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if n < 0:
        raise DomainError("n must be >= 0")
    taus = _check_off_axis(off_axis)
    half_i = mp.mpc(0, 0.5)
    total = mp.mpc(0)
    for t in taus:
        t = mp.mpc(t)
        total += ((t + half_i) / (t - half_i)) ** n
    rates = tuple(growth_rate(t, ctx) for t in taus)
    onset = min(onset_estimate(t) for t in taus)
    return RhFalsePrediction(n, 2 * mp.re(total), total, rates, onset)


# --------------------------------------------------------------------------
# saddle points


@dataclass(frozen=True)
class SaddleReal:
    n: int
    sigma: object
    deviation: object      # (sigma - 1/2) log n
    interior: bool


def log_modulus(sigma, n: int, table: ZeroTable, tail: TailModel | None, ctx: PrecisionContext):
    """log of pi [sin(pi s) Gamma(2s+1)]^-1 n^(2s-1) Z(s)."""
    mp = ctx.mp
    s = mp.mpf(sigma)
    z = z_eval(s, table, tail, ctx).value
    return (mp.log(mp.pi) - mp.log(mp.sin(mp.pi * s)) - mp.loggamma(2 * s + 1)
            + (2 * s - 1) * mp.log(n) + mp.log(mp.re(z)))


def saddle_real(n: int, table: ZeroTable, tail: TailModel | None = None,
                ctx: PrecisionContext | None = None, *, delta: float = 1e-3,
                tol: float = 1e-8) -> SaddleReal:
    """Golden-section minimiser of the modulus approximation on (1/2 + delta, 1 - delta)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if n < 10:
        raise DomainError("saddle_real needs n >= 10")
    a, b = mp.mpf(0.5) + delta, mp.mpf(1) - delta
    g = (mp.sqrt(5) - 1) / 2

    def f(x):
        return log_modulus(x, n, table, tail, ctx)

    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:  # ties move toward the lower sigma
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    sigma = (a + b) / 2
    lo, hi = mp.mpf(0.5) + delta, mp.mpf(1) - delta
    interior = bool(sigma - lo > 10 * tol and hi - sigma > 10 * tol)
    return SaddleReal(n, sigma, (sigma - mp.mpf(0.5)) * mp.log(n), interior)


@dataclass(frozen=True)
class SaddleComplex:
    sigma: complex
    eligible: bool       # n |Im 1/tau| > 1
    in_domain: bool      # Re sigma > 1/2


def saddle_complex(n: int, tau, ctx: PrecisionContext | None = None) -> SaddleComplex:
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    t = mp.mpc(complex(tau))
    if t == 0:
        raise DomainError("tau must be nonzero")
    sigma = mp.mpc(0, n) / (2 * t)
    eligible = bool(n * abs(mp.im(1 / t)) > 1)
    return SaddleComplex(complex(sigma), eligible, bool(mp.re(sigma) > 0.5))


# --------------------------------------------------------------------------
# sandbox: an injected off-axis quadruple


@dataclass
class GrowthFit:
    rate: float
    amplitude: float
    frequency: float
    offset: float
    window: tuple


def fit_growth(ns: np.ndarray, dev: np.ndarray) -> GrowthFit:
    """Fit dev ~ c + A exp(k n) cos(w n + phi) over the given window."""
    ns = np.asarray(ns, dtype=float)
    dev = np.asarray(dev, dtype=float)
    if len(ns) < 16:
        return _fit_loglinear(ns, dev)
    x = ns - ns[0]
    centred = dev - dev.mean()
    power = np.abs(np.fft.rfft(centred * np.hanning(len(centred))))
    freqs = np.fft.rfftfreq(len(centred), d=float(ns[1] - ns[0]))
    w0 = 2 * np.pi * freqs[1 + int(np.argmax(power[1:]))]
    a0 = float(np.sqrt(2) * centred.std())

    def model(x, c, a, k, w, phi):
        return c + a * np.exp(k * x) * np.cos(w * x + phi)

    best = None
    for phi0 in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        try:
            p, _ = optimize.curve_fit(model, x, dev, p0=[dev.mean(), a0, 0.0, w0, phi0], maxfev=20000)
        except RuntimeError:
            continue
        resid = float(np.sum((model(x, *p) - dev) ** 2))
        if best is None or resid < best[0]:
            best = (resid, p)
    if best is None:
        return _fit_loglinear(ns, dev)
    c, a, k, w, _ = best[1]
    return GrowthFit(float(k), float(abs(a)), float(abs(w)), float(c), (int(ns[0]), int(ns[-1])))


def _fit_loglinear(ns: np.ndarray, dev: np.ndarray) -> GrowthFit:
    """Fallback for short or non-oscillating windows: straight line through log |dev|."""
    mask = np.abs(dev) > 0
    if mask.sum() < 2:
        raise DomainError("growth fit needs at least two nonzero deviations")
    k, c = np.polyfit(ns[mask], np.log(np.abs(dev[mask])), 1)
    return GrowthFit(float(k), float(math.exp(c)), 0.0, 0.0, (int(ns[0]), int(ns[-1])))


@dataclass
class SandboxResult:
    tau_star: complex
    ns: np.ndarray
    lambdas: np.ndarray
    errors: np.ndarray
    riemann: np.ndarray
    rh_false: np.ndarray
    fit: GrowthFit
    theory_rate: float
    n_onset: float
    first_negative: int | None
    onset: int | None              # first n with |lambda_n - predict_riemann(n)| > 1
    excess_onset: int | None       # first n where the quadruple departs by > 1 from on-axis pairs
    extra: dict = field(default_factory=dict)


def sandbox(tau_star, base: ZeroTable, nmax: int, tail: TailModel | None = None,
            ctx: PrecisionContext | None = None) -> SandboxResult:
    """Inject tau* into ``base`` and compute lambda_1..lambda_nmax by the zero sum."""
    from .li import lambda_zero_sum_many

    ctx = ctx or PrecisionContext(bits=64, guard_bits=16)
    table = inject_off_axis(base, tau_star)
    ns = np.arange(1, nmax + 1)
    vals = lambda_zero_sum_many(list(ns), table, tail, ctx)
    lam = np.array([float(v.value.value) for v in vals])
    err = np.array([float(v.value.abs_error) for v in vals])
    riem = predict_riemann_array(ns)
    tau = complex(tau_star)
    tau = complex(tau.real, abs(tau.imag))
    w = (tau + 0.5j) / (tau - 0.5j)
    rh_false = 2 * np.real(w ** ns.astype(float))
    dev = lam - riem
    q = min(nmax, max(8, nmax // 4))
    fit = fit_growth(ns[-q:], dev[-q:])
    neg = np.flatnonzero(lam < 0)
    big = np.flatnonzero(np.abs(dev) > 1)
    # the quadruple versus two on-axis pairs at Re tau*
    nf = ns.astype(float)
    if tau.real == 0:
        # degenerate quadruple: one pair 1/2 -+ Im tau, nothing on-axis to compare with
        quad = 2 - np.real(w**nf) - np.real(w ** -nf)
        excess = quad
    else:
        theta = np.arctan(0.5 / tau.real)
        quad = 4 - 2 * np.real(w**nf) - 2 * np.real(w ** -nf)
        excess = quad - 2 * 4 * np.sin(ns * theta) ** 2
    ex = np.flatnonzero(np.abs(excess) > 1)
    # the injected zeros' own contribution, free of the base table's O(1) fluctuation
    quad_fit = fit_growth(ns[-q:], quad[-q:])
    return SandboxResult(
        tau_star=tau, ns=ns, lambdas=lam, errors=err, riemann=riem, rh_false=rh_false, fit=fit,
        theory_rate=float(growth_rate(tau, ctx)), n_onset=onset_estimate(tau),
        first_negative=int(ns[neg[0]]) if neg.size else None,
        onset=int(ns[big[0]]) if big.size else None,
        excess_onset=int(ns[ex[0]]) if ex.size else None,
        extra={"quadruple_fit": quad_fit, "base_deviation_std": float(np.std((dev - quad)[-q:]))},
    )

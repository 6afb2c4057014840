
import mpmath
import pytest

from li_lab.errors import NearZeroError, PoleError, PrecisionError
from li_lab.numerics import (BigRational, ErrorKind, PrecisionContext, ReductionOrder,
                             ValueWithError, binomial, digamma, log_gamma, tree_sum, xi_log_deriv,
                             zeta_and_derivative, zeta_em, zeta_log_deriv)

def eta_zeta(s, dps=45):
    """zeta(s) = eta(s) / (1 - 2^(1-s)), eta summed with mpmath's alternating-series acceleration."""
    with mpmath.workdps(dps):
        s = mpmath.mpmathify(s)
        eta = mpmath.nsum(lambda k: (-1) ** (k + 1) / mpmath.power(k, s), [1, mpmath.inf],
                          method="alternating")
        return eta / (1 - mpmath.power(2, 1 - s))


def pascal_row(a):
    row = [1]
    for _ in range(a):
        row = [x + y for x, y in zip([0] + row, row + [0])]
    return row


# ---- precision context -------------------------------------------------------

def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(bits=32)
    ctx = PrecisionContext(bits=100)
    assert ctx.doubled().bits == 200
    assert ctx.with_bits(80).bits == 80
    assert ctx.mp.prec == 100 + ctx.guard_bits


def test_tree_sum_is_deterministic_and_order_aware():
    ctx = PrecisionContext()
    vals = [ctx.mp.mpf(1) / k for k in range(1, 200)]
    a = ctx.reduce(vals)
    b = ctx.reduce(list(vals))
    assert a == b
    seq = PrecisionContext(reduction_order=ReductionOrder.SEQUENTIAL).reduce(vals)
    assert abs(seq - a) < 1e-40
    assert tree_sum([1, 2, 3, 4, 5]) == 15
    assert tree_sum([]) == 0


# ---- value with error --------------------------------------------------------

def test_value_with_error_propagation():
    a = ValueWithError(mpmath.mpf(2), mpmath.mpf("1e-10"))
    b = ValueWithError(mpmath.mpf(3), mpmath.mpf("1e-12"), ErrorKind.HEURISTIC)
    s = a + b
    assert s.value == 5 and s.abs_error == pytest.approx(1.01e-10)
    assert s.error_kind is ErrorKind.HEURISTIC
    p = a * b
    assert p.abs_error == pytest.approx(3e-10 + 2e-12, rel=1e-6)
    assert (a - a).abs_error == pytest.approx(2e-10)
    with pytest.raises(NearZeroError):
        a / ValueWithError(mpmath.mpf(0), mpmath.mpf(1))


def test_value_with_error_rejects_bad_bounds():
    with pytest.raises((ValueError, PrecisionError)):
        ValueWithError(mpmath.mpf(1), mpmath.mpf(-1))
    with pytest.raises((ValueError, PrecisionError)):
        ValueWithError(mpmath.mpf(1), mpmath.inf)


def test_big_rational_is_reduced():
    q = BigRational(6, -4)
    assert (q.numerator, q.denominator) == (-3, 2)
    assert q.denominator > 0


# ---- binomial -------------------------------------------------------------------

@pytest.mark.parametrize("a,b,expected", [(1, 1, 1), (4, 3, 4), (5, 7, 0), (0, 0, 1)])
def test_binomial_small(a, b, expected):
    assert binomial(a, b) == expected


def test_binomial_against_pascal_oracle():
    assert binomial(199, 99) == pascal_row(199)[99]


def test_pascal_rule_exhaustive():
    for a in range(1, 301):
        for b in range(1, a + 1):
            assert binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b)


def test_binomial_rejects_negative():
    with pytest.raises(ValueError):
        binomial(-1, 2)


# ---- gamma family ----------------------------------------------------------------

def test_log_gamma_special_values(ctx):
    assert abs(log_gamma(1, ctx).value) < 1e-40
    half = log_gamma(ctx.mp.mpf(0.5), ctx)
    assert abs(half.value - ctx.mp.log(ctx.mp.pi) / 2) <= half.abs_error + 1e-40


def test_log_gamma_recurrence_oracle(ctx):
    mp = ctx.mp
    s = mp.mpc(10, 10)
    # log Gamma(s) = log Gamma(s+20) - sum log(s+k), continued along the branch
    shifted = mp.loggamma(s + 20) - mp.fsum(mp.log(s + k) for k in range(20))
    v = log_gamma(s, ctx)
    diff = v.value - shifted
    # equal up to a multiple of 2 pi i from the branch of the summed logs
    k = mp.nint(mp.im(diff) / (2 * mp.pi))
    assert abs(diff - 2j * mp.pi * k) < 1e-35


@pytest.mark.parametrize("s", [0, -1, -7])
def test_gamma_poles(ctx, s):
    with pytest.raises(PoleError):
        log_gamma(s, ctx)
    with pytest.raises(PoleError):
        digamma(s, ctx)


def test_digamma_values(ctx):
    mp = ctx.mp
    assert abs(digamma(1, ctx).value + mp.euler) < 1e-40
    assert abs(digamma(2, ctx).value - (1 - mp.euler)) < 1e-40
    # duplication: psi(2z) = psi(z)/2 + psi(z+1/2)/2 + log 2, with z = 1/2
    half = digamma(mp.mpf(0.5), ctx).value
    assert abs(digamma(1, ctx).value - (half / 2 + digamma(1, ctx).value / 2 + mp.log(2))) < 1e-40
    assert abs(half - (-mp.euler - 2 * mp.log(2))) < 1e-40


# ---- zeta ------------------------------------------------------------------------

def test_zeta_classical_values(ctx):
    mp = ctx.mp
    z2 = zeta_em(2, ctx)
    assert abs(z2.value - mp.pi**2 / 6) <= z2.abs_error
    assert z2.error_kind is ErrorKind.RIGOROUS
    z0 = zeta_em(0, ctx)
    assert abs(z0.value + mp.mpf(0.5)) <= z0.abs_error + 1e-40


def test_zeta_pole(ctx):
    with pytest.raises(PoleError):
        zeta_em(1, ctx)


def test_zeta_against_eta_oracle(ctx):
    s = ctx.mp.mpc(2, 3)
    v = zeta_em(s, ctx)
    ref = eta_zeta(mpmath.mpc(2, 3))
    assert abs(complex(v.value) - complex(ref)) < 1e-15
    assert abs(v.value - ctx.mp.mpc(ref)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("s", [0.5 + 0j, 0.75 + 14j, 1.5 - 20j, 2 + 50j, 4 + 1j, 0.5 + 49.5j, 3 - 33j])
def test_zeta_grid_against_eta_oracle(ctx, s):
    v = zeta_em(ctx.mp.mpc(s), ctx)
    ref = ctx.mp.mpc(eta_zeta(mpmath.mpc(s), dps=50))
    assert abs(v.value - ref) <= v.abs_error + mpmath.mpf(10) ** -40


def test_zeta_reflection_exact(ctx):
    s = ctx.mp.mpc(0.7, 23.1)
    assert zeta_em(ctx.mp.conj(s), ctx).value == ctx.mp.conj(zeta_em(s, ctx).value)


def test_zeta_precision_infeasible():
    tiny = PrecisionContext(bits=64, max_em_terms=10)
    with pytest.raises(PrecisionError):
        zeta_em(tiny.mp.mpc(0.5, 1000), tiny)


def test_zeta_derivative_finite_difference(ctx):
    mp = ctx.mp
    h = mp.mpf(2) ** (-ctx.bits // 3)
    _, d = zeta_and_derivative(2, ctx)
    fd = (zeta_em(2 + h, ctx).value - zeta_em(2 - h, ctx).value) / (2 * h)
    assert abs(d.value - fd) < 1e-20
    assert abs(float(d.value) + 0.93754825431584375) < 1e-15


def test_zeta_log_deriv_at_4_against_eta_oracle(ctx):
    with mpmath.workdps(45):
        # zeta'/zeta = eta'/eta - 2^(1-s) log 2 / (1 - 2^(1-s)) at s = 4
        s = mpmath.mpf(4)
        eta = mpmath.nsum(lambda k: (-1) ** (k + 1) / k**s, [1, mpmath.inf], method="alternating")
        deta = -mpmath.nsum(lambda k: (-1) ** (k + 1) * mpmath.log(k) / k**s, [1, mpmath.inf],
                            method="alternating")
        c = mpmath.power(2, 1 - s)
        ref = deta / eta - c * mpmath.log(2) / (1 - c)
    v = zeta_log_deriv(4, ctx)
    assert abs(v.value - ctx.mp.mpf(ref)) < 1e-30


def test_zeta_log_deriv_near_zero(ctx):
    with mpmath.workdps(40):
        rho = mpmath.zetazero(1)
    with pytest.raises(NearZeroError):
        zeta_log_deriv(ctx.mp.mpc(rho), PrecisionContext(bits=64))


def test_zeta_log_deriv_precision_doubling(ctx):
    s = ctx.mp.mpc(3, 1)
    a = zeta_log_deriv(s, ctx)
    b = zeta_log_deriv(s, ctx.doubled())
    assert abs(a.value - b.value) <= a.abs_error


# ---- xi log-derivative -----------------------------------------------------------

def test_xi_log_deriv_symmetry_point(ctx):
    v = xi_log_deriv(ctx.mp.mpf(0.5), ctx)
    assert abs(v.value) <= v.abs_error + 1e-35


def test_xi_log_deriv_finite_difference(ctx):
    mp = ctx.mp

    def log_xi(s):
        return (mp.log(s) + mp.log(s - 1) + log_gamma(s / 2, ctx).value - s / 2 * mp.log(mp.pi)
                + mp.log(zeta_em(s, ctx).value))

    h = mp.mpf(2) ** -40
    fd = (log_xi(2 + h) - log_xi(2 - h)) / (2 * h)
    v = xi_log_deriv(2, ctx)
    assert abs(v.value - fd) < 1e-20


def test_xi_log_deriv_conjugate_symmetry(ctx):
    s = ctx.mp.mpc(2.5, 7)
    assert xi_log_deriv(ctx.mp.conj(s), ctx).value == ctx.mp.conj(xi_log_deriv(s, ctx).value)


@pytest.mark.parametrize("s", [0, 1])
def test_xi_log_deriv_poles(ctx, s):
    with pytest.raises(PoleError):
        xi_log_deriv(s, ctx)

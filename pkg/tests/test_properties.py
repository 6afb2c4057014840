"""Property suites: hypothesis-driven invariants and precision-doubling stability."""
from decimal import ROUND_DOWN, Decimal

import mpmath
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from doubling_cases import SAMPLE, doubling_deviation
from li_lab.asymptotics import predict_rh_false, predict_riemann, saddle_complex
from li_lab.li import lambda_zero_sum
from li_lab.numerics import PrecisionContext, zeta_em
from li_lab.zeros import ZeroTable, bundled_zeros, inject_off_axis, load_zeros, save_zeros

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])


# --------------------------------------------------------------------------
# invariants


@SETTINGS
@given(st.floats(0.55, 4), st.floats(-50, 50))
def test_zeta_reflection(re, im):
    assume(abs(complex(re, im) - 1) > 1e-3)
    ctx = PrecisionContext(bits=96)
    s = ctx.mp.mpc(re, im)
    a = zeta_em(s, ctx).value
    b = zeta_em(ctx.mp.conj(s), ctx).value
    assert a == ctx.mp.conj(b)


@SETTINGS
@given(st.integers(1, 100), st.integers(6, 25))
def test_zero_table_round_trip(tmp_path_factory, count, places):
    d = tmp_path_factory.mktemp("rt")
    quantum = Decimal(10) ** -places
    strs = [str(Decimal(p.tau_re).quantize(quantum, rounding=ROUND_DOWN))
            for p in bundled_zeros().pairs[:count]]
    (d / "a.txt").write_text("\n".join(strs) + "\n")
    first = load_zeros(d / "a.txt")
    save_zeros(first, d / "b.txt")
    again = load_zeros(d / "b.txt")
    assert [p.tau_re for p in again.pairs] == [p.tau_re for p in first.pairs] == strs
    assert again.source.digits == first.source.digits == places


@SETTINGS
@given(st.floats(1, 200), st.floats(0.01, 0.49))
def test_inject_never_mutates(t, a):
    base = bundled_zeros()
    before = list(base.pairs)
    out = inject_off_axis(base, complex(t, a))
    assert list(base.pairs) == before
    assert len(out.pairs) == len(before) + 1


@SETTINGS
@given(st.integers(1, 400))
def test_unit_pair_period_six(n):
    ctx = PrecisionContext(bits=128)
    with mpmath.workdps(60):
        table = ZeroTable.synthetic([mpmath.sqrt(3) / 2])
    lam = lambda_zero_sum(n, table, None, ctx).value.value
    assert abs(lam - (2 - 2 * ctx.mp.cos(n * ctx.mp.pi / 3))) < 1e-25


@SETTINGS
@given(st.floats(5, 500), st.floats(0.05, 0.45), st.integers(1, 5000))
def test_rh_false_geometric(t, a, n):
    ctx = PrecisionContext(bits=128)
    mp = ctx.mp
    tau = mp.mpc(t, a)
    w = abs((tau + mp.mpc(0, 0.5)) / (tau - mp.mpc(0, 0.5)))
    r = predict_rh_false(n + 1, [tau], ctx).modulus / predict_rh_false(n, [tau], ctx).modulus
    assert abs(r / w - 1) < 1e-30


@SETTINGS
@given(st.floats(5, 200), st.floats(0.05, 0.45))
def test_saddle_flag_monotone(t, a):
    ctx = PrecisionContext(bits=64)
    flags = [saddle_complex(n, complex(t, a), ctx).eligible for n in (1, 10, 100, 1000, 10**4, 10**5)]
    assert flags == sorted(flags)


@SETTINGS
@given(st.integers(1, 2000))
def test_riemann_predictor_positive_past_root(n):
    ctx = PrecisionContext(bits=96)
    assert (predict_riemann(n, ctx) > 0) == (n >= 10)


# --------------------------------------------------------------------------
# precision doubling over a random sample of exposed results


@pytest.mark.parametrize("name", SAMPLE)
def test_precision_doubling(name):
    dev, err = doubling_deviation(name)
    assert dev <= err, f"{name}: deviation {mpmath.nstr(dev, 5)} > abs_error {mpmath.nstr(err, 5)}"

"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one line through the ``report`` fixture; the lines are
repeated in the pytest terminal summary. Criteria 1, 2 and 4 need the
100 000-zero table (data/zeros_100k.txt or LI_LAB_ZEROS) and skip without it.
Criterion 9 is exploratory and only warns.
"""
import time
import warnings

import mpmath
import pytest

from conftest import load_big_table
from doubling_cases import SAMPLE, SEED, doubling_deviation
from li_lab.asymptotics import predict_riemann, sandbox
from li_lab.cumulants import cumulant_prime_sum, cumulant_series, s_n_many, sn_precision, stieltjes_constants
from li_lab.li import (context_for, lambda_binomial, lambda_cauchy, lambda_zero_sum_many,
                       residue_identity_check)
from li_lab.numerics import PrecisionContext
from li_lab.secondary_zeta import TailModel, polar_coefficients, z_continued, z_integers


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.fixture(scope="module")
def binomial_100(big, tail):
    ctx = context_for(100)
    start = time.perf_counter()
    zvals = z_integers(100, big, tail, ctx)
    lams = [lambda_binomial(n, zvals[:n], ctx) for n in range(1, 101)]
    return lams, time.perf_counter() - start


def test_criterion_1_cross_method(big, tail, binomial_100, report):
    start = time.perf_counter()
    a = lambda_zero_sum_many(range(1, 101), big, tail, PrecisionContext())
    b, tb = binomial_100
    elapsed = time.perf_counter() - start + tb
    bad_err = [n for n, x, y in zip(range(1, 101), a, b)
               if abs(x.value.value - y.value.value) > x.value.abs_error + y.value.abs_error]
    worst = max(rel(x.value.value, y.value.value) for x, y in zip(a[:40], b[:40]))
    ok = not bad_err and worst <= 1e-4 and elapsed < 300
    report(1, ok, f"n=1..100 outside combined error: {bad_err or 'none'}; "
                  f"max rel diff n<=40 {float(worst):.2e} (<= 1e-4); {elapsed:.0f} s (< 300 s)")
    assert ok


def test_criterion_2_zero_free(binomial_100, report):
    start = time.perf_counter()
    c = [lambda_cauchy(n) for n in range(1, 17)]
    elapsed = time.perf_counter() - start
    b, _ = binomial_100
    worst = max(rel(x.value.value, y.value.value) for x, y in zip(c, b[:16]))
    ok = worst <= 1e-6 and elapsed < 600
    report(2, ok, f"max rel diff cauchy vs binomial n=1..16 {float(worst):.2e} (<= 1e-6); "
                  f"{elapsed:.0f} s (< 600 s)")
    assert ok


def test_criterion_3_residue_identity(report):
    start = time.perf_counter()
    bad = [n for n in range(1, 51) if not residue_identity_check(n)]
    ok = not bad
    report(3, ok, f"exact rational equality n=1..50, mismatches: {bad or 'none'}; "
                  f"{time.perf_counter() - start:.1f} s")
    assert ok


def test_criterion_4_asymptotic_regime(big, tail, report):
    ctx = PrecisionContext()
    start = time.perf_counter()
    ns = list(range(1000, 2001))
    vals = {v.n: v.value.value for v in lambda_zero_sum_many([500] + ns, big, tail, ctx)}
    rels = {n: abs(vals[n] - predict_riemann(n, ctx)) / vals[n] for n in (500, 1000, 2000)}
    dev_plain = mpmath.fsum(vals[n] - predict_riemann(n, ctx) for n in ns) / len(ns)
    dev_delta = mpmath.fsum(vals[n] - predict_riemann(n, ctx, include_delta=True) for n in ns) / len(ns)
    elapsed = time.perf_counter() - start
    ok = all(r <= 0.05 for r in rels.values()) and abs(dev_delta) < abs(dev_plain)
    report(4, ok, "rel dev " + ", ".join(f"n={n}: {float(r):.2e}" for n, r in rels.items())
           + f" (<= 0.05); mean dev [1000,2000] with 7/4 {float(dev_delta):+.3f} vs without "
           + f"{float(dev_plain):+.3f}; {elapsed:.0f} s")
    assert ok


def test_criterion_5_polar_data(small, report):
    ctx = PrecisionContext()
    mp = ctx.mp
    r2, r1 = 1 / (8 * mp.pi), -mp.log(2 * mp.pi) / (4 * mp.pi)
    eps = 2 ** -(ctx.bits - 8)
    exact = all(abs(p.R_minus2 - r2) < eps and abs(p.R_minus1 - r1) < eps
                for p in (polar_coefficients(TailModel(cutoff=T), ctx, T) for T in (100, 236, 1e4, 7.5e4)))
    table = load_big_table()[0] or small
    z0 = z_continued(0, table, TailModel(), ctx)
    ok = exact and 0.775 <= z0.value <= 0.975
    report(5, ok, f"R_-2, R_-1 exact for all cutoffs: {exact}; z_continued(0) = "
                  f"{mpmath.nstr(z0.value, 6)} +- {mpmath.nstr(z0.abs_error, 2)} on {len(table)} zeros "
                  f"(in [0.775, 0.975])")
    assert ok


def test_criterion_6_rh_false(small, tail, report):
    start = time.perf_counter()
    res = sandbox(complex(50, 2), small, 4000, tail)
    elapsed = time.perf_counter() - start
    rate_ok = abs(res.fit.rate - res.theory_rate) <= 0.05 * res.theory_rate
    neg_ok = res.first_negative is not None
    onset_ok = res.onset is not None and res.n_onset / 2 <= res.onset <= 2 * res.n_onset
    ok = rate_ok and neg_ok and onset_ok
    report(6, ok, f"fitted rate {res.fit.rate:.4e} vs {res.theory_rate:.4e} "
                  f"({abs(res.fit.rate / res.theory_rate - 1):.1%}, <= 5%); first negative "
                  f"lambda_n: {res.first_negative}; onset |dev| > 1 at n = {res.onset} vs "
                  f"n_onset {res.n_onset:.0f} (factor 2); quadruple excess onset "
                  f"{res.excess_onset}; injected zeros alone fit {res.extra['quadruple_fit'].rate:.4e}; "
                  f"{elapsed:.0f} s on {len(small) + 1} pairs")
    assert ok


def test_criterion_7_cumulants(report):
    ctx = PrecisionContext()
    g1 = cumulant_series(1, stieltjes_constants(1, ctx), ctx).g.value
    start = time.perf_counter()
    p1 = cumulant_prime_sum(1, 10**8).g.value
    elapsed = time.perf_counter() - start
    d_series, d_prime = abs(g1 - ctx.mp.euler), abs(p1 - ctx.mp.euler)
    ok = d_series <= 1e-20 and d_prime <= 0.05 and elapsed < 120
    report(7, ok, f"|series - gamma| = {mpmath.nstr(d_series, 3)} (<= 1e-20); "
                  f"|prime sum(1e8) - gamma| = {mpmath.nstr(d_prime, 3)} (<= 0.05); sieve {elapsed:.1f} s")
    assert ok


def test_criterion_8_precision_doubling(report):
    bad = []
    for name in SAMPLE:
        dev, err = doubling_deviation(name)
        if not dev <= err:
            bad.append(name)
    ok = not bad
    report(8, ok, f"{len(SAMPLE)} sampled results (seed {SEED}) stable under doubled bits; "
                  f"violations: {bad or 'none'}")
    assert ok


def test_criterion_9_sn_trend(report):
    ctx = PrecisionContext(bits=sn_precision(500))
    s = s_n_many(500, stieltjes_constants(500, ctx), ctx)
    r50, r500 = abs(s[49].value) / 50, abs(s[499].value) / 500
    ok = r500 < r50
    report(9, ok, f"|S_500|/500 = {mpmath.nstr(r500, 4)} vs |S_50|/50 = {mpmath.nstr(r50, 4)} "
                  f"(exploratory)", warn_only=True)
    if not ok:
        warnings.warn("exploratory S_n trend not observed", UserWarning)

"""Stieltjes constants, cumulants and the arithmetic part S_n.

The log of (s-1) zeta(s) around s = 1 has coefficients given by cumulants of
the Stieltjes constants; the same numbers come out of sums over prime powers.
S_n combines them with binomial weights and is expected to be o(n).

    python3 demos/05_cumulants.py
"""
# %%
import mpmath

from li_lab.cumulants import (cumulants_prime_sum, cumulants_series, eta_values, s_n_many,
                              sn_precision, stieltjes_constants)
from li_lab.numerics import PrecisionContext

ctx = PrecisionContext()
table = stieltjes_constants(10, ctx)
for m in range(5):
    print(f"gamma_{m} = {mpmath.nstr(table.gammas[m], 25)}")

# %% two routes to the cumulants
series = cumulants_series(3, table, ctx)
prime = cumulants_prime_sum(3, 10**7)
for s, p in zip(series, prime):
    print(f"g_{s.n}: series {mpmath.nstr(s.g.value, 12)}   primes <= 1e7 "
          f"{mpmath.nstr(p.g.value, 8)} +- {mpmath.nstr(p.g.abs_error, 2)}")
print("eta_0..eta_2:", [mpmath.nstr(e.value, 10) for e in eta_values(series)])

# %% S_n / n decreases
nmax = 200
sctx = PrecisionContext(bits=sn_precision(nmax))
sn = s_n_many(nmax, stieltjes_constants(nmax, sctx), sctx)
for n in (10, 25, 50, 100, 200):
    print(f"S_{n}/{n} = {mpmath.nstr(sn[n - 1].value / n, 8)}")

"""Li coefficients three ways.

lambda_n can be computed from the zeros directly, from the secondary zeta
values Z(1), ..., Z(n) with exact binomial weights, or without any zeros at
all from the Taylor coefficients of log Xi. This walk-through runs all three
on the bundled 100-zero table (or the table named by LI_LAB_ZEROS).

    python3 demos/01_li_coefficients.py
"""
# %%
import os

import mpmath

from li_lab import PrecisionContext, bundled_zeros, load_zeros
from li_lab.li import (binomial_weights, lambda_binomial, lambda_cauchy, lambda_zero_sum_many,
                       residue_identity_check, context_for)
from li_lab.secondary_zeta import TailModel, z_integers

path = os.environ.get("LI_LAB_ZEROS")
table = load_zeros(path) if path else bundled_zeros()
tail = TailModel()
print(f"{len(table)} zeros up to T = {table.T:.1f}")

# %% [method A] sum over zeros, with a smooth tail model above T
ctx = PrecisionContext()
zero_sum = lambda_zero_sum_many(range(1, 21), table, tail, ctx)

# %% [method B] binomial weights applied to Z(j); the weights are exact rationals
print("weights for n = 4:", [str(c) for c in binomial_weights(4)])
print("residue identity n <= 20:", all(residue_identity_check(n) for n in range(1, 21)))
bctx = context_for(20)
zvals = z_integers(20, table, tail, bctx)
binomial = [lambda_binomial(n, zvals[:n], bctx) for n in range(1, 21)]

# %% [method C] zero-free: Cauchy integral of log Xi(1/(1-z)) on a circle
cauchy = [lambda_cauchy(n) for n in range(1, 9)]

# %%
print(f"{'n':>3} {'zero sum':>22} {'binomial':>22} {'cauchy':>22}")
for n in range(1, 21):
    a = zero_sum[n - 1].value
    b = binomial[n - 1].value
    c = mpmath.nstr(cauchy[n - 1].value.value, 15) if n <= len(cauchy) else ""
    print(f"{n:>3} {mpmath.nstr(a.value, 15):>22} {mpmath.nstr(b.value, 15):>22} {c:>22}"
          f"   +- {mpmath.nstr(a.abs_error, 2)}")

# %% the zero-free value is the reference; the zero-based ones carry the tail error
print("all positive:", all(v.value.value > 0 for v in zero_sum))

"""The secondary zeta function Z(sigma) = sum over zeros of x_k^(-sigma).

Z converges for Re sigma > 1/2; the smooth part of the zero density gives
double and simple poles at sigma = 1/2 whose coefficients are known in
closed form, and the continuation to sigma = 0 should land near 7/8.

    python3 demos/02_secondary_zeta.py
"""
# %%
import os

import mpmath

from li_lab import PrecisionContext, bundled_zeros, load_zeros
from li_lab.secondary_zeta import TailModel, polar_coefficients, z_continued, z_eval, z_integers

path = os.environ.get("LI_LAB_ZEROS")
table = load_zeros(path) if path else bundled_zeros()
tail = TailModel()
ctx = PrecisionContext()

# %% Z(1) equals lambda_1, which has a closed form in gamma and log 4 pi
z1 = z_eval(1, table, tail, ctx)
closed = 1 + ctx.mp.euler / 2 - ctx.mp.log(4 * ctx.mp.pi) / 2
print("Z(1) =", z1, " closed form", mpmath.nstr(closed, 20))

# %% integer values are dominated by the first zero for large j
for j, v in enumerate(z_integers(8, table, tail, ctx), start=1):
    print(f"Z({j}) = {mpmath.nstr(v.value, 12):>16}   x_1^-j = "
          f"{mpmath.nstr((table.pairs[0].tau(ctx) ** 2 + 0.25) ** -j, 12)}")

# %% complex arguments decay along vertical lines
for b in (0, 5, 10, 20, 40):
    s = ctx.mp.mpc(1, b)
    print(f"|Z(1 + {b}i)| = {mpmath.nstr(abs(z_eval(s, table, tail, ctx).value), 8)}")

# %% polar data at sigma = 1/2 and the continued value at sigma = 0
pd = polar_coefficients(tail, ctx, table.T)
print("R_-2 =", mpmath.nstr(pd.R_minus2, 20), " 1/(8 pi) =", mpmath.nstr(1 / (8 * ctx.mp.pi), 20))
print("R_-1 =", mpmath.nstr(pd.R_minus1, 20))
print("Z(0) continued =", z_continued(0, table, tail, ctx), " (7/8 expected)")

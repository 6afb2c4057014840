"""lambda_n against its large-n prediction.

If all zeros lie on the critical line, lambda_n grows like
(n/2)(log n - 1 + gamma - log 2 pi) plus a constant. This demo compares the
zero sum with that prediction, with and without the constant 7/4, and shows
where the saddle point of the Mellin-Barnes integrand sits.

    LI_LAB_ZEROS=data/zeros_100k.txt python3 demos/03_asymptotics.py
"""
# %%
import os

import mpmath
import numpy as np

from li_lab import PrecisionContext, bundled_zeros, load_zeros
from li_lab.asymptotics import predict_riemann, predict_riemann_array, saddle_complex, saddle_real
from li_lab.li import lambda_zero_sum_many
from li_lab.secondary_zeta import TailModel

path = os.environ.get("LI_LAB_ZEROS")
table = load_zeros(path) if path else bundled_zeros()
tail = TailModel()
ctx = PrecisionContext()
print(f"{len(table)} zeros up to T = {table.T:.1f}")

# %% the prediction changes sign between n = 9 and n = 10
print([mpmath.nstr(predict_riemann(n, ctx), 5) for n in (1, 9, 10, 100)])

# %% deviation of the data from the prediction
nmax = 2000 if len(table) >= 100_000 else 200
ns = np.arange(1, nmax + 1)
lam = np.array([float(v.value.value) for v in lambda_zero_sum_many(ns, table, tail, ctx)])
pred = predict_riemann_array(ns)
for n in (10, 50, 100, nmax // 2, nmax):
    print(f"n = {n:5d}  lambda = {lam[n - 1]:12.4f}  prediction = {pred[n - 1]:12.4f}  "
          f"rel dev = {(lam[n - 1] - pred[n - 1]) / lam[n - 1]:+.2e}")
window = slice(nmax // 2 - 1, nmax)
print("mean deviation on the upper half:", np.mean(lam[window] - pred[window]),
      " with 7/4:", np.mean(lam[window] - pred[window] - 1.75))

# %% saddle point on the real axis drifts toward 1/2 like 1/log n
for n in (100, 1000, 10000):
    s = saddle_real(n, table, tail, ctx)
    print(f"n = {n:6d}  sigma_r = {float(s.sigma):.4f}  (sigma_r - 1/2) log n = {float(s.deviation):.3f}")

# %% an off-axis zero moves the saddle into the complex plane once n is large enough
for n in (100, 1000, 2000):
    sc = saddle_complex(n, complex(50, 2), ctx)
    print(f"n = {n:5d}  sigma = {complex(sc.sigma):.4f}  eligible = {sc.eligible}")

"""What lambda_n would do if one zero were off the line.

Injecting tau* = 50 + 2i (the zeros 1/2 +- 2 +- 50i) adds a term that grows
geometrically with ratio |tau* + i/2| / |tau* - i/2|. The demo fits that
growth and reports when the deviation from the on-line prediction appears.

    python3 demos/04_rh_false_sandbox.py
"""
# %%
import os

import numpy as np

from li_lab import bundled_zeros, load_zeros
from li_lab.asymptotics import predict_rh_false, sandbox
from li_lab.numerics import PrecisionContext
from li_lab.secondary_zeta import TailModel

path = os.environ.get("LI_LAB_ZEROS")
base = load_zeros(path) if path else bundled_zeros()
res = sandbox(complex(50, 2), base, 4000, TailModel())

# %%
print(f"base: {len(base)} pairs")
print(f"theoretical growth rate {res.theory_rate:.4e}, fitted {res.fit.rate:.4e}")
print(f"predicted onset n ~ {res.n_onset:.0f}")
print(f"first n with |lambda_n - prediction| > 1: {res.onset}")
print(f"first n where the off-line zeros differ from on-line ones by > 1: {res.excess_onset}")
print(f"first negative lambda_n: {res.first_negative}")

# %% the off-line term alone
ctx = PrecisionContext(bits=64)
for n in (1000, 2000, 3000, 4000):
    p = predict_rh_false(n, [complex(50, 2)], ctx)
    dev = res.lambdas[n - 1] - res.riemann[n - 1]
    print(f"n = {n}  off-line term = {float(p.value):+10.3f}  |w|^n = {float(p.modulus):8.3f}  "
          f"observed deviation = {dev:+10.3f}")

# %% sign changes of the deviation follow the oscillation frequency
dev = res.lambdas - res.riemann
print("sign changes in the upper quartile:", int(np.sum(np.diff(np.sign(dev[3000:])) != 0)))

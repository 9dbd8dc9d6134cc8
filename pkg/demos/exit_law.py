"""Monte Carlo exit law of the conditioned diffusion versus the exact law.

Simulates the h-process from (0, w) and compares the empirical exit-site
frequencies with the exact law p_n(0, w)/h(0, w).  Uses a modest path
count so it finishes in a few seconds; increase `paths` for tighter
agreement.
"""

import numpy as np

from rieszlat import SdeConfig, simulate_exit
from rieszlat.poisson import periodic_h_closed_1d, poisson_const

w = 2.0
cfg = SdeConfig(dt_base=0.25, y_dt_factor=0.02, w_start=w,
                paths=5000, seed=1, max_steps=20000)
res = simulate_exit(cfg, d=1)
exits = res["exits"][:, 0]

h0 = periodic_h_closed_1d(np.array([0.0]), np.array([w]))[0]
c1 = poisson_const(1)
print(f"w = {w}, paths = {cfg.paths}, capped = {res['capped']}")
print(f"{'n':>4} {'empirical':>10} {'exact':>10}")
for n in range(-5, 6):
    emp = np.mean(exits == n)
    exact = c1 * w / (n * n + w * w) / h0
    print(f"{n:4d} {emp:10.4f} {exact:10.4f}")

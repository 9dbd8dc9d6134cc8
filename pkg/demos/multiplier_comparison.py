"""Compare the Fourier multipliers of the discrete Hilbert transforms.

Tabulates, on xi in [0, 1/2]: the continuous Hilbert multiplier (1), the
discrete Hilbert multiplier 1 - 2 xi, the probabilistic multiplier
M-tilde, and the probability-kernel multiplier (1 - 2 xi)/M-tilde.
M-tilde interpolates between 1 at xi = 0 and an exact zero at xi = 1/2,
always below the discrete multiplier, which is the quantitative content
of the factorization H_dis = T_H * P.
"""

import numpy as np

from rieszlat import multiplier_Mtilde, pkernel_multiplier

xi = np.linspace(0.0, 0.5, 11)
mt = multiplier_Mtilde(xi)
pm = pkernel_multiplier(xi)
print(f"{'xi':>6} {'hilbert':>8} {'hdis':>8} {'mtilde':>9} {'pmult':>9}")
for x, m, p in zip(xi, mt, pm):
    print(f"{x:6.3f} {1.0:8.4f} {1 - 2 * x:8.4f} {m:9.5f} {p:9.5f}")

# the probability kernel itself: nonnegative, sums to one
from rieszlat import pkernel_coefficients

n, p = pkernel_coefficients(2 ** 14)
mid = len(p) // 2
print("\nprobability kernel P:  sum = %.12f,  min = %.2e" % (p.sum(), p.min()))
print("central coefficients:", " ".join(f"{p[mid + j]:.5f}"
                                        for j in range(-3, 4)))

"""Reproduce the kernel value and ratio tables for d = 2, k = 1.

Prints the probabilistic kernel K_H, the method-of-rotations kernel K_rot
and the Calderon-Zygmund kernel K_cz on n1 in 1..5, n2 in 0..5, followed
by the two ratio tables.  First run computes ~30 double integrals
(about two minutes); results are cached under DISCT_CACHE (default
~/.cache/rieszlat), so reruns are instant.
"""

from rieszlat import KernelKind, kernel_value

prob = KernelKind("prob_riesz", 2, 1)
rot = KernelKind("rotation", 2, 1)
cz = KernelKind("cz_riesz", 2, 1)

print(f"{'n':>8} {'K_H':>10} {'K_rot':>10} {'K_cz':>10} "
      f"{'K_H/K_cz':>10} {'K_rot/K_cz':>11}")
for n1 in range(1, 6):
    for n2 in range(0, 6):
        n = (n1, n2)
        kh = kernel_value(prob, n)
        kr = kernel_value(rot, n)
        kc = kernel_value(cz, n)
        print(f"{str(n):>8} {kh:10.4f} {kr:10.4f} {kc:10.4f} "
              f"{kh / kc:10.4f} {kr / kc:11.4f}")

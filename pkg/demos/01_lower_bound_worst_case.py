"""Worst case for linear-oracle methods: minimize ||x||^2 over the simplex.

Every oracle query reveals one vertex, and the best point spanned by m
vertices has value 1/m, so no method can beat gap 1/m - 1/n after m
revelations. Plain toward steps with exact line search meet that bound with
equality: after k steps the iterate is uniform over k+1 vertices.
"""

import numpy as np

from lacg import build_instance, fw_step

n = 100
inst = build_instance("lb-instance", n=n)
obj, poly = inst.objective, inst.polytope

x = poly.initial_vertex().point
print(f"{'step':>5} {'f(x)':>12} {'1/(k+1)':>12} {'gap':>12}")
for k in range(1, n):
    x, report = fw_step(obj, poly, x)
    if k in (1, 2, 5, 10, 25, 49, 75, 99):
        f = obj.value(x)
        print(f"{k:>5} {f:>12.6f} {1/(k+1):>12.6f} {f - 1/n:>12.6f}")

print(f"\nuniform point reached: max|x - 1/n| = {np.max(np.abs(x - 1/n)):.2e}")
print("the gap at 50 revealed vertices is exactly 1/50 - 1/100 =", 1 / 50 - 1 / 100)

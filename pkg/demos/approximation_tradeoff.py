"""
Accuracy against epsilon for the two approximation schemes
==========================================================

The strong scheme stays within capacity; the weak one may overshoot it by a
factor (1 + eps), so its value may exceed the capacity-bound OPT.
"""

from fractions import Fraction
import time

from monoknap import fptas, weak_fptas
from monoknap.oracle import bellman_unbounded, gen_instance

inst = gen_instance(40, 500, 200, 3000, correlation="inverse", seed=11)
opt = int(bellman_unbounded(inst).values[inst.capacity])
print("exact OPT:", opt)

for eps in (Fraction(1, 2), Fraction(1, 5), Fraction(1, 20)):
    for name, scheme in (("strong", fptas), ("weak", weak_fptas)):
        start = time.perf_counter()
        value, sol = scheme(inst, eps)
        elapsed = time.perf_counter() - start
        print(f"eps={str(eps):5} {name:6} value={value:6d} ratio={value / opt:.4f} "
              f"weight={sol.weight(inst)}/{inst.capacity} ({elapsed:.2f} s)")

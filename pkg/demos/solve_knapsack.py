"""
Solving unbounded and 0-1 knapsack exactly
==========================================

Build a small instance, solve it both ways, and compare with a plain
dynamic program.
"""

from monoknap import KnapsackInstance, solve_unbounded, solve_zeroone
from monoknap.oracle import bellman_unbounded, bellman_zeroone, gen_instance

# Items are (profit, weight) pairs.
inst = KnapsackInstance.from_pairs([(4, 3), (5, 4), (9, 7), (1, 1)], 20)
value, sol = solve_unbounded(inst)
print("unbounded OPT:", value, "using", sol.as_pairs(), "weight", sol.weight(inst))
print("dynamic program:", int(bellman_unbounded(inst).values[inst.capacity]))

# The same items, each usable at most once.  The 0-1 solver is randomized but
# one-sided: it never reports more than the optimum.
zo = KnapsackInstance.from_pairs(inst.pairs(), inst.capacity, "zero-one")
value, sol = solve_zeroone(zo)
print("0-1 OPT:", value, "using items", sorted(sol.counts))
print("dynamic program:", int(bellman_zeroone(zo).values[zo.capacity]))

# A larger random instance: the capacity is far beyond the item sizes, so the
# solver first packs copies of the best-ratio item and works on what is left.
big = gen_instance(30, 50, 20, 200_000, correlation="strong", seed=4)
value, sol = solve_unbounded(big)
print(f"n={big.n}, W={big.capacity}: OPT={value}, feasible={sol.is_feasible(big)}")

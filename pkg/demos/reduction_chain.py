"""
Convolution through a knapsack oracle
=====================================

A (max,+) convolution of two bounded monotone sequences can be recovered
from yes/no knapsack decisions alone.  Each decision is turned into a
superadditivity test and then into an unbounded knapsack instance.
"""

from monoknap.oracle import bellman_unbounded, brute_maxconv, gen_monotone_seq
from monoknap.reductions import (
    ChainStats,
    is_superadditive,
    solve_bmmaxconv_via_knapsack,
    superadditivity_to_knapsack,
    upperbound_to_superadditivity,
)

# One step of the chain by hand: is a[i] + b[j] <= c[i+j] for all i, j?
a, b, c = [0, 2], [0, 2], [0, 2, 3]
e = upperbound_to_superadditivity(a, b, c)
inst, threshold = superadditivity_to_knapsack(e)
best = int(bellman_unbounded(inst).values[inst.capacity])
print("E superadditive:", is_superadditive(e))
print(f"knapsack OPT {best} vs threshold {threshold}: bound holds = {best <= threshold}")

# The whole chain, with every decision answered by each backend in turn.
a, b = gen_monotone_seq(24, 24, seed=1), gen_monotone_seq(24, 24, seed=2)
want = brute_maxconv(a, b)
for backend in ("unbounded", "zeroone", "weak"):
    stats = ChainStats()
    got = solve_bmmaxconv_via_knapsack(a, b, backend, stats=stats)
    print(f"{backend:9} correct={got == want} rounds={stats.rounds} oracle calls={stats.oracle_calls}")

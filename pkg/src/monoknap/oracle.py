"""Ground-truth dynamic programs, brute-force convolutions and seeded generators.

Nothing here touches the convolution kernels, so agreement between a solver and
an oracle is independent evidence.
"""

from __future__ import annotations

import numpy as np

from .core import (
    NEG,
    NEG_FLOOR,
    UNBOUNDED,
    ZERO_ONE,
    Item,
    KnapsackInstance,
    MonotoneSeq,
    StepList,
    dominance_filter,
)

DEFAULT_BUDGET = 10**7
CORRELATIONS = ("none", "strong", "inverse")


class OracleBudgetError(RuntimeError):
    """The requested oracle run exceeds the n * W budget."""


def _check_budget(inst: KnapsackInstance, budget: int) -> None:
    cost = max(inst.n, 1) * (inst.capacity + 1)
    if cost > budget:
        raise OracleBudgetError(f"n * W = {cost} exceeds oracle budget {budget}")


def bellman_unbounded(inst: KnapsackInstance, budget: int = DEFAULT_BUDGET) -> MonotoneSeq:
    """Profile P[0..W] of Unbounded Knapsack (best profit with weight at most j)."""
    _check_budget(inst, budget)
    W = inst.capacity
    best = np.zeros(W + 1, dtype=np.int64)
    for it in inst.items:
        w, p = it.weight, it.profit
        if w > W or p == 0:
            continue
        # Along each residue class mod w, taking more copies adds p per step:
        # new[t] = max_{s <= t} old[s] + (t - s) * p.
        rows = -(-(W + 1) // w)
        padded = np.full(rows * w, NEG, dtype=np.int64)
        padded[: W + 1] = best
        grid = padded.reshape(rows, w)
        t = (np.arange(rows, dtype=np.int64) * p)[:, None]
        grid = np.maximum.accumulate(grid - t, axis=0) + t
        best = np.maximum(best, grid.reshape(-1)[: W + 1])
    return MonotoneSeq(best, 0)


def bellman_zeroone(inst: KnapsackInstance, budget: int = DEFAULT_BUDGET) -> MonotoneSeq:
    """Profile P[0..W] of 0-1 Knapsack."""
    _check_budget(inst, budget)
    W = inst.capacity
    best = np.zeros(W + 1, dtype=np.int64)
    for it in inst.items:
        w, p = it.weight, it.profit
        if w <= W:
            best[w:] = np.maximum(best[w:], best[: W + 1 - w] + p)
    return MonotoneSeq(best, 0)


def bellman_bounded_cardinality(inst: KnapsackInstance, cap: int, budget: int = DEFAULT_BUDGET) -> MonotoneSeq:
    """Profile over solutions with at most ``cap`` items (in the instance's mode)."""
    _check_budget(inst, budget)
    W = inst.capacity
    cap = min(cap, W)
    if inst.mode == ZERO_ONE:
        # table[c] = best profit using at most c items.
        table = np.zeros((cap + 1, W + 1), dtype=np.int64)
        for it in inst.items:
            w, p = it.weight, it.profit
            if w > W:
                continue
            for c in range(cap, 0, -1):
                table[c, w:] = np.maximum(table[c, w:], table[c - 1, : W + 1 - w] + p)
        return MonotoneSeq(table[cap], 0)
    best = np.zeros(W + 1, dtype=np.int64)
    for _ in range(cap):
        nxt = best.copy()
        for it in inst.items:
            w, p = it.weight, it.profit
            if w <= W:
                nxt[w:] = np.maximum(nxt[w:], best[: W + 1 - w] + p)
        best = nxt
    return MonotoneSeq(best, 0)


def brute_maxconv(a: MonotoneSeq, b: MonotoneSeq) -> MonotoneSeq:
    """All-pairs (max,+)-convolution via a scatter-max over the outer sum."""
    av, bv = a.values, b.values
    out = np.full(av.size + bv.size - 1, NEG, dtype=np.int64)
    sums = np.add.outer(av, bv)
    sums[sums < NEG_FLOOR] = NEG
    idx = np.add.outer(np.arange(av.size), np.arange(bv.size))
    np.maximum.at(out, idx.ravel(), sums.ravel())
    return MonotoneSeq(out, a.base + b.base)


def brute_step_conv(a: StepList, b: StepList) -> StepList:
    """Exact (max,+)-convolution of two step functions as a step list."""
    w = np.add.outer(a.weights, b.weights).ravel()
    p = np.add.outer(a.profits, b.profits).ravel()
    keep = dominance_filter(w, p)
    return StepList(weights=w[keep], profits=p[keep])


def gen_instance(
    n: int,
    p_max: int,
    w_max: int,
    capacity: int,
    mode: str = UNBOUNDED,
    correlation: str = "none",
    seed: int = 0,
) -> KnapsackInstance:
    """Random instance, deterministic in its arguments.

    ``strong`` draws profits within 1 of the weight; ``inverse`` makes light
    items profitable and heavy items cheap.
    """
    if min(n, p_max, w_max) < 1 or capacity < 0:
        raise ValueError("n, p_max, w_max must be positive and capacity non-negative")
    if correlation not in CORRELATIONS:
        raise ValueError(f"unknown correlation {correlation!r}")
    rng = np.random.default_rng(seed)
    if correlation == "none":
        w = rng.integers(1, w_max + 1, n)
        p = rng.integers(1, p_max + 1, n)
    elif correlation == "strong":
        w = rng.integers(1, min(w_max, p_max + 1) + 1, n)
        p = np.clip(w + rng.integers(-1, 2, n), np.maximum(w - 1, 0), np.minimum(w + 1, p_max))
    else:
        w = rng.integers(1, w_max + 1, n)
        base = (p_max * (w_max - w + 1)) // w_max
        p = np.clip(base + rng.integers(-1, 2, n), 1, p_max)
    items = tuple(Item(int(pi), int(wi)) for pi, wi in zip(p, w))
    return KnapsackInstance(items, capacity, mode)


def gen_monotone_seq(n: int, bound: int, seed: int = 0, leading_neg_inf: int = 0) -> MonotoneSeq:
    """Non-decreasing sequence A[0..n] in [0, bound], as clipped prefix sums of random increments.

    The first ``leading_neg_inf`` entries are replaced by minus infinity.
    """
    rng = np.random.default_rng(seed)
    step = max(1, (2 * bound) // max(n, 1))
    values = np.minimum(np.cumsum(rng.integers(0, step + 1, n + 1)), bound).astype(np.int64)
    values[: min(leading_neg_inf, n + 1)] = NEG
    return MonotoneSeq(values, 0)


def gen_step_list(size: int, w_max: int, p_max: int, seed: int = 0, with_zero: bool = False) -> StepList:
    """Random dominance-free step list with up to ``size`` steps of positive weight and profit."""
    rng = np.random.default_rng(seed)
    w = rng.integers(1, w_max + 1, size)
    p = rng.integers(1, p_max + 1, size)
    if with_zero:
        w, p = np.append(w, 0), np.append(p, 0)
    keep = dominance_filter(w, p)
    return StepList(weights=w[keep], profits=p[keep])


__all__ = [
    "CORRELATIONS",
    "DEFAULT_BUDGET",
    "OracleBudgetError",
    "bellman_bounded_cardinality",
    "bellman_unbounded",
    "bellman_zeroone",
    "brute_maxconv",
    "brute_step_conv",
    "gen_instance",
    "gen_monotone_seq",
    "gen_step_list",
]

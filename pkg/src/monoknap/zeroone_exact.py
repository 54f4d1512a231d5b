"""Randomized exact 0-1 Knapsack on top of (max,+)-convolution.

Items are grouped by the dyadic class of their profit and weight.  Each group is
split at random into ``z`` subgroups, so that a fixed solution puts only
``O(log z)`` items into any subgroup.  The profile of at most ``kappa`` items of
a subgroup is found by color coding: throw the items into ``kappa^2`` buckets,
take one item per bucket, convolve the bucket profiles, and keep the entrywise
maximum over several repetitions.  Subgroups and then groups are merged in a
binary tree.

All profiles are dense non-negative arrays indexed by weight ("best profit with
weight at most j"), so lookups beyond an array's end take its last entry.
Every array is kept as a node of the computation tree, which is what the
solution reconstruction walks down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    NEG,
    ZERO_ONE,
    Item,
    KnapsackInstance,
    ReconstructionError,
    Solution,
    StepList,
    MonotoneSeq,
    steps_from_seq,
)
from .maxplus import KernelConfig, batched_conv_values


@dataclass(frozen=True)
class ZeroOneConfig:
    """Randomness and the constants hidden in kappa = O(log z) and the repetition count."""

    rng_seed: int = 0
    kappa_factor: int = 3
    repetition_factor: int = 6
    opt_upper_bound: int | None = None
    # Subgroups with at most kappa items get their exact profile instead of color coding.
    exact_small: bool = True

    def __post_init__(self) -> None:
        if self.kappa_factor < 1 or self.repetition_factor < 1:
            raise ValueError("kappa_factor and repetition_factor must be at least 1")
        if self.opt_upper_bound is not None and self.opt_upper_bound < 0:
            raise ValueError("opt_upper_bound must be non-negative")


# Profile tree.  Each node holds its dense profile in ``values``.


@dataclass(eq=False)
class _Leaf:
    values: np.ndarray
    choice: np.ndarray  # item index realising values[j], -1 for the empty set


@dataclass(eq=False)
class _Conv:
    values: np.ndarray
    left: object
    right: object


@dataclass(eq=False)
class _Max:
    values: np.ndarray
    children: list = field(default_factory=list)


def _at(values: np.ndarray, j: int) -> int:
    return int(values[min(j, values.size - 1)])


def _clamped(values: np.ndarray, size: int) -> np.ndarray:
    if values.size >= size:
        return values[:size]
    return np.concatenate((values, np.full(size - values.size, values[-1], dtype=np.int64)))


def _leaf(indices, profits: np.ndarray, weights: np.ndarray, cap: int) -> _Leaf:
    """Best single item of weight <= j, for j in [0, cap]."""
    best = np.zeros(cap + 1, dtype=np.int64)
    who = np.full(cap + 1, -1, dtype=np.int64)
    for idx in indices:
        w, p = int(weights[idx]), int(profits[idx])
        if w <= cap and p > best[w]:
            best[w], who[w] = p, idx
    run = np.maximum.accumulate(best)
    pos = np.maximum.accumulate(np.where((best == run) & (who >= 0), np.arange(cap + 1), 0))
    choice = who[pos]
    choice[run == 0] = -1
    return _Leaf(run, choice)


def _singleton_rows(indices, profits: np.ndarray, weights: np.ndarray, cap: int) -> tuple[np.ndarray, np.ndarray]:
    """Per item, the profile "p from weight w on" and its choice row (items heavier than cap give zeros)."""
    idx = np.asarray(indices, dtype=np.int64)
    on = np.arange(cap + 1)[None, :] >= weights[idx][:, None]
    on &= profits[idx][:, None] > 0
    return np.where(on, profits[idx][:, None], 0), np.where(on, idx[:, None], -1)


def _singletons(indices, profits: np.ndarray, weights: np.ndarray, cap: int) -> list[_Leaf]:
    values, choice = _singleton_rows(indices, profits, weights, cap)
    return [_Leaf(v, c) for v, c in zip(values, choice)]


def _sparse_conv(left: np.ndarray, right: np.ndarray, size: int) -> np.ndarray:
    """Row-wise convolution when the rows of ``left`` have few steps.

    Rows are non-negative non-decreasing profiles, so only the first index of
    each step of ``left`` matters, and ``right`` is read clamped to its last entry.
    """
    rows, n = left.shape
    m = right.shape[1]
    rise = np.ones((rows, n), dtype=bool)
    rise[:, 1:] = left[:, 1:] > left[:, :-1]
    count = int(rise.sum(axis=1).max())
    pos = np.argsort(~rise, axis=1, kind="stable")[:, :count]
    gain = np.where(np.take_along_axis(rise, pos, axis=1), np.take_along_axis(left, pos, axis=1), NEG)
    idx = np.arange(size)[None, None, :] - pos[:, :, None]
    vals = gain[:, :, None] + right[np.arange(rows)[:, None, None], np.clip(idx, 0, m - 1)]
    vals[idx < 0] = NEG
    return vals.max(axis=1)


def _step_counts(values: np.ndarray) -> int:
    return int((values[:, 1:] > values[:, :-1]).sum(axis=1).max()) + 1


def _conv_level(pairs: list[tuple[object, object]], caps: list[int], kernel: KernelConfig | None) -> list[_Conv]:
    """Convolve many node pairs (pair t cut to [0, caps[t]]), batching pairs of equal shape."""
    out: list[_Conv | None] = [None] * len(pairs)
    by_shape: dict[tuple[int, int, int], list[int]] = {}
    for t, (x, y) in enumerate(pairs):
        by_shape.setdefault((x.values.size, y.values.size, caps[t]), []).append(t)
    for (_, _, cap), ts in by_shape.items():
        left = np.stack([pairs[t][0].values for t in ts])
        right = np.stack([pairs[t][1].values for t in ts])
        size = min(cap + 1, left.shape[1] + right.shape[1] - 1)
        sl, sr = _step_counts(left), _step_counts(right)
        if sr < sl:
            left, right, sl = right, left, sr
        if 4 * sl < right.shape[1]:
            values = _sparse_conv(left, right, size)
        else:
            values = batched_conv_values(left, right, kernel, size)
        for t, v in zip(ts, values):
            out[t] = _Conv(v, pairs[t][0], pairs[t][1])
    return out


def _max(children: list, cap: int) -> _Max:
    size = min(cap + 1, max(c.values.size for c in children))
    values = np.max([_clamped(c.values, size) for c in children], axis=0)
    return _Max(values, children)


def _merge_many(forests: list[list], caps, kernel: KernelConfig | None) -> list:
    """Merge several node lists side by side, one batched convolution round per tree level.

    ``caps`` is one weight cap for all lists or a list with one cap per list.
    """
    caps = [caps] * len(forests) if isinstance(caps, int) else list(caps)
    forests = [list(nodes) for nodes in forests]
    for t, nodes in enumerate(forests):
        if not nodes:
            forests[t] = [_Leaf(np.zeros(1, dtype=np.int64), np.full(1, -1, dtype=np.int64))]
    while any(len(nodes) > 1 for nodes in forests):
        pairs, pair_caps = [], []
        for nodes, cap in zip(forests, caps):
            for t in range(0, len(nodes) - 1, 2):
                pairs.append((nodes[t], nodes[t + 1]))
                pair_caps.append(cap)
        merged = iter(_conv_level(pairs, pair_caps, kernel))
        nxt = []
        for nodes in forests:
            level = [next(merged) for _ in range(len(nodes) // 2)]
            if len(nodes) % 2:
                level.append(nodes[-1])
            nxt.append(level)
        forests = nxt
    return [nodes[0] for nodes in forests]


def _merge_nodes(nodes: list, cap: int, kernel: KernelConfig | None):
    """Pairwise convolution levels; an odd node out is carried to the next level."""
    return _merge_many([nodes], cap, kernel)[0]


def _bucket_forests(values: np.ndarray, choice: np.ndarray, assign: np.ndarray, buckets: int) -> list[list[_Leaf]]:
    """For each repetition (row of ``assign``), one leaf per non-empty bucket in bucket order.

    A bucket leaf is the best single item of weight <= j among the bucket's items.
    """
    reps, m = assign.shape
    keys = (np.arange(reps)[:, None] * buckets + assign).ravel()
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    starts = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
    rows = values[order % m]
    best = np.maximum.reduceat(rows, starts, axis=0)
    # Row inside each bucket attaining the maximum: the first hit per segment.
    hit = rows == np.repeat(best, np.diff(np.append(starts, order.size)), axis=0)
    first = np.minimum.reduceat(np.where(hit, np.arange(order.size)[:, None], order.size), starts, axis=0)
    picked = np.take_along_axis(choice[order % m], first, axis=0)
    picked[best == 0] = -1
    forests: list[list[_Leaf]] = [[] for _ in range(reps)]
    for rep, v, c in zip((keys[starts] // buckets).tolist(), best, picked):
        forests[rep].append(_Leaf(v, c))
    return forests


def _forests(
    indices: list[int],
    profits: np.ndarray,
    weights: np.ndarray,
    kappa: int,
    cap: int,
    reps: int,
    rng: np.random.Generator,
    exact_small: bool = True,
) -> list[list[_Leaf]]:
    """Leaf lists whose merged roots, maximised entrywise, give the subgroup profile."""
    if len(indices) <= 1:
        return [[_leaf(indices, profits, weights, cap)]]
    if exact_small and len(indices) <= kappa:
        # No subset exceeds kappa items, so the exact profile is cheaper and no worse.
        return [_singletons(indices, profits, weights, cap)]
    buckets = kappa * kappa
    values, choice = _singleton_rows(indices, profits, weights, cap)
    # One draw per repetition; empty buckets (the identity profile) are skipped.
    return _bucket_forests(values, choice, rng.integers(0, buckets, (reps, len(indices))), buckets)


def _combine(roots: list, cap: int):
    return roots[0] if len(roots) == 1 else _max(roots, cap)


def _color_code(
    indices: list[int],
    profits: np.ndarray,
    weights: np.ndarray,
    kappa: int,
    cap: int,
    reps: int,
    rng: np.random.Generator,
    kernel: KernelConfig | None,
    exact_small: bool = True,
):
    """Profile of at most ``kappa`` items (w.h.p. per entry) as a tree node.

    Items go into ``kappa^2`` random buckets per repetition, one item per bucket
    is taken, and the entrywise maximum over repetitions is kept.
    """
    forests = _forests(indices, profits, weights, kappa, cap, reps, rng, exact_small)
    return _combine(_merge_many(forests, cap, kernel), cap)


def _steps(node) -> StepList:
    return steps_from_seq(MonotoneSeq(node.values, 0, check=False))


def _pairs(items) -> tuple[np.ndarray, np.ndarray]:
    items = [it if isinstance(it, Item) else Item(int(it[0]), int(it[1])) for it in items]
    profits = np.array([it.profit for it in items], dtype=np.int64)
    weights = np.array([it.weight for it in items], dtype=np.int64)
    return profits, weights


def color_code_small(
    items,
    kappa: int,
    weight_cap: int,
    reps: int,
    rng: np.random.Generator,
    kernel: KernelConfig | None = None,
    *,
    exact_small: bool = True,
) -> StepList:
    """Step list of the best profit using at most ``kappa`` of ``items`` (``(p, w)`` pairs or Items).

    Each repetition throws the items into ``kappa^2`` random buckets and convolves
    the single-item bucket profiles; the entrywise maximum over ``reps``
    repetitions is returned, restricted to weights ``[0, weight_cap]``.  With
    ``exact_small`` at most ``kappa`` items are profiled exactly without sampling.
    """
    if kappa < 1 or reps < 1:
        raise ValueError("kappa and reps must be at least 1")
    profits, weights = _pairs(items)
    node = _color_code(list(range(len(profits))), profits, weights, kappa, weight_cap, reps, rng, kernel, exact_small)
    return _steps(node)


def merge_tree(profiles: list[StepList], weight_cap: int, kernel: KernelConfig | None = None) -> StepList:
    """(max,+)-fold of step-list profiles in a binary tree, restricted to ``[0, weight_cap]``.

    Each profile must contain the step ``(0, 0)`` or start above zero weight with
    value zero implied (profiles of item sets always do).
    """
    nodes = []
    for prof in profiles:
        dense = np.maximum(prof.evaluate(np.arange(weight_cap + 1)), 0)
        nodes.append(_Leaf(dense, np.full(dense.size, -1, dtype=np.int64)))
    return _steps(_merge_nodes(nodes, weight_cap, kernel))


def dyadic_class(x: int) -> int:
    """The c with x in [2^(c-1), 2^c)."""
    return int(x).bit_length()


def group_items(inst: KnapsackInstance, opt_bound: int | None = None) -> dict[tuple[int, int], list[int]]:
    """Indices grouped by (profit class, weight class); zero-profit items are dropped.

    ``opt_bound`` is accepted for symmetry with the solver and does not change
    the partition.
    """
    groups: dict[tuple[int, int], list[int]] = {}
    for idx, it in enumerate(inst.items):
        if it.profit == 0:
            continue
        groups.setdefault((dyadic_class(it.profit), dyadic_class(it.weight)), []).append(idx)
    return dict(sorted(groups.items()))


def fractional_bound(inst: KnapsackInstance) -> int:
    """Ceiling of the fractional 0-1 relaxation (greedy by ratio, last item split)."""
    order = sorted(range(inst.n), key=lambda i: (-inst.items[i].profit / inst.items[i].weight, i))
    room, total_num, total_den = inst.capacity, 0, 1
    for i in order:
        it = inst.items[i]
        if it.weight <= room:
            room -= it.weight
            total_num += it.profit * total_den
        else:
            # add it.profit * room / it.weight
            total_num = total_num * it.weight + it.profit * room * total_den
            total_den *= it.weight
            break
    return -(-total_num // total_den)


def default_opt_bound(inst: KnapsackInstance) -> int:
    return max(1, 2 * fractional_bound(inst))


def subgroup_count(a: int, b: int, capacity: int, opt_bound: int, group_size: int) -> int:
    """z = ceil(min(W / 2^(b-1), U / 2^(a-1))), at least 1 and at most the group size."""
    z = min(-(-capacity // (1 << (b - 1))), -(-opt_bound // (1 << (a - 1))))
    return max(1, min(z, group_size))


def _log_factor(z: int) -> int:
    return math.ceil(math.log2(z + 2))


@dataclass
class ZeroOneRun:
    """Computation tree of one solve, kept for reconstruction."""

    instance: KnapsackInstance
    root: object
    opt: int


def zeroone_run(
    inst: KnapsackInstance, cfg: ZeroOneConfig | None = None, kernel: KernelConfig | None = None
) -> ZeroOneRun:
    """Build the full profile tree for ``inst`` (indices refer to ``inst``)."""
    if inst.mode != ZERO_ONE:
        raise ValueError("expected a zero-one instance")
    cfg = cfg or ZeroOneConfig()
    W = inst.capacity
    live = [i for i, it in enumerate(inst.items) if it.profit > 0 and it.weight <= W]
    sub = KnapsackInstance(tuple(inst.items[i] for i in live), W, ZERO_ONE)
    if not live:
        root = _merge_nodes([], W, kernel)
        return ZeroOneRun(inst, root, 0)
    profits = np.array([inst.items[i].profit for i in range(inst.n)], dtype=np.int64)
    weights = np.array([inst.items[i].weight for i in range(inst.n)], dtype=np.int64)
    bound = cfg.opt_upper_bound if cfg.opt_upper_bound is not None else default_opt_bound(sub)
    # (group, cap, number of forests) per subgroup; all subgroups are merged side by side.
    jobs: list[tuple[int, int, int]] = []
    forests: list[list] = []
    groups = group_items(sub)
    for g, ((a, b), members) in enumerate(groups.items()):
        members = [live[m] for m in members]
        z = subgroup_count(a, b, W, max(bound, 1), len(members))
        kappa = cfg.kappa_factor * _log_factor(z)
        reps = cfg.repetition_factor * _log_factor(z)
        rng = np.random.default_rng([cfg.rng_seed, a, b])
        split = rng.integers(0, z, len(members)) if z > 1 else np.zeros(len(members), dtype=np.int64)
        for s in range(z):
            chosen = [m for m, h in zip(members, split.tolist()) if h == s]
            if not chosen:
                continue
            cap = min(W, kappa * ((1 << b) - 1), int(weights[chosen].sum()))
            sub_rng = np.random.default_rng([cfg.rng_seed, a, b, s])
            made = _forests(chosen, profits, weights, kappa, cap, reps, sub_rng, cfg.exact_small)
            jobs.append((g, cap, len(made)))
            forests.extend(made)
    roots = iter(_merge_many(forests, [cap for _, cap, count in jobs for _ in range(count)], kernel))
    per_group: list[list] = [[] for _ in groups]
    for g, cap, count in jobs:
        per_group[g].append(_combine([next(roots) for _ in range(count)], cap))
    root = _merge_nodes(_merge_many(per_group, W, kernel), W, kernel)
    return ZeroOneRun(inst, root, _at(root.values, W))


def reconstruct_zeroone(run: ZeroOneRun, target: int | None = None) -> Solution:
    """Follow one witness per convolution from the root entry down to the leaves."""
    W = run.instance.capacity if target is None else target
    chosen: list[int] = []
    stack = [(run.root, W)]
    while stack:
        node, j = stack.pop()
        value = _at(node.values, j)
        j = min(j, node.values.size - 1)
        if isinstance(node, _Leaf):
            idx = int(node.choice[j])
            if idx >= 0:
                chosen.append(idx)
            elif value != 0:
                raise ReconstructionError("leaf value without an item")
        elif isinstance(node, _Max):
            child = next((c for c in node.children if _at(c.values, j) == value), None)
            if child is None:
                raise ReconstructionError("no repetition attains the maximum")
            stack.append((child, j))
        else:
            i = np.arange(j + 1)
            left = _clamped(node.left.values, j + 1)
            right = _clamped(node.right.values, j + 1)[::-1]
            hits = np.flatnonzero(left + right == value)
            if hits.size == 0:
                raise ReconstructionError(f"no witness for convolution entry {j}")
            m = int(i[hits[0]])
            stack.append((node.left, m))
            stack.append((node.right, j - m))
    if len(set(chosen)) != len(chosen):
        raise ReconstructionError("an item was used twice")
    sol = Solution.from_indices(chosen)
    if sol.profit(run.instance) != run.opt and target is None:
        raise ReconstructionError("reconstructed profit differs from the computed optimum")
    return sol


def solve_zeroone(
    inst: KnapsackInstance,
    cfg: ZeroOneConfig | None = None,
    kernel: KernelConfig | None = None,
    *,
    reconstruct: bool = True,
) -> tuple[int, Solution]:
    """Optimal value w.h.p. (never above OPT) and a solution attaining the reported value."""
    run = zeroone_run(inst, cfg, kernel)
    return run.opt, reconstruct_zeroone(run) if reconstruct else Solution()


__all__ = [
    "ZeroOneConfig",
    "ZeroOneRun",
    "color_code_small",
    "default_opt_bound",
    "dyadic_class",
    "fractional_bound",
    "group_items",
    "merge_tree",
    "reconstruct_zeroone",
    "solve_zeroone",
    "subgroup_count",
    "zeroone_run",
]

"""Exact Unbounded Knapsack through clipped repeated squaring.

The profile of solutions with at most ``2^i`` items is squared ``k = ceil(log W)``
times.  Level ``i`` is only kept on the ``O(Delta)`` weights around
``floor(W / 2^(k-i))``, and its values are clipped to a band of width
``O(Delta)`` around the scaled guess ``alpha / 2^(k-i)``, so every squaring is a
bounded monotone (max,+)-convolution of length ``O(Delta)``.  Whether the top
entry reaches ``alpha`` decides ``OPT >= alpha``; binary search finds OPT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    NEG,
    NEG_FLOOR,
    UNBOUNDED,
    KnapsackInstance,
    MonotoneSeq,
    ReconstructionError,
    Solution,
    instance_stats,
    max_ratio_index,
    normalized_with_index,
)
from .maxplus import KernelConfig, WitnessArray, maxconv_range, witness_array

WINDOW = 8
UPPER_CLIP = 24
LOWER_CLIP = 40


@dataclass(frozen=True)
class ClippedLevels:
    """The sequences C_0..C_k of one decision run, plus per-level witnesses if requested."""

    levels: list[MonotoneSeq]
    alpha: int
    k: int
    delta: int
    capacity: int
    witnesses: list[WitnessArray | None] | None = None

    @property
    def top(self):
        return self.levels[-1][self.capacity]


def _require_unbounded(inst: KnapsackInstance) -> None:
    if inst.mode != UNBOUNDED:
        raise ValueError("expected an unbounded-mode instance")


def greedy_two_approx(inst: KnapsackInstance) -> tuple[int, Solution]:
    """As many copies as fit of the best-ratio item among those that fit."""
    _require_unbounded(inst)
    stats = instance_stats(inst)
    i = stats.greedy_item_index
    if i is None:
        return 0, Solution()
    copies = inst.capacity // inst.items[i].weight
    return stats.greedy_value, Solution({i: copies})


def reduce_capacity(inst: KnapsackInstance) -> tuple[KnapsackInstance, Solution]:
    """Pre-pack copies of the best-ratio item until W <= 2 * w_max^3.

    Some optimal solution always contains that item while the capacity is above
    the threshold, so OPT(inst) = OPT(reduced) + profit(forced).  Indices in
    ``forced`` refer to ``inst``.
    """
    _require_unbounded(inst)
    if inst.n == 0:
        return inst, Solution()
    threshold = 2 * max(it.weight for it in inst.items) ** 3
    if inst.capacity <= threshold:
        return inst, Solution()
    star = max_ratio_index(inst)
    w_star = inst.items[star].weight
    copies = -(-(inst.capacity - threshold) // w_star)
    return inst.with_capacity(inst.capacity - copies * w_star), Solution({star: copies})


def _levels_count(capacity: int) -> int:
    return max(0, (capacity - 1).bit_length()) if capacity > 1 else 0


def _window(capacity: int, k: int, i: int, delta: int) -> range:
    centre = capacity >> (k - i)
    return range(max(0, centre - WINDOW * delta), min(capacity, centre + WINDOW * delta) + 1)


def single_item_profile(inst: KnapsackInstance, window: range) -> tuple[MonotoneSeq, np.ndarray]:
    """P_0 over ``window``: best single-item profit with weight <= j (0 for the empty set).

    Also returns, per entry, the index of the item realising it (-1 for none).
    """
    size = window.stop
    best = np.zeros(size, dtype=np.int64)
    who = np.full(size, -1, dtype=np.int64)
    for idx, it in enumerate(inst.items):
        if it.weight < size and it.profit > best[it.weight]:
            best[it.weight] = it.profit
            who[it.weight] = idx
    # Prefix maximum, carrying the arg along.
    run = np.maximum.accumulate(best)
    pos = np.maximum.accumulate(np.where(best == run, np.arange(size), 0))
    arg = who[pos]
    arg[run == 0] = -1
    lo = window.start
    return MonotoneSeq(run[lo:], lo, check=False), arg[lo:]


def _clip(values: np.ndarray, alpha: int, shift: int, delta: int) -> np.ndarray:
    """Clip to the band around alpha / 2^shift using exact integer thresholds."""
    floor_a = alpha >> shift
    ceil_a = -((-alpha) >> shift)
    fin = values > NEG_FLOOR
    out = values.copy()
    out[fin & (values - UPPER_CLIP * delta > floor_a)] = ceil_a + UPPER_CLIP * delta
    out[fin & (values + LOWER_CLIP * delta < ceil_a)] = NEG
    return out


def clipped_decide(
    inst: KnapsackInstance,
    alpha: int,
    config: KernelConfig | None = None,
    *,
    witnesses: bool = False,
) -> tuple[bool, ClippedLevels]:
    """Decide OPT >= alpha with the clipped squaring scheme.

    ``inst`` should be normalized (one item per weight).  With ``witnesses`` the
    per-level witness arrays needed for reconstruction are recorded.
    """
    _require_unbounded(inst)
    W = inst.capacity
    stats = instance_stats(inst)
    p_max = stats.p_max
    if not 0 <= alpha <= max(p_max * W, 0):
        raise ValueError(f"alpha={alpha} outside [0, p_max * W] = [0, {p_max * W}]")
    delta = max(stats.delta, 1)
    k = _levels_count(W)
    level, _ = single_item_profile(inst, _window(W, k, 0, delta))
    levels = [level]
    wits: list[WitnessArray | None] = [None]
    for i in range(1, k + 1):
        prev = levels[-1]
        target = _window(W, k, i, delta)
        raw = maxconv_range(prev, prev.window, prev, prev.window, target, config)
        levels.append(MonotoneSeq(_clip(raw.values, alpha, k - i, delta), target.start, check=False))
        if witnesses:
            wits.append(witness_array(prev, prev, config, stream=i))
    done = ClippedLevels(levels, alpha, k, delta, W, wits if witnesses else None)
    return levels[-1][W] >= alpha, done


def _accepts(inst: KnapsackInstance, alpha: int, config: KernelConfig | None) -> bool:
    return clipped_decide(inst, alpha, config)[0]


def search_opt(inst: KnapsackInstance, config: KernelConfig | None = None) -> int:
    """Largest alpha accepted by :func:`clipped_decide` (binary search over [0, p_max * W])."""
    stats = instance_stats(inst)
    lo, hi = 0, stats.p_max * inst.capacity
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _accepts(inst, mid, config):
            lo = mid
        else:
            hi = mid - 1
    return lo


def reconstruct_unbounded(
    inst: KnapsackInstance, levels: ClippedLevels, config: KernelConfig | None = None
) -> Solution:
    """Walk the squaring tree down from C_k[W], counting how often each entry is used.

    Uses the recorded witness arrays when present; otherwise witnesses are found
    level by level, only at the entries the walk actually reaches.  Indices in
    the result refer to ``inst``.
    """
    W = levels.capacity
    top = levels.levels[-1][W]
    if top != levels.alpha:
        raise ReconstructionError(f"C_k[W] = {top} differs from alpha = {levels.alpha}")
    counts = {W: 1}
    for i in range(levels.k, 0, -1):
        cur, below = levels.levels[i], levels.levels[i - 1]
        if levels.witnesses is not None:
            wit = levels.witnesses[i]
        else:
            wit = witness_array(below, below, config, stream=i, outputs=sorted(counts))
        nxt: dict[int, int] = {}
        for j, z in counts.items():
            m = wit[j]
            if m is None or below[m] + below[j - m] != cur[j]:
                raise ReconstructionError(f"witness {m} does not certify C_{i}[{j}]")
            nxt[m] = nxt.get(m, 0) + z
            nxt[j - m] = nxt.get(j - m, 0) + z
        counts = nxt
    base, arg = single_item_profile(inst, levels.levels[0].window)
    chosen: dict[int, int] = {}
    for j, z in counts.items():
        idx = int(arg[j - base.base])
        if idx >= 0:
            chosen[idx] = chosen.get(idx, 0) + z
    sol = Solution(chosen)
    if sol.profit(inst) != levels.alpha or sol.weight(inst) > W:
        raise ReconstructionError("reconstructed solution does not match the decision run")
    return sol


def decide_unbounded(inst: KnapsackInstance, alpha: int, config: KernelConfig | None = None) -> bool:
    """Whether OPT >= alpha, from a single clipped decision run (no search)."""
    _require_unbounded(inst)
    norm, _ = normalized_with_index(inst)
    if alpha <= 0:
        return True
    if norm.n == 0 or norm.capacity == 0:
        return False
    reduced, forced = reduce_capacity(norm)
    rest = alpha - forced.profit(norm)
    if rest <= 0:
        return True
    if rest > instance_stats(reduced).p_max * reduced.capacity:
        return False
    return clipped_decide(reduced, rest, config)[0]


def solve_unbounded(
    inst: KnapsackInstance, config: KernelConfig | None = None, *, reconstruct: bool = True
) -> tuple[int, Solution]:
    """OPT and (optionally) an optimal multiset, with indices into ``inst``.

    Pipeline: normalize, pre-pack the best-ratio item, binary search on the
    clipped decision, then one more decision run at alpha = OPT with witnesses.
    """
    _require_unbounded(inst)
    norm, keep = normalized_with_index(inst)
    if norm.n == 0 or norm.capacity == 0:
        return 0, Solution()
    reduced, forced = reduce_capacity(norm)
    forced_profit = forced.profit(norm)
    if instance_stats(reduced).p_max == 0:
        return forced_profit, forced.remap(keep) if reconstruct else Solution()
    opt = search_opt(reduced, config)
    if not reconstruct:
        return opt + forced_profit, Solution()
    ok, levels = clipped_decide(reduced, opt, config)
    if not ok:
        raise ReconstructionError("decision run at alpha = OPT rejected")
    sol = reconstruct_unbounded(reduced, levels, config) + forced
    return opt + forced_profit, sol.remap(keep)


__all__ = [
    "ClippedLevels",
    "clipped_decide",
    "decide_unbounded",
    "greedy_two_approx",
    "reconstruct_unbounded",
    "reduce_capacity",
    "search_opt",
    "single_item_profile",
    "solve_unbounded",
]

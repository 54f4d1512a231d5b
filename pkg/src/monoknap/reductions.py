"""Executable hardness chain, used to cross-validate the knapsack solvers.

BMMaxConv is computed by a simultaneous binary search whose membership test
("is C[k] >= (A + B)[k]?") is answered one block pair at a time by an
UpperBound oracle.  That oracle is in turn realised as
UpperBound -> SuperAdditivity -> Unbounded Knapsack -> a knapsack decider, so a
wrong decider shows up as a wrong convolution.

Sequences here are plain finite integer arrays.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .approx import ApproxParams, weak_fptas_run
from .core import (
    UNBOUNDED,
    ZERO_ONE,
    Item,
    KnapsackInstance,
    MonotoneSeq,
    instance_stats,
)
from .maxplus import KernelConfig
from .unbounded_exact import decide_unbounded
from .zeroone_exact import ZeroOneConfig, solve_zeroone

UpperBoundOracle = Callable[[np.ndarray, np.ndarray, np.ndarray], bool]
KnapsackDecider = Callable[[KnapsackInstance, int], bool]
BACKENDS = ("unbounded", "zeroone", "weak")


def _arr(x) -> np.ndarray:
    if isinstance(x, MonotoneSeq):
        if x.base != 0 or not np.all(x.finite):
            raise ValueError("expected a finite sequence starting at index 0")
        return np.asarray(x.values, dtype=np.int64)
    return np.asarray(x, dtype=np.int64)


def upperbound_holds(a, b, c) -> bool:
    """Direct check of C[k] >= A[i] + B[j] for all i + j = k < len(C)."""
    a, b, c = _arr(a), _arr(b), _arr(c)
    sums = np.add.outer(a, b)
    idx = np.add.outer(np.arange(a.size), np.arange(b.size))
    ok = idx < c.size
    return bool(np.all(sums[ok] <= c[idx[ok]]))


def is_superadditive(e) -> bool:
    """E[i] + E[j] <= E[i + j] whenever i + j is an index of E."""
    e = _arr(e)
    return upperbound_holds(e, e, e)


# ---------------------------------------------------------------------------
# UpperBound -> SuperAdditivity -> Unbounded Knapsack -> 0-1 Knapsack


def _standardize(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Equivalent UpperBound instance with len(A) = len(B) = len(C) and only constraints k < len(C).

    A and B are padded by repeating their last entry (padded pairs are dominated
    by genuine ones), and C is padded with a value that satisfies every constraint.
    """
    if a.size == 0 or b.size == 0 or c.size == 0:
        raise ValueError("sequences must be non-empty")
    n = max(a.size, b.size, c.size)
    top = max(int(c[-1]), int(a[-1] + b[-1]))
    pa = np.concatenate((a, np.full(n - a.size, a[-1])))
    pb = np.concatenate((b, np.full(n - b.size, b[-1])))
    pc = np.concatenate((c, np.full(n - c.size, top)))
    return pa, pb, pc


def upperbound_to_superadditivity(a, b, c) -> np.ndarray:
    """Sequence E that is super-additive iff C[k] >= max_{i+j=k} A[i] + B[j] for every index k of C.

    With A, B, C brought to a common length n + 1 (A and B padded by repeating
    their last entry, so a C of length 2n + 1 makes n twice as large), E has
    4n + 4 entries: zeros, then Delta + A, 4 Delta + B and 5 Delta + C, where
    Delta is the largest entry.  Entries must be non-negative.
    """
    a, b, c = _standardize(_arr(a), _arr(b), _arr(c))
    if min(a.min(), b.min(), c.min()) < 0:
        raise ValueError("entries must be non-negative")
    delta = int(max(a.max(), b.max(), c.max()))
    return np.concatenate((np.zeros(a.size, dtype=np.int64), delta + a, 4 * delta + b, 5 * delta + c))


def superadditivity_to_knapsack(e) -> tuple[KnapsackInstance, int]:
    """Unbounded instance with OPT = D if E is super-additive and OPT >= D + 1 otherwise.

    For E[0..n] with E[0] = 0: D = 5 E[n], W = 2n + 1, light items (E[i], i) for
    1 <= i <= n and heavy items (D - E[i], W - i) for 0 <= i <= n.
    """
    e = _arr(e)
    n = e.size - 1
    if n < 0 or e[0] != 0 or np.any(np.diff(e) < 0):
        raise ValueError("expected a non-decreasing sequence with E[0] = 0")
    d = 5 * int(e[-1])
    cap = 2 * n + 1
    light = [Item(int(e[i]), i) for i in range(1, n + 1)]
    heavy = [Item(d - int(e[i]), cap - i) for i in range(n + 1)]
    return KnapsackInstance(tuple(light + heavy), cap, UNBOUNDED), d


def unbounded_to_zeroone(inst: KnapsackInstance) -> KnapsackInstance:
    """0-1 instance with items (2^j p, 2^j w), 0 <= j <= floor(log2 W); same W and OPT."""
    if inst.mode != UNBOUNDED:
        raise ValueError("expected an unbounded-mode instance")
    copies = max(inst.capacity, 1).bit_length()
    items = tuple(Item(it.profit << j, it.weight << j) for it in inst.items for j in range(copies))
    return KnapsackInstance(items, inst.capacity, ZERO_ONE)


def zeroone_origin(inst: KnapsackInstance) -> list[tuple[int, int]]:
    """For :func:`unbounded_to_zeroone`: item k of the 0-1 instance is (index, multiplier)."""
    copies = max(inst.capacity, 1).bit_length()
    return [(i, 1 << j) for i in range(inst.n) for j in range(copies)]


def exact_via_weak_approx(inst: KnapsackInstance, kernel: KernelConfig | None = None, calibration: int = 1) -> int:
    """Exact OPT from the weak scheme run at eps = 1 / (4 c (W + U)), U = 2 * greedy.

    At this eps every rounding unit is 1 and the read-off budget is W itself, so
    the weak answer is the optimum.
    """
    if inst.mode != UNBOUNDED:
        raise ValueError("expected an unbounded-mode instance")
    greedy = instance_stats(inst).greedy_value
    if inst.capacity == 0 or greedy == 0:
        return 0
    eps = Fraction(1, 4 * calibration * (inst.capacity + 2 * greedy))
    return weak_fptas_run(inst, eps, kernel, ApproxParams(eps), witnesses=False).value


def knapsack_decider(backend: str, config: KernelConfig | None = None, zo_config: ZeroOneConfig | None = None) -> KnapsackDecider:
    """``decide(inst, alpha)``: is OPT >= alpha?  Backends: unbounded, zeroone, weak."""
    if backend == "unbounded":
        return lambda inst, alpha: decide_unbounded(inst, alpha, config)
    if backend == "zeroone":
        return lambda inst, alpha: solve_zeroone(unbounded_to_zeroone(inst), zo_config, config, reconstruct=False)[0] >= alpha
    if backend == "weak":
        return lambda inst, alpha: exact_via_weak_approx(inst, config) >= alpha
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def upperbound_oracle_via_knapsack(decide: KnapsackDecider) -> UpperBoundOracle:
    """UpperBound answers through SuperAdditivity and a knapsack decision at D + 1."""

    def oracle(a, b, c) -> bool:
        inst, d = superadditivity_to_knapsack(upperbound_to_superadditivity(a, b, c))
        return not decide(inst, d + 1)

    return oracle


def direct_oracle(a, b, c) -> bool:
    """UpperBound decided by brute force (reference for the chain)."""
    return upperbound_holds(a, b, c)


# ---------------------------------------------------------------------------
# Decision -> search -> full convolution


def find_violation(
    a, b, c, oracle: UpperBoundOracle = direct_oracle, candidates=None
) -> tuple[int, int] | None:
    """Some (i, j) with A[i] + B[j] > C[i + j] at the smallest violated i + j, or None.

    The smallest violated index is located by binary search over prefixes
    (prefixes below it are YES instances); i is the smallest index realising it.
    ``candidates`` (sorted) may list the only indices that can be violated; the
    search then runs over them alone.
    """
    a, b, c = _arr(a), _arr(b), _arr(c)
    cand = np.arange(c.size) if candidates is None else np.asarray(candidates, dtype=np.int64)
    if cand.size == 0:
        return None

    def prefix_ok(end: int) -> bool:
        return oracle(a[: end + 1], b[: end + 1], c[: end + 1])

    if prefix_ok(int(cand[-1])):
        return None
    lo, hi = 0, cand.size - 1  # the prefix ending at cand[hi] is a NO instance
    while lo < hi:
        mid = (lo + hi) // 2
        if prefix_ok(int(cand[mid])):
            lo = mid + 1
        else:
            hi = mid
    k = int(cand[lo])
    i = np.arange(max(0, k - b.size + 1), min(k, a.size - 1) + 1)
    bad = np.flatnonzero(a[i] + b[k - i] > c[k])
    if bad.size == 0:
        raise RuntimeError(f"oracle reported a violation but none exists at index {k}")
    return int(i[bad[0]]), int(k - i[bad[0]])


def _blocks(x: np.ndarray, delta: int) -> list[tuple[int, int]]:
    """Split at multiples of ceil(sqrt(n)) and at the first index reaching each multiple of ceil(sqrt(Delta))."""
    n = x.size - 1
    marks = set(range(0, n + 1, math.isqrt(max(n - 1, 0)) + 1))
    step = math.isqrt(max(delta - 1, 0)) + 1
    for j in range(1, math.isqrt(delta) + 1):
        pos = int(np.searchsorted(x, j * step, side="left"))
        if pos <= n:
            marks.add(pos)
    starts = sorted(marks | {0})
    return [(s, e - 1) for s, e in zip(starts, starts[1:] + [n + 1])]


@dataclass
class ChainStats:
    """Counters from one convolution through the chain."""

    rounds: int = 0
    cells: int = 0
    oracle_calls: int = 0
    cache_hits: int = 0
    trivial_cells: int = 0
    marks: int = 0
    cache: dict = field(default_factory=dict, repr=False)


def _violations(a: np.ndarray, b: np.ndarray, c: np.ndarray, oracle: UpperBoundOracle, stats: ChainStats) -> np.ndarray:
    """M[k] = 1 iff C[k] < (A + B)[k], computed block pair by block pair."""
    size = c.size
    marked = np.zeros(size + 1, dtype=bool)  # index ``size`` is the never-marked dummy
    c_ext = np.append(c, np.iinfo(np.int64).max)
    delta = int(max(a.max(), b.max()))

    def ask(sa, sb, sc) -> bool:
        key = (sa.tobytes(), sb.tobytes(), sc.tobytes())
        hit = stats.cache.get(key)
        if hit is not None:
            stats.cache_hits += 1
            return hit
        stats.oracle_calls += 1
        ans = oracle(sa, sb, sc)
        stats.cache[key] = ans
        return ans

    for ia0, ia1 in _blocks(a, delta):
        for jb0, jb1 in _blocks(b, delta):
            stats.cells += 1
            k0, k1 = ia0 + jb0, ia1 + jb1
            la, lb = int(a[ia0]), int(b[jb0])
            low, up = la + lb, int(a[ia1] + b[jb1])
            span = slice(k0, k1 + 1)
            ks = np.arange(k0, k1 + 1)
            # Per-index bounds on this block pair's sums: one genuine pair, and the
            # largest entries that can still meet at k.
            first = np.maximum(ia0, ks - jb1)
            reached = a[first] + b[ks - first]
            ceiling = a[np.minimum(ia1, ks - jb0)] + b[np.minimum(jb1, ks - ia0)]
            marked[span] |= c[span] < reached
            sa = a[ia0 : ia1 + 1] - la
            sb = b[jb0 : jb1 + 1] - lb + 1
            # Marking only raises C', so a prefix once found violation-free stays so.
            clean = 0
            while True:
                free = np.flatnonzero(~marked[k0:])
                nxt = k0 + free[np.searchsorted(free, np.arange(k1 - k0 + 1))]
                cp = np.clip(c_ext[nxt], low - 1, up + 1)
                cand = np.flatnonzero(cp < ceiling)
                cand = cand[cand >= clean]
                if cand.size == 0:
                    stats.trivial_cells += 1
                    break
                found = find_violation(sa, sb, cp - low + 1, ask, cand)
                if found is None:
                    break
                clean = found[0] + found[1]
                marked[nxt[clean]] = True
                stats.marks += 1
    return marked[:size]


def bmmaxconv_via_upperbound(a, b, oracle: UpperBoundOracle = direct_oracle, stats: ChainStats | None = None) -> MonotoneSeq:
    """A (max,+) B for finite non-negative non-decreasing A, B, using only UpperBound decisions.

    Per-index bounds lo <= (A + B)[k] <= hi are halved each round; the guess is
    their midpoint, and both bounds are propagated monotonically so the guess
    stays non-decreasing.  Each round asks, block pair by block pair, which
    guesses are too small.
    """
    a, b = _arr(a), _arr(b)
    if a.size == 0 or b.size == 0:
        raise ValueError("sequences must be non-empty")
    if a.min() < 0 or b.min() < 0 or np.any(np.diff(a) < 0) or np.any(np.diff(b) < 0):
        raise ValueError("expected non-negative non-decreasing sequences")
    stats = stats if stats is not None else ChainStats()
    size = a.size + b.size - 1
    # Block corners give free bounds: the first and last pair of a block pair are
    # genuine sums, and no sum inside it exceeds the last one.
    lo = np.zeros(size, dtype=np.int64)
    hi = np.zeros(size, dtype=np.int64)
    delta = int(max(a.max(), b.max()))
    for ia0, ia1 in _blocks(a, delta):
        for jb0, jb1 in _blocks(b, delta):
            low, up = int(a[ia0] + b[jb0]), int(a[ia1] + b[jb1])
            lo[ia0 + jb0] = max(lo[ia0 + jb0], low)
            lo[ia1 + jb1] = max(lo[ia1 + jb1], up)
            np.maximum(hi[ia0 + jb0 : ia1 + jb1 + 1], up, out=hi[ia0 + jb0 : ia1 + jb1 + 1])
    lo = np.maximum.accumulate(lo)
    hi = np.minimum.accumulate(hi[::-1])[::-1]
    while np.any(lo < hi):
        stats.rounds += 1
        guess = (lo + hi) // 2
        low = _violations(a, b, guess, oracle, stats)
        lo = np.maximum.accumulate(np.where(low, guess + 1, lo))
        hi = np.minimum.accumulate(np.where(low, hi, guess)[::-1])[::-1]
    return MonotoneSeq(lo, 0)


def solve_bmmaxconv_via_knapsack(
    a,
    b,
    backend: str | KnapsackDecider = "unbounded",
    config: KernelConfig | None = None,
    stats: ChainStats | None = None,
) -> MonotoneSeq:
    """A (max,+) B with every UpperBound decision answered by a knapsack backend."""
    decide = knapsack_decider(backend, config) if isinstance(backend, str) else backend
    return bmmaxconv_via_upperbound(a, b, upperbound_oracle_via_knapsack(decide), stats)


__all__ = [
    "BACKENDS",
    "ChainStats",
    "bmmaxconv_via_upperbound",
    "direct_oracle",
    "exact_via_weak_approx",
    "find_violation",
    "is_superadditive",
    "knapsack_decider",
    "solve_bmmaxconv_via_knapsack",
    "superadditivity_to_knapsack",
    "unbounded_to_zeroone",
    "upperbound_holds",
    "upperbound_oracle_via_knapsack",
    "upperbound_to_superadditivity",
    "zeroone_origin",
]

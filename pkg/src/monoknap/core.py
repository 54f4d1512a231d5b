"""Domain types shared by every solver.

Profiles and convolution operands are monotone integer sequences that may start
with a run of minus infinity.  They are stored as int64 arrays in which minus
infinity is encoded by ``NEG``; the public API hands that encoding back as the
``NEG_INF`` singleton so that callers never see a magic number.  Finite values
are kept inside ``[-VALUE_LIMIT, VALUE_LIMIT]`` so that the sum of two encoded
entries never wraps around, and anything below ``NEG_FLOOR`` after an addition
is snapped back to ``NEG`` (saturating addition).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

VALUE_LIMIT = 1 << 60
NEG = -(1 << 62)
NEG_FLOOR = -(1 << 61)

UNBOUNDED = "unbounded"
ZERO_ONE = "zero-one"
MODES = (UNBOUNDED, ZERO_ONE)


class InvalidInstanceError(ValueError):
    """Raised for items or capacities outside the model (weight 0, negative profit, overflow)."""


class WindowError(IndexError):
    """Raised when a sequence is read outside its stored window."""


class ReconstructionError(RuntimeError):
    """Raised when a recorded witness does not certify the value it is supposed to."""


@functools.total_ordering
class _NegInf:
    """Minus infinity: below every integer and absorbing under addition."""

    _instance: _NegInf | None = None

    def __new__(cls) -> _NegInf:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEG_INF"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, np.integer)):
            return True
        return NotImplemented

    def __hash__(self) -> int:
        return hash("NEG_INF")

    def __add__(self, other: object) -> _NegInf:
        if other is self or isinstance(other, (int, np.integer)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __float__(self) -> float:
        return float("-inf")

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


def saturate(values: np.ndarray) -> np.ndarray:
    """Snap every entry below ``NEG_FLOOR`` to ``NEG`` in place and return the array."""
    values[values < NEG_FLOOR] = NEG
    return values


def encode(value) -> int:
    if value is NEG_INF:
        return NEG
    if isinstance(value, float) and value == float("-inf"):
        return NEG
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"sequence entries must be integers or NEG_INF, got {value!r}")
    value = int(value)
    if abs(value) > VALUE_LIMIT:
        raise OverflowError(f"entry {value} exceeds the supported magnitude 2^60")
    return value


def decode(value: int):
    return NEG_INF if value <= NEG_FLOOR else int(value)


@dataclass(frozen=True)
class Item:
    profit: int
    weight: int

    def __post_init__(self) -> None:
        if self.weight < 1:
            raise InvalidInstanceError(f"item weight must be at least 1, got {self.weight}")
        if self.profit < 0:
            raise InvalidInstanceError(f"item profit must be non-negative, got {self.profit}")


@dataclass(frozen=True)
class KnapsackInstance:
    """Items with a capacity; ``mode`` selects unbounded multiplicities or 0-1 choices."""

    items: tuple[Item, ...]
    capacity: int
    mode: str = UNBOUNDED

    def __post_init__(self) -> None:
        items = tuple(it if isinstance(it, Item) else Item(int(it[0]), int(it[1])) for it in self.items)
        object.__setattr__(self, "items", items)
        if self.mode not in MODES:
            raise InvalidInstanceError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.capacity < 0:
            raise InvalidInstanceError(f"capacity must be non-negative, got {self.capacity}")
        # Every profile entry is at most p_max * W (unbounded) or sum(p) (0-1), and
        # intermediate sums may double that, so keep everything far below 2^60.
        p_max = max((it.profit for it in items), default=0)
        w_max = max((it.weight for it in items), default=0)
        scale = max(self.capacity, 1) * max(len(items), 1)
        if (p_max + w_max) * scale >= VALUE_LIMIT >> 4:
            raise InvalidInstanceError("profits, weights and capacity are too large for exact 64-bit arithmetic")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], capacity: int, mode: str = UNBOUNDED) -> KnapsackInstance:
        """Build an instance from ``(profit, weight)`` pairs."""
        return cls(tuple(Item(int(p), int(w)) for p, w in pairs), int(capacity), mode)

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def profits(self) -> np.ndarray:
        return np.array([it.profit for it in self.items], dtype=np.int64)

    @property
    def weights(self) -> np.ndarray:
        return np.array([it.weight for it in self.items], dtype=np.int64)

    def pairs(self) -> list[tuple[int, int]]:
        return [(it.profit, it.weight) for it in self.items]

    def with_capacity(self, capacity: int) -> KnapsackInstance:
        return KnapsackInstance(self.items, capacity, self.mode)


@dataclass(frozen=True)
class InstanceStats:
    w_max: int
    p_max: int
    w_min: int
    p_min: int
    delta: int
    greedy_value: int
    greedy_item_index: int | None


def better_ratio(p1: int, w1: int, p2: int, w2: int) -> bool:
    """True if p1/w1 > p2/w2, or the ratios tie and the first item is more profitable."""
    lhs, rhs = p1 * w2, p2 * w1
    return lhs > rhs or (lhs == rhs and p1 > p2)


def max_ratio_index(inst: KnapsackInstance, candidates: Iterable[int] | None = None) -> int | None:
    best = None
    for i in range(inst.n) if candidates is None else candidates:
        it = inst.items[i]
        if best is None or better_ratio(it.profit, it.weight, inst.items[best].profit, inst.items[best].weight):
            best = i
    return best


def instance_stats(inst: KnapsackInstance) -> InstanceStats:
    """Extremal profits and weights, Delta = p_max + w_max, and the greedy value P0.

    The greedy item is the best profit-to-weight ratio among items that fit, and
    P0 = floor(W / w_i*) * p_i*, which is within a factor 2 of OPT.
    """
    if inst.n == 0:
        return InstanceStats(0, 0, 0, 0, 0, 0, None)
    profits = [it.profit for it in inst.items]
    weights = [it.weight for it in inst.items]
    fitting = [i for i in range(inst.n) if weights[i] <= inst.capacity]
    best = max_ratio_index(inst, fitting) if fitting else None
    greedy = 0 if best is None else (inst.capacity // weights[best]) * profits[best]
    positive = [p for p in profits if p > 0]
    return InstanceStats(
        w_max=max(weights),
        p_max=max(profits),
        w_min=min(weights),
        p_min=min(positive) if positive else 0,
        delta=max(profits) + max(weights),
        greedy_value=greedy,
        greedy_item_index=best,
    )


def normalize_instance(inst: KnapsackInstance) -> KnapsackInstance:
    """Keep only the most profitable item per weight (unbounded mode); identity for 0-1."""
    return normalized_with_index(inst)[0]


def normalized_with_index(inst: KnapsackInstance) -> tuple[KnapsackInstance, list[int]]:
    """Like :func:`normalize_instance`, also returning the original index of each kept item."""
    if inst.mode == ZERO_ONE:
        return inst, list(range(inst.n))
    best: dict[int, int] = {}
    for i, it in enumerate(inst.items):
        j = best.get(it.weight)
        if j is None or it.profit > inst.items[j].profit:
            best[it.weight] = i
    keep = sorted(best.values())
    return KnapsackInstance(tuple(inst.items[i] for i in keep), inst.capacity, inst.mode), keep


@dataclass(frozen=True)
class Solution:
    """Item multiplicities keyed by item index."""

    counts: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for idx, c in sorted(self.counts.items()):
            if c < 0:
                raise ValueError(f"negative multiplicity for item {idx}")
            if c:
                clean[int(idx)] = int(c)
        object.__setattr__(self, "counts", clean)

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> Solution:
        counts: dict[int, int] = {}
        for i in indices:
            counts[i] = counts.get(i, 0) + 1
        return cls(counts)

    def __add__(self, other: Solution) -> Solution:
        counts = dict(self.counts)
        for i, c in other.counts.items():
            counts[i] = counts.get(i, 0) + c
        return Solution(counts)

    def __len__(self) -> int:
        return len(self.counts)

    def remap(self, index_map: Sequence[int]) -> Solution:
        """Translate indices through ``index_map`` (new index -> original index)."""
        counts: dict[int, int] = {}
        for i, c in self.counts.items():
            j = index_map[i]
            counts[j] = counts.get(j, 0) + c
        return Solution(counts)

    @property
    def cardinality(self) -> int:
        return sum(self.counts.values())

    def profit(self, inst: KnapsackInstance) -> int:
        return sum(c * inst.items[i].profit for i, c in self.counts.items())

    def weight(self, inst: KnapsackInstance) -> int:
        return sum(c * inst.items[i].weight for i, c in self.counts.items())

    def is_feasible(self, inst: KnapsackInstance) -> bool:
        if any(i < 0 or i >= inst.n for i in self.counts):
            return False
        if inst.mode == ZERO_ONE and any(c != 1 for c in self.counts.values()):
            return False
        return self.weight(inst) <= inst.capacity

    def as_pairs(self) -> list[list[int]]:
        return [[i, c] for i, c in self.counts.items()]


class MonotoneSeq:
    """Non-decreasing integer sequence stored over the window ``[base, base + len)``.

    Entries may be ``NEG_INF``; they have to form a prefix since the sequence is
    monotone.  Instances are immutable.
    """

    __slots__ = ("base", "values")

    def __init__(self, values, base: int = 0, *, check: bool = True) -> None:
        if isinstance(values, np.ndarray) and values.dtype == np.int64:
            arr = values.copy() if (check or values.flags.writeable) else values
        else:
            arr = np.array([encode(v) for v in values], dtype=np.int64)
        if check:
            if arr.size and (arr.max() > VALUE_LIMIT or arr[arr > NEG_FLOOR].min(initial=0) < -VALUE_LIMIT):
                raise OverflowError("sequence entry exceeds the supported magnitude 2^60")
            saturate(arr)
            if arr.size > 1 and np.any(arr[1:] < arr[:-1]):
                raise ValueError("sequence is not monotone non-decreasing")
        arr.setflags(write=False)
        object.__setattr__(self, "base", int(base))
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MonotoneSeq is immutable")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def stop(self) -> int:
        """One past the last stored index."""
        return self.base + len(self)

    @property
    def window(self) -> range:
        return range(self.base, self.stop)

    @property
    def finite(self) -> np.ndarray:
        return self.values > NEG_FLOOR

    def __getitem__(self, j: int):
        if not self.base <= j < self.stop:
            raise WindowError(f"index {j} outside window [{self.base}, {self.stop - 1}]")
        return decode(self.values[j - self.base])

    def __iter__(self) -> Iterator:
        return (decode(v) for v in self.values)

    def to_list(self) -> list:
        return list(self)

    def restrict(self, window: range) -> MonotoneSeq:
        """Sub-sequence over ``window``, which must lie inside the stored window."""
        if len(window) and (window.start < self.base or window.stop > self.stop):
            raise WindowError(f"window [{window.start}, {window.stop - 1}] not inside [{self.base}, {self.stop - 1}]")
        lo = window.start - self.base
        return MonotoneSeq(self.values[lo : lo + len(window)], window.start, check=False)

    def max_finite(self) -> int | None:
        fin = self.values[self.finite]
        return int(fin.max()) if fin.size else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonotoneSeq):
            return NotImplemented
        return self.base == other.base and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.base, self.values.tobytes()))

    def __repr__(self) -> str:
        return f"MonotoneSeq(base={self.base}, values={self.to_list()})"


class StepList:
    """Dominance-free steps ``(weight, profit)``, strictly increasing in both coordinates.

    Represents the step function ``j -> max{p : (w, p) in steps, w <= j}``, which is
    ``NEG_INF`` before the first step.
    """

    __slots__ = ("weights", "profits")

    def __init__(self, steps=(), *, weights: np.ndarray | None = None, profits: np.ndarray | None = None) -> None:
        if weights is None:
            pairs = list(steps)
            w = np.array([int(s[0]) for s in pairs], dtype=np.int64)
            p = np.array([int(s[1]) for s in pairs], dtype=np.int64)
        else:
            w = np.asarray(weights, dtype=np.int64).copy()
            p = np.asarray(profits, dtype=np.int64).copy()
        if w.shape != p.shape or w.ndim != 1:
            raise ValueError("weights and profits must be 1-d arrays of equal length")
        if w.size > 1 and (np.any(np.diff(w) <= 0) or np.any(np.diff(p) <= 0)):
            raise ValueError("steps must be strictly increasing in weight and in profit")
        w.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "profits", p)

    def __setattr__(self, name, value):
        raise AttributeError("StepList is immutable")

    @property
    def steps(self) -> list[tuple[int, int]]:
        return list(zip(self.weights.tolist(), self.profits.tolist()))

    def __len__(self) -> int:
        return int(self.weights.size)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.steps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepList):
            return NotImplemented
        return np.array_equal(self.weights, other.weights) and np.array_equal(self.profits, other.profits)

    def __hash__(self) -> int:
        return hash((self.weights.tobytes(), self.profits.tobytes()))

    def __repr__(self) -> str:
        return f"StepList({self.steps})"

    def index_at(self, j: int) -> int:
        """Position of the step that defines the value at ``j``, or -1 if there is none."""
        return int(np.searchsorted(self.weights, j, side="right")) - 1

    def value_at(self, j: int):
        pos = self.index_at(j)
        return NEG_INF if pos < 0 else int(self.profits[pos])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Encoded values at an array of weights (``NEG`` before the first step)."""
        pos = np.searchsorted(self.weights, points, side="right") - 1
        out = np.full(np.shape(points), NEG, dtype=np.int64)
        ok = pos >= 0
        out[ok] = self.profits[pos[ok]]
        return out

    def truncate(self, max_weight: int) -> StepList:
        keep = int(np.searchsorted(self.weights, max_weight, side="right"))
        return StepList(weights=self.weights[:keep], profits=self.profits[:keep])


def dominance_filter(weights: np.ndarray, profits: np.ndarray) -> np.ndarray:
    """Indices (sorted by weight) of the pairs that survive dominance removal.

    A pair survives iff every lighter-or-equal pair has strictly smaller profit;
    among equal weights the most profitable one is kept, among equal profits the
    lightest one.
    """
    weights = np.asarray(weights, dtype=np.int64)
    profits = np.asarray(profits, dtype=np.int64)
    if weights.size == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.lexsort((-profits, weights))
    p_sorted = profits[order]
    best_before = np.maximum.accumulate(p_sorted)
    keep = np.empty(order.size, dtype=bool)
    keep[0] = True
    keep[1:] = p_sorted[1:] > best_before[:-1]
    return order[keep]


def remove_dominated(pairs) -> StepList:
    """Sorted dominance-free step list from arbitrary ``(weight, profit)`` pairs."""
    pairs = list(pairs)
    w = np.array([int(x[0]) for x in pairs], dtype=np.int64)
    p = np.array([int(x[1]) for x in pairs], dtype=np.int64)
    keep = dominance_filter(w, p)
    return StepList(weights=w[keep], profits=p[keep])


def seq_from_steps(steps: StepList, window: range) -> MonotoneSeq:
    """Dense evaluation of a step function over ``window``."""
    points = np.arange(window.start, window.stop, dtype=np.int64)
    return MonotoneSeq(steps.evaluate(points), window.start, check=False)


def steps_from_seq(seq: MonotoneSeq) -> StepList:
    """Minimal step list whose evaluation over ``seq.window`` reproduces ``seq``."""
    vals = seq.values
    fin = np.flatnonzero(vals > NEG_FLOOR)
    if fin.size == 0:
        return StepList()
    first = fin[0]
    rises = np.flatnonzero(vals[first + 1 :] > vals[first:-1]) + first + 1
    pos = np.concatenate(([first], rises))
    return StepList(weights=pos + seq.base, profits=vals[pos])

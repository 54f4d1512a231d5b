"""Approximation schemes for Unbounded Knapsack.

Both schemes preprocess the instance so that every item is expensive (profit
above ``eps * OPT``) and heavy (weight above ``eps * W``), which bounds the
number of items in any solution by ``1/eps``.  Then the single-item profile is
squared ``ceil(log 1/eps)`` times with approximate (max,+)-convolutions on step
lists:

* the strong scheme rounds only profits, keeps weights exact and so never
  exceeds the budget;
* the weak scheme rounds weights and profits onto a grid per dyadic scale and
  hands dense bounded monotone arrays to the (max,+) kernel; the answer is read
  at a slightly larger budget ``ell``.

All grid arithmetic is exact: epsilon is a :class:`fractions.Fraction`.  Grid
units are ``max(1, floor(eps * x))`` for a scale ``x``; the unit never exceeds
``eps * x``, so the error bounds hold, and scales with ``eps * x < 1`` are
computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    NEG,
    NEG_FLOOR,
    UNBOUNDED,
    Item,
    KnapsackInstance,
    MonotoneSeq,
    ReconstructionError,
    Solution,
    StepList,
    dominance_filter,
    instance_stats,
    max_ratio_index,
)
from .maxplus import KernelConfig, conv_values


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string, ``"p/q"`` string or float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def ceil_log2(x: Fraction) -> int:
    """Smallest L >= 0 with 2^L >= x."""
    if x <= 1:
        return 0
    m = -(-x.numerator // x.denominator)
    return (m - 1).bit_length()


def _floor_mul(eps: Fraction, x: int) -> int:
    return (eps.numerator * x) // eps.denominator


def grid_unit(eps: Fraction, scale: int) -> int:
    """Rounding unit for a dyadic scale: max(1, floor(eps * scale))."""
    return max(1, _floor_mul(eps, scale))


@dataclass(frozen=True)
class ApproxParams:
    """User epsilon plus the calibration constants.

    The schemes run at ``inner = epsilon / calibration_divisor`` so that their
    hidden constant factors still land within the clean ``(1 - eps)`` and
    ``(1 + eps)`` bounds; ``internal_eps`` is the per-convolution parameter
    ``inner / ceil(log2(1/inner))``.
    """

    epsilon: Fraction
    calibration_divisor: int = 64
    ell_factor: int = 16

    def __post_init__(self) -> None:
        eps = as_fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
        if self.calibration_divisor < 1 or self.ell_factor < 0:
            raise ValueError("calibration constants must be positive")

    @property
    def inner(self) -> Fraction:
        return self.epsilon / self.calibration_divisor

    @property
    def rounds(self) -> int:
        return max(1, ceil_log2(1 / self.inner))

    @property
    def internal_eps(self) -> Fraction:
        return self.inner / self.rounds

    def ell(self, capacity: int) -> int:
        """Read-off budget floor((1 + ell_factor * inner) * W) of the weak scheme."""
        scale = 1 + self.ell_factor * self.inner
        return (scale.numerator * capacity) // scale.denominator


# ---------------------------------------------------------------------------
# Preprocessing


@dataclass(frozen=True)
class PreprocessReceipt:
    """How the preprocessed items relate to the original ones.

    ``origin[k] = (i, r)`` says item k of the new instance is r copies of
    original item i.
    """

    origin: tuple[tuple[int, int], ...]
    threshold: Fraction
    replaced_cheap: tuple[int, int] | None = None
    replaced_light: tuple[int, int] | None = None

    def expand(self, sol: Solution) -> Solution:
        counts: dict[int, int] = {}
        for k, c in sol.counts.items():
            i, r = self.origin[k]
            counts[i] = counts.get(i, 0) + c * r
        return Solution(counts)


def _identity_receipt(inst: KnapsackInstance) -> PreprocessReceipt:
    return PreprocessReceipt(tuple((i, 1) for i in range(inst.n)), Fraction(0))


def _composite(inst: KnapsackInstance, keep: list[int], star: int | None, r: int, origin):
    items = [inst.items[i] for i in keep]
    new_origin = [origin[i] for i in keep]
    if star is not None:
        it = inst.items[star]
        items.append(Item(r * it.profit, r * it.weight))
        new_origin.append((origin[star][0], origin[star][1] * r))
    return KnapsackInstance(tuple(items), inst.capacity, inst.mode), tuple(new_origin)


def preprocess_profits(inst: KnapsackInstance, eps) -> tuple[KnapsackInstance, PreprocessReceipt]:
    """Replace all items of profit <= T = 2 * eps * P0 by one bundle of the best-ratio cheap item.

    The bundle has r = ceil(T / p) copies, so every remaining profit exceeds
    ``eps * OPT``, and no profile entry drops by more than ``4 * eps * OPT``.
    """
    eps = as_fraction(eps)
    if inst.mode != UNBOUNDED:
        raise ValueError("expected an unbounded-mode instance")
    p0 = instance_stats(inst).greedy_value
    threshold = 2 * eps * p0
    cheap = [i for i, it in enumerate(inst.items) if it.profit <= threshold]
    expensive = [i for i, it in enumerate(inst.items) if it.profit > threshold]
    star = max_ratio_index(inst, cheap) if cheap else None
    origin = tuple((i, 1) for i in range(inst.n))
    if star is None or inst.items[star].profit == 0:
        new, new_origin = _composite(inst, expensive, None, 0, origin)
        return new, PreprocessReceipt(new_origin, threshold)
    p = inst.items[star].profit
    r = max(1, -(-threshold.numerator // (threshold.denominator * p)))
    new, new_origin = _composite(inst, expensive, star, r, origin)
    return new, PreprocessReceipt(new_origin, threshold, replaced_cheap=(star, r))


def replace_light_items(
    inst: KnapsackInstance, eps, origin: tuple[tuple[int, int], ...] | None = None
) -> tuple[KnapsackInstance, tuple[tuple[int, int], ...], tuple[int, int] | None]:
    """Replace items lighter than eps * W by ceil(eps * W / w) copies of the best-ratio light item."""
    eps = as_fraction(eps)
    origin = origin if origin is not None else tuple((i, 1) for i in range(inst.n))
    bound = eps * inst.capacity
    light = [i for i, it in enumerate(inst.items) if it.weight < bound]
    heavy = [i for i, it in enumerate(inst.items) if it.weight >= bound]
    if not light:
        return inst, origin, None
    star = max_ratio_index(inst, light)
    w = inst.items[star].weight
    r = max(1, -(-bound.numerator // (bound.denominator * w)))
    new, new_origin = _composite(inst, heavy, star, r, origin)
    return new, new_origin, (star, r)


def preprocess_profits_weights(inst: KnapsackInstance, eps) -> tuple[KnapsackInstance, PreprocessReceipt]:
    """Profit preprocessing followed by light-item replacement.

    Afterwards p_min > eps * OPT and w_min >= eps * W, profile entries drop by at
    most ``8 * eps * OPT``, and the receipt maps every new solution to an
    original one with identical profit and weight.
    """
    first, receipt = preprocess_profits(inst, eps)
    second, origin, light = replace_light_items(first, eps, receipt.origin)
    return second, PreprocessReceipt(origin, receipt.threshold, receipt.replaced_cheap, light)


# ---------------------------------------------------------------------------
# Approximate convolutions


@dataclass
class ConvResult:
    """Output steps with, per step, the indices of the input steps it came from."""

    steps: StepList
    src_a: np.ndarray
    src_b: np.ndarray


def _profit_range(a: StepList, b: StepList) -> tuple[int, int] | None:
    prof = np.concatenate((a.profits, b.profits))
    pos = prof[prof > 0]
    if pos.size == 0:
        return None
    return int(pos.min()), int(pos.max())


def _finish(w: np.ndarray, p: np.ndarray, sa: np.ndarray, sb: np.ndarray, cap: int | None) -> ConvResult:
    if cap is not None:
        ok = w <= cap
        w, p, sa, sb = w[ok], p[ok], sa[ok], sb[ok]
    keep = dominance_filter(w, p)
    return ConvResult(StepList(weights=w[keep], profits=p[keep]), sa[keep], sb[keep])


def _exact_pairs(a: StepList, b: StepList, cap: int | None) -> ConvResult:
    ia, ib = np.meshgrid(np.arange(len(a)), np.arange(len(b)), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    return _finish(a.weights[ia] + b.weights[ib], a.profits[ia] + b.profits[ib], ia, ib, cap)


def _min_weight_per_level(steps: StepList, limit: int, unit: int) -> tuple[np.ndarray, np.ndarray]:
    """For each rounded profit level, the lightest step (steps are sorted, so the first)."""
    upto = int(np.searchsorted(steps.profits, limit, side="right"))
    q = steps.profits[:upto] // unit
    first = np.flatnonzero(np.concatenate(([True], q[1:] != q[:-1]))) if upto else np.zeros(0, dtype=np.int64)
    return q[first], first


def strong_conv(a: StepList, b: StepList, eps, cap: int | None = None) -> ConvResult:
    """Pointwise approximate (max,+)-convolution with exact weights and exact profits.

    For each dyadic profit scale p*, profits up to p* are bucketed by
    ``floor(p / u)`` with ``u = max(1, floor(eps * p*))``, the lightest step per
    bucket is kept, and a (min,+) pass over bucket sums keeps the lightest pair
    per summed bucket.  Every output step is a genuine pair of input steps, so
    outputs never exceed the true convolution, and each true step (w, p) is
    matched by an output of weight <= w and profit >= p - 2u.
    """
    eps = as_fraction(eps)
    if len(a) == 0 or len(b) == 0:
        return ConvResult(StepList(), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    rng = _profit_range(a, b)
    if rng is None or _floor_mul(eps, 2 * rng[1]) == 0:
        return _exact_pairs(a, b, cap)
    p_min, p_max = rng
    ws, ps, sas, sbs = [], [], [], []
    scale = p_min
    while True:
        unit = grid_unit(eps, scale)
        qa, ia = _min_weight_per_level(a, scale, unit)
        qb, ib = _min_weight_per_level(b, scale, unit)
        if qa.size and qb.size:
            ga, gb = np.meshgrid(np.arange(qa.size), np.arange(qb.size), indexing="ij")
            ga, gb = ga.ravel(), gb.ravel()
            qs = qa[ga] + qb[gb]
            pa, pb = ia[ga], ib[gb]
            w = a.weights[pa] + b.weights[pb]
            p = a.profits[pa] + b.profits[pb]
            order = np.lexsort((-p, w, qs))
            qs_sorted = qs[order]
            lead = order[np.concatenate(([True], qs_sorted[1:] != qs_sorted[:-1]))]
            ws.append(w[lead])
            ps.append(p[lead])
            sas.append(pa[lead])
            sbs.append(pb[lead])
        if scale >= 2 * p_max:
            break
        scale *= 2
    return _finish(np.concatenate(ws), np.concatenate(ps), np.concatenate(sas), np.concatenate(sbs), cap)


def approx_maxconv_strong(a: StepList, b: StepList, eps) -> StepList:
    """Pointwise (1 + O(eps))-approximation of a (max,+) b from below."""
    return strong_conv(a, b, eps).steps


def _round_steps(steps: StepList, w_star: int, p_star: int, uw: int, up: int):
    """Steps with w <= w*, p <= p*, rounded to (ceil(w/uw), floor(p/up)), dominance-free.

    Returns rounded weights, rounded profits and the source step indices.
    """
    ok = np.flatnonzero((steps.weights <= w_star) & (steps.profits <= p_star))
    rw = -(-steps.weights[ok] // uw)
    rp = steps.profits[ok] // up
    keep = dominance_filter(rw, rp)
    return rw[keep], rp[keep], ok[keep]


def _dense(rw: np.ndarray, rp: np.ndarray, size: int) -> np.ndarray:
    out = np.full(size, NEG, dtype=np.int64)
    out[rw] = rp
    return np.maximum.accumulate(out)


@dataclass
class _Cell:
    uw: int
    up: int
    aw: np.ndarray
    ap: np.ndarray
    asrc: np.ndarray
    bw: np.ndarray
    bp: np.ndarray
    bsrc: np.ndarray


def _cell_witness(cell: _Cell, x: int, v: int) -> tuple[int, int]:
    """Input steps (indices into a and b) whose rounded sum reaches v within rounded weight x."""
    room = x - cell.aw
    ok = room >= 0
    pos = np.searchsorted(cell.bw, room[ok], side="right") - 1
    valid = pos >= 0
    cand = np.flatnonzero(ok)[valid]
    pos = pos[valid]
    hit = np.flatnonzero(cell.ap[cand] + cell.bp[pos] >= v)
    if hit.size == 0:
        raise ReconstructionError("no witness inside the rounding cell")
    t = hit[0]
    return int(cell.asrc[cand[t]]), int(cell.bsrc[pos[t]])


def weak_conv(
    a: StepList,
    b: StepList,
    eps,
    cap: int | None = None,
    kernel: KernelConfig | None = None,
    *,
    witnesses: bool = True,
) -> ConvResult:
    """Weak approximate (max,+)-convolution on a grid per dyadic (p*, w*) cell.

    Each cell keeps the steps with w <= w* and p <= p*, rounds them to
    ``(ceil(w / u_w), floor(p / u_p))``, convolves the resulting dense bounded
    monotone arrays with the kernel, and scales back.  Rounding never moves a
    weight down or a profit up, so every output step is dominated by a true one.
    The union over cells is made dominance-free and cut at ``cap``.  Without
    ``witnesses`` the source arrays are filled with -1.
    """
    eps = as_fraction(eps)
    empty = ConvResult(StepList(), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    if len(a) == 0 or len(b) == 0:
        return empty
    prange = _profit_range(a, b)
    wts = np.concatenate((a.weights, b.weights))
    wpos = wts[wts > 0]
    if prange is None or wpos.size == 0:
        return _exact_pairs(a, b, cap)
    p_min, p_max = prange
    w_min = int(wpos.min())
    top_w = int(a.weights[-1] + b.weights[-1])
    if cap is not None:
        top_w = min(top_w, cap)
    if _floor_mul(eps, 2 * p_max) == 0 and _floor_mul(eps, 2 * max(top_w, w_min)) == 0:
        # Every grid unit is 1: all cells are exact and the largest one covers the rest.
        p_scales, w_scales = [2 * p_max], [2 * max(top_w, w_min)]
    else:
        p_scales = [p_min << i for i in range(ceil_log2(Fraction(2 * p_max, p_min)) + 1)]
        w_scales = []
        w_star = w_min
        while True:
            w_scales.append(w_star)
            if w_star >= 2 * top_w:
                break
            w_star *= 2
    cells: list[_Cell] = []
    out_w, out_p, out_cell, out_x, out_v = [], [], [], [], []
    for p_star in p_scales:
        up = grid_unit(eps, p_star)
        for w_star in w_scales:
            uw = grid_unit(eps, w_star)
            aw, ap, asrc = _round_steps(a, w_star, p_star, uw, up)
            bw, bp, bsrc = _round_steps(b, w_star, p_star, uw, up)
            if aw.size == 0 or bw.size == 0:
                continue
            c = conv_values(_dense(aw, ap, int(aw[-1]) + 1), _dense(bw, bp, int(bw[-1]) + 1), kernel)
            fin = np.flatnonzero(c > NEG_FLOOR)
            rises = fin[np.concatenate(([True], c[fin[1:]] > c[fin[:-1]]))] if fin.size else fin
            if rises.size == 0:
                continue
            cells.append(_Cell(uw, up, aw, ap, asrc, bw, bp, bsrc))
            out_w.append(rises * uw)
            out_p.append(c[rises] * up)
            out_cell.append(np.full(rises.size, len(cells) - 1))
            out_x.append(rises)
            out_v.append(c[rises])
    if not cells:
        return empty
    w = np.concatenate(out_w)
    p = np.concatenate(out_p)
    cell_id = np.concatenate(out_cell)
    xs, vs = np.concatenate(out_x), np.concatenate(out_v)
    if cap is not None:
        ok = w <= cap
        w, p, cell_id, xs, vs = w[ok], p[ok], cell_id[ok], xs[ok], vs[ok]
    keep = dominance_filter(w, p)
    src_a = np.full(keep.size, -1, dtype=np.int64)
    src_b = np.full(keep.size, -1, dtype=np.int64)
    for t, k in enumerate(keep if witnesses else ()):
        src_a[t], src_b[t] = _cell_witness(cells[cell_id[k]], int(xs[k]), int(vs[k]))
    return ConvResult(StepList(weights=w[keep], profits=p[keep]), src_a, src_b)


def approx_maxconv_weak(a: StepList, b: StepList, eps, kernel: KernelConfig | None = None) -> StepList:
    """Weak (1 + O(eps))-approximation of a (max,+) b."""
    return weak_conv(a, b, eps, kernel=kernel).steps


# ---------------------------------------------------------------------------
# Approximation predicates


def _values_on(x, n: int) -> np.ndarray:
    if isinstance(x, StepList):
        return x.evaluate(np.arange(n + 1))
    if isinstance(x, MonotoneSeq):
        return np.array([NEG if v <= NEG_FLOOR else v for v in x.values[: n + 1]], dtype=np.int64)
    return np.array([NEG if not isinstance(v, (int, np.integer)) else int(v) for v in list(x)[: n + 1]], dtype=np.int64)


def check_strong_approx(a, b, eps, n: int | None = None) -> bool:
    """B[i] / (1 + eps) <= A[i] <= B[i] at every index i in [0, n].

    ``a`` and ``b`` may be step lists, monotone sequences or plain value lists
    (``n`` defaults to the last index of a list).
    """
    eps = as_fraction(eps)
    if n is None:
        if isinstance(b, StepList):
            raise ValueError("n is required for step lists")
        n = len(b) - 1
    av, bv = _values_on(a, n), _values_on(b, n)
    if av.size != n + 1 or bv.size != n + 1:
        return False
    for x, y in zip(av.tolist(), bv.tolist()):
        if y <= NEG_FLOOR:
            if x > NEG_FLOOR:
                return False
            continue
        if x <= NEG_FLOOR or x > y:
            return False
        if y * eps.denominator > (eps.denominator + eps.numerator) * x:
            return False
    return True


def check_weak_approx(a: StepList, b: StepList, eps, domain: int | None = None) -> bool:
    """A weakly (1 + eps)-approximates B.

    (i) every step (j, B[j]) with j <= ``domain`` has some j' <= (1 + eps) j with
    A[j'] >= B[j] / (1 + eps);  (ii) every step (j', A[j']) has some j <= j' with
    B[j] >= A[j'].
    """
    eps = as_fraction(eps)
    num, den = eps.numerator, eps.denominator
    for j, p in b.steps:
        if domain is not None and j > domain:
            break
        reach = ((den + num) * j) // den
        got = a.value_at(reach)
        if not isinstance(got, int) or p * den > (den + num) * got:
            return False
    for j, p in a.steps:
        got = b.value_at(j)
        if not isinstance(got, int) or got < p:
            return False
    return True


# ---------------------------------------------------------------------------
# Schemes


@dataclass
class ApproxRun:
    """Everything needed to rebuild a solution after an approximation run."""

    instance: KnapsackInstance
    params: ApproxParams
    reduced: KnapsackInstance
    receipt: PreprocessReceipt
    budget: int
    base_items: np.ndarray  # step index of S_0 -> item index in ``reduced`` (-1 for the empty set)
    levels: list[StepList] = field(default_factory=list)
    sources: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    value: int = 0
    weak: bool = False
    witnesses: bool = True

    @property
    def output(self) -> StepList:
        return self.levels[-1]


def _base_steps(inst: KnapsackInstance, budget: int) -> tuple[StepList, np.ndarray]:
    w = np.array([0] + [it.weight for it in inst.items], dtype=np.int64)
    p = np.array([0] + [it.profit for it in inst.items], dtype=np.int64)
    ok = np.flatnonzero(w <= budget)
    keep = ok[dominance_filter(w[ok], p[ok])]
    return StepList(weights=w[keep], profits=p[keep]), keep - 1


def _rounds_needed(inst: KnapsackInstance, params: ApproxParams, budget: int) -> int:
    """Squarings needed so that 2^L covers the largest possible item count."""
    weights = [it.weight for it in inst.items if it.weight <= budget]
    if not weights:
        return 0
    most = budget // min(weights)
    return min(params.rounds, ceil_log2(Fraction(max(most, 1))))


def _run(
    inst: KnapsackInstance,
    eps,
    weak: bool,
    kernel: KernelConfig | None,
    params: ApproxParams | None,
    witnesses: bool = True,
) -> ApproxRun:
    if inst.mode != UNBOUNDED:
        raise ValueError("expected an unbounded-mode instance")
    params = params or ApproxParams(as_fraction(eps))
    reduced, receipt = preprocess_profits_weights(inst, params.inner)
    budget = params.ell(inst.capacity) if weak else inst.capacity
    base, base_items = _base_steps(reduced, budget)
    run = ApproxRun(inst, params, reduced, receipt, budget, base_items, [base], weak=weak, witnesses=witnesses)
    if instance_stats(inst).greedy_value == 0:
        return run
    eps_conv = params.internal_eps
    for _ in range(_rounds_needed(reduced, params, budget)):
        cur = run.levels[-1]
        if weak:
            res = weak_conv(cur, cur, eps_conv, budget, kernel, witnesses=witnesses)
        else:
            res = strong_conv(cur, cur, eps_conv, budget)
        run.levels.append(res.steps)
        run.sources.append((res.src_a, res.src_b))
    top = run.levels[-1].value_at(budget)
    run.value = top if isinstance(top, int) else 0
    return run


def fptas_run(inst: KnapsackInstance, eps, params: ApproxParams | None = None) -> ApproxRun:
    """Strong scheme; ``run.value`` is the profit of a solution of weight <= W."""
    return _run(inst, eps, False, None, params)


def weak_fptas_run(
    inst: KnapsackInstance,
    eps,
    kernel: KernelConfig | None = None,
    params: ApproxParams | None = None,
    *,
    witnesses: bool = True,
) -> ApproxRun:
    """Weak scheme; ``run.value`` is read at the augmented budget ``run.budget``."""
    return _run(inst, eps, True, kernel, params, witnesses)


def reconstruct_approx(run: ApproxRun) -> Solution:
    """Back-track the recorded witnesses from the read-off step to single items.

    Indices refer to the original instance.  In the strong scheme the result has
    profit exactly ``run.value``; in the weak scheme profit at least
    ``run.value`` and weight at most ``run.budget``.
    """
    if not run.witnesses:
        raise ReconstructionError("the run did not record witnesses")
    top = run.levels[-1].index_at(run.budget)
    if top < 0:
        return Solution()
    counts = {top: 1}
    for level in range(len(run.sources) - 1, -1, -1):
        src_a, src_b = run.sources[level]
        nxt: dict[int, int] = {}
        for s, z in counts.items():
            for t in (int(src_a[s]), int(src_b[s])):
                nxt[t] = nxt.get(t, 0) + z
        counts = nxt
    chosen: dict[int, int] = {}
    for s, z in counts.items():
        item = int(run.base_items[s])
        if item >= 0:
            chosen[item] = chosen.get(item, 0) + z
    sol = run.receipt.expand(Solution(chosen))
    profit, weight = sol.profit(run.instance), sol.weight(run.instance)
    if weight > run.budget or profit < run.value or (not run.weak and profit != run.value):
        raise ReconstructionError(f"rebuilt solution (p={profit}, w={weight}) does not match the run")
    return sol


def fptas(inst: KnapsackInstance, eps, *, reconstruct: bool = True) -> tuple[int, Solution]:
    """Profit >= (1 - eps) OPT within budget W, and (optionally) a solution attaining it."""
    run = fptas_run(inst, eps)
    return run.value, reconstruct_approx(run) if reconstruct else Solution()


def weak_fptas(
    inst: KnapsackInstance, eps, kernel: KernelConfig | None = None, *, reconstruct: bool = True
) -> tuple[int, Solution]:
    """Profit >= (1 - eps) OPT with weight <= (1 + eps) W, and (optionally) a solution."""
    run = weak_fptas_run(inst, eps, kernel)
    return run.value, reconstruct_approx(run) if reconstruct else Solution()


def exact_profile_squaring(inst: KnapsackInstance, rounds: int) -> StepList:
    """The single-item profile on [0, W] squared ``rounds`` times with exact convolutions."""
    cur, _ = _base_steps(inst, inst.capacity)
    for _ in range(rounds):
        cur = _exact_pairs(cur, cur, inst.capacity).steps
    return cur


__all__ = [
    "ApproxParams",
    "ApproxRun",
    "ConvResult",
    "PreprocessReceipt",
    "approx_maxconv_strong",
    "approx_maxconv_weak",
    "as_fraction",
    "ceil_log2",
    "check_strong_approx",
    "check_weak_approx",
    "exact_profile_squaring",
    "fptas",
    "fptas_run",
    "grid_unit",
    "preprocess_profits",
    "preprocess_profits_weights",
    "reconstruct_approx",
    "replace_light_items",
    "strong_conv",
    "weak_conv",
    "weak_fptas",
    "weak_fptas_run",
]

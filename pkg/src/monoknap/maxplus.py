"""(max,+)-convolution of monotone sequences.

Two kernels are registered.  ``naive`` is the quadratic double loop, vectorised
over sliding windows.  ``plugin`` is the slot for a fast bounded-monotone kernel:
it maps the instance to a (min,+)-convolution of strictly increasing sequences
with entries in ``[0, bound]`` (remove minus infinity, negate, reverse and add a
linear function), hands that to the registered min-plus routine, and maps the
answer back.  The shipped min-plus routine is again quadratic; a subquadratic
one can be installed with :func:`set_plugin_minconv`.

Witnesses are found by the randomized isolation scheme: sample a set S of
indices, perturb A by membership in S, and read the unique maximiser bit by bit
from the parity of perturbed convolutions.  Every candidate is checked against
the convolution, and whatever is still unresolved when the sampling budget runs
out is filled in by a direct scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import NEG, NEG_FLOOR, MonotoneSeq, WindowError, decode, saturate

_CHUNK = 1 << 21
_POS = 1 << 62
_WITNESS_LIMIT = 1 << 56

KERNEL_IDS = ("naive", "plugin")


@dataclass(frozen=True)
class KernelConfig:
    """Kernel choice and witness-sampling parameters.

    A sampling round draws one random set for each of the ``ceil(log n) + 2``
    sampling rates.  ``witness_retry_cap`` bounds the number of rounds before
    unresolved entries fall back to a direct scan; ``None`` runs the full
    schedule of ``sets_per_scale * ceil(log n)`` rounds.
    """

    kernel_id: str = "naive"
    rng_seed: int = 0
    witness_retry_cap: int | None = None
    sets_per_scale: int = 8

    def __post_init__(self) -> None:
        if self.kernel_id not in KERNEL_IDS:
            raise ValueError(f"unknown kernel {self.kernel_id!r}; expected one of {KERNEL_IDS}")
        if self.witness_retry_cap is not None and self.witness_retry_cap < 1:
            raise ValueError("witness_retry_cap must be at least 1")
        if self.sets_per_scale < 1:
            raise ValueError("sets_per_scale must be at least 1")


DEFAULT_CONFIG = KernelConfig()


_SMALL = 1 << 14


def _window_reduce(a: np.ndarray, b: np.ndarray, pad: int, reduce) -> np.ndarray:
    """out[k] = reduce_{i+j=k} a[i] + b[j] with out-of-range terms replaced by ``pad``."""
    if a.size < b.size:
        a, b = b, a
    n, m = a.size, b.size
    if m * (n + m) <= _SMALL:
        # Skewed outer sum: row j holds b[j] + a shifted right by j.
        grid = np.full((m, n + m), pad, dtype=np.int64)
        grid[:, :n] = b[:, None] + a[None, :]
        return reduce(grid.ravel()[: m * (n + m - 1)].reshape(m, n + m - 1), axis=0)
    filler = np.full(m - 1, pad, dtype=np.int64)
    padded = np.concatenate((filler, a, filler))
    windows = sliding_window_view(padded, m)
    b_rev = b[::-1]
    out = np.empty(n + m - 1, dtype=np.int64)
    rows = max(1, _CHUNK // m)
    for start in range(0, out.size, rows):
        block = windows[start : start + rows] + b_rev
        reduce(block, axis=1, out=out[start : start + rows])
    return out


def naive_maxconv_values(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quadratic (max,+)-convolution of encoded int64 arrays."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    return saturate(_window_reduce(a, b, NEG, np.max))


def naive_minconv_values(a: np.ndarray, b: np.ndarray, bound: int | None = None) -> np.ndarray:
    """Quadratic (min,+)-convolution of finite int64 arrays (``bound`` is unused)."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    return _window_reduce(a, b, _POS, np.min)


MinConv = Callable[[np.ndarray, np.ndarray, int], np.ndarray]
_plugin_minconv: MinConv = naive_minconv_values


def set_plugin_minconv(fn: MinConv | None = None) -> None:
    """Install the (min,+) routine behind the ``plugin`` kernel; ``None`` restores the default.

    The routine receives two strictly increasing int64 arrays with entries in
    ``[0, bound]`` and must return their exact (min,+)-convolution.
    """
    global _plugin_minconv
    _plugin_minconv = naive_minconv_values if fn is None else fn


def remove_neg_inf_values(values: np.ndarray, delta: int) -> np.ndarray:
    """Shift finite entries by 2*delta and send minus infinity to 0."""
    values = np.asarray(values, dtype=np.int64)
    return np.where(values > NEG_FLOOR, values + 2 * delta, 0)


def negate_values(values: np.ndarray, delta: int) -> np.ndarray:
    """delta - A, turning a non-decreasing sequence into a non-increasing one."""
    return delta - np.asarray(values, dtype=np.int64)


def reverse_linear_values(values: np.ndarray) -> np.ndarray:
    """A'[i] = A[n - i] + i, turning a non-increasing sequence into an increasing one."""
    values = np.asarray(values, dtype=np.int64)
    return values[::-1] + np.arange(values.size, dtype=np.int64)


def _to_min(values: np.ndarray, delta: int) -> np.ndarray:
    return reverse_linear_values(negate_values(remove_neg_inf_values(values, delta), 3 * delta))


def _from_min(c: np.ndarray, delta: int, n_a: int, n_b: int) -> np.ndarray:
    # Undo reverse+linear: C2[m] = C3[n_a + n_b - m] - (n_a + n_b - m).
    top = n_a + n_b
    m = np.arange(c.size, dtype=np.int64)
    c2 = c[top - m] - (top - m)
    c1 = 6 * delta - c2
    return np.where(c1 <= 3 * delta, NEG, c1 - 4 * delta)


def to_min_increasing(a: MonotoneSeq, delta: int | None = None) -> MonotoneSeq:
    """Strictly increasing sequence with entries in ``[0, 3*delta + n]`` encoding ``a``.

    ``delta`` must bound every finite entry of ``a`` (which must be non-negative);
    it defaults to the largest finite entry.  The transformed sequence lives at
    base 0.
    """
    delta = _default_delta(delta, a)
    return MonotoneSeq(_to_min(a.values, delta), 0)


def from_min_increasing(c: MonotoneSeq, delta: int, len_a: int, len_b: int, base: int = 0) -> MonotoneSeq:
    """Recover ``a (max,+) b`` from the (min,+)-convolution of their transforms."""
    if len(c) != len_a + len_b - 1:
        raise ValueError("min-plus result has the wrong length")
    return MonotoneSeq(_from_min(c.values, delta, len_a - 1, len_b - 1), base)


def _default_delta(delta: int | None, *seqs: MonotoneSeq) -> int:
    finite = [s.max_finite() for s in seqs]
    top = max((f for f in finite if f is not None), default=0)
    if delta is None:
        delta = top
    if delta < top:
        raise ValueError(f"delta={delta} is smaller than the largest entry {top}")
    for s in seqs:
        if np.any(s.values[s.finite] < 0):
            raise ValueError("transform requires non-negative finite entries")
    return max(int(delta), 1)


def plugin_maxconv_values(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(max,+)-convolution routed through the installed bounded (min,+) routine."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    fa, fb = a > NEG_FLOOR, b > NEG_FLOOR
    if not fa.any() or not fb.any():
        return np.full(a.size + b.size - 1, NEG, dtype=np.int64)
    off_a, off_b = int(a[fa].min()), int(b[fb].min())
    a0 = np.where(fa, a - off_a, NEG)
    b0 = np.where(fb, b - off_b, NEG)
    delta = max(int(a0[fa].max()), int(b0[fb].max()), 1)
    ta, tb = _to_min(a0, delta), _to_min(b0, delta)
    c3 = np.asarray(_plugin_minconv(ta, tb, int(max(ta.max(), tb.max()))), dtype=np.int64)
    c = _from_min(c3, delta, a.size - 1, b.size - 1)
    return np.where(c > NEG_FLOOR, c + off_a + off_b, NEG)


_KERNELS = {"naive": naive_maxconv_values, "plugin": plugin_maxconv_values}


def conv_values(a: np.ndarray, b: np.ndarray, config: KernelConfig | None = None) -> np.ndarray:
    """Kernel dispatch on raw encoded arrays."""
    kernel = _KERNELS[(config or DEFAULT_CONFIG).kernel_id]
    return kernel(a, b)


def batched_conv_values(
    a: np.ndarray, b: np.ndarray, config: KernelConfig | None = None, size: int | None = None
) -> np.ndarray:
    """Row-wise convolution of (P, n) and (P, m) encoded arrays, cut to ``size`` columns.

    The naive kernel handles all rows in one skewed outer sum; other kernels
    are called row by row.
    """
    rows, n = a.shape
    m = b.shape[1]
    size = n + m - 1 if size is None else min(size, n + m - 1)
    kernel_id = (config or DEFAULT_CONFIG).kernel_id
    if kernel_id != "naive" or rows == 0:
        return np.array([conv_values(x, y, config)[:size] for x, y in zip(a, b)], dtype=np.int64).reshape(rows, size)
    # out[k] = max_j a[k - j] + b[j]: window k of the NEG-padded a against reversed b.
    padded = np.concatenate((np.full((rows, m - 1), NEG, dtype=np.int64), a[:, : size]), axis=1)
    if padded.shape[1] < size + m - 1:
        tail = np.full((rows, size + m - 1 - padded.shape[1]), NEG, dtype=np.int64)
        padded = np.concatenate((padded, tail), axis=1)
    windows = sliding_window_view(padded, m, axis=1)[:, :size]
    b_rev = b[:, ::-1][:, None, :]
    out = np.empty((rows, size), dtype=np.int64)
    step = max(1, _CHUNK // (size * m))
    for lo in range(0, rows, step):
        hi = min(rows, lo + step)
        np.max(windows[lo:hi] + b_rev[lo:hi], axis=2, out=out[lo:hi])
    return saturate(out)


def maxconv(a: MonotoneSeq, b: MonotoneSeq, config: KernelConfig | None = None) -> MonotoneSeq:
    """(a (max,+) b) over the Minkowski sum of the two windows."""
    return MonotoneSeq(conv_values(a.values, b.values, config), a.base + b.base, check=False)


def maxconv_range(
    a: MonotoneSeq, I: range, b: MonotoneSeq, J: range, K: range, config: KernelConfig | None = None
) -> MonotoneSeq:
    """C[k] = max{a[i] + b[j] : i in I, j in J, i + j = k} for k in K.

    Entries of K below I + J are minus infinity, and so is all of K if it lies
    entirely above I + J.  A K that straddles the top of I + J would make the
    result non-monotone and is rejected.
    """
    a_sub, b_sub = a.restrict(I), b.restrict(J)
    values = conv_values(a_sub.values, b_sub.values, config)
    lo = I.start + J.start
    hi = lo + values.size  # exclusive
    if len(K) == 0:
        return MonotoneSeq(np.zeros(0, dtype=np.int64), K.start, check=False)
    if values.size and K.start < hi < K.stop:
        raise WindowError(f"output window [{K.start}, {K.stop - 1}] extends past the top of I+J ({hi - 1})")
    out = np.full(len(K), NEG, dtype=np.int64)
    s, e = max(K.start, lo), min(K.stop, hi)
    if s < e:
        out[s - K.start : e - K.start] = values[s - lo : e - lo]
    return MonotoneSeq(out, K.start, check=False)


@dataclass(frozen=True)
class WitnessArray:
    """For each output index k (starting at ``base``), a logical index i of A, or undefined."""

    base: int
    indices: np.ndarray
    defined: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.size)

    def __getitem__(self, k: int) -> int | None:
        pos = k - self.base
        if not 0 <= pos < self.indices.size:
            raise WindowError(f"index {k} outside witness window")
        return int(self.indices[pos]) if self.defined[pos] else None

    def verify(self, a: MonotoneSeq, b: MonotoneSeq, c: MonotoneSeq) -> bool:
        """True iff every entry is defined and certifies ``c``."""
        if not self.defined.all() or c.base != self.base or len(c) != len(self):
            return False
        i = self.indices - a.base
        j = np.arange(self.base, self.base + len(self)) - self.indices - b.base
        if np.any(i < 0) or np.any(i >= len(a)) or np.any(j < 0) or np.any(j >= len(b)):
            return False
        sums = saturate(a.values[i] + b.values[j])
        return bool(np.array_equal(sums, c.values))


def _bits(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def rows_maxconv_values(a: np.ndarray, b: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Naive (max,+)-convolution evaluated only at the output positions ``ks``."""
    na = a.size
    filler = np.full(na - 1, NEG, dtype=np.int64)
    windows = sliding_window_view(np.concatenate((filler, b, filler)), na)
    a_rev = a[::-1]
    out = np.empty(ks.size, dtype=np.int64)
    rows = max(1, _CHUNK // na)
    for start in range(0, ks.size, rows):
        block = windows[ks[start : start + rows]] + a_rev
        np.max(block, axis=1, out=out[start : start + rows])
    return saturate(out)


def _unique_candidates(
    a: np.ndarray, b: np.ndarray, config: KernelConfig | None, ks: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Bitwise maximiser candidates (relative indices) and a mask of where they are in range.

    With ``ks`` only those output positions are evaluated (naive kernel only).
    """
    na, nb = a.size, b.size
    fa, fb = a > NEG_FLOOR, b > NEG_FLOOR
    i = np.arange(na, dtype=np.int64)
    b_shift = np.where(fb, 2 * b + np.arange(nb, dtype=np.int64), NEG)
    k = np.arange(na + nb - 1, dtype=np.int64) if ks is None else ks
    cand = np.zeros(k.size, dtype=np.int64)
    finite = np.ones(k.size, dtype=bool)
    for bit in range(_bits(na)):
        a_shift = np.where(fa, 2 * a + i + ((i >> bit) & 1), NEG)
        if ks is None:
            c = conv_values(a_shift, b_shift, config)
        else:
            c = rows_maxconv_values(a_shift, b_shift, ks)
        finite &= c > NEG_FLOOR
        # Every maximiser contributes 2*C[k] + k, so the parity of C_b[k] - k is
        # the bit of the maximiser when it is unique.
        cand |= ((c - k) & 1) << bit
    ok = finite & (cand < na) & (k - cand >= 0) & (k - cand < nb)
    return cand, ok


def unique_witnesses(a: MonotoneSeq, b: MonotoneSeq, config: KernelConfig | None = None) -> WitnessArray:
    """Witness candidates that are correct wherever the maximiser is unique.

    Entries with several maximisers hold an arbitrary in-range index (or are
    undefined); callers must verify.
    """
    _check_witness_range(a, b)
    cand, ok = _unique_candidates(a.values, b.values, config)
    return WitnessArray(a.base + b.base, cand + a.base, ok)


def _check_witness_range(a: MonotoneSeq, b: MonotoneSeq) -> None:
    for s in (a, b):
        fin = s.values[s.finite]
        if fin.size and (fin.max() > _WITNESS_LIMIT or fin.min() < -_WITNESS_LIMIT):
            raise OverflowError("witness finding needs entries below 2^56 in magnitude")


def scan_witnesses(a: np.ndarray, b: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Direct maximiser search (relative index into ``a``) for the output rows ``ks``."""
    na, nb = a.size, b.size
    filler = np.full(na - 1, NEG, dtype=np.int64)
    padded = np.concatenate((filler, b, filler))
    windows = sliding_window_view(padded, na)
    a_rev = a[::-1]
    out = np.empty(ks.size, dtype=np.int64)
    rows = max(1, _CHUNK // na)
    for start in range(0, ks.size, rows):
        sel = ks[start : start + rows]
        block = windows[sel] + a_rev
        t = np.argmax(block, axis=1)
        out[start : start + rows] = na - 1 - t
    # Rows where everything is minus infinity: any in-range index is a witness.
    lo = np.maximum(0, ks - (nb - 1))
    return np.clip(out, lo, np.minimum(ks, na - 1))


def witness_array(
    a: MonotoneSeq,
    b: MonotoneSeq,
    config: KernelConfig | None = None,
    stream: int = 0,
    outputs=None,
) -> WitnessArray:
    """A verified witness for every entry of ``a (max,+) b``.

    ``stream`` separates the random choices of independent calls that share a
    seed.  If ``outputs`` (logical output indices) is given, only those entries
    are resolved and the rest are left undefined.
    """
    config = config or DEFAULT_CONFIG
    _check_witness_range(a, b)
    av, bv = a.values, b.values
    na, nb = av.size, bv.size
    c = conv_values(av, bv, config)
    size = c.size
    k = np.arange(size, dtype=np.int64)
    witness = np.maximum(0, k - (nb - 1))
    wanted = np.ones(size, dtype=bool)
    if outputs is not None:
        pos = np.asarray(outputs, dtype=np.int64).reshape(-1) - (a.base + b.base)
        if np.any(pos < 0) or np.any(pos >= size):
            raise WindowError("requested witness outside the convolution window")
        wanted[:] = False
        wanted[pos] = True
    # Minus-infinity outputs are certified by any in-range index.
    resolved = (c <= NEG_FLOOR) | ~wanted
    fa = av > NEG_FLOOR
    i = np.arange(na, dtype=np.int64)
    b_iso = np.where(bv > NEG_FLOOR, 2 * bv + np.arange(nb), NEG)
    rng = np.random.default_rng([config.rng_seed, stream])
    rates = range(_bits(na) + 2)
    rounds = config.sets_per_scale * _bits(na)
    if config.witness_retry_cap is not None:
        rounds = min(rounds, config.witness_retry_cap)
    for _ in range(rounds):
        if resolved.all():
            break
        for alpha in rates:
            if resolved.all():
                break
            sample = rng.random(na) < 2.0**-alpha
            a_iso = np.where(fa, 2 * av + i + sample, NEG)
            if config.kernel_id == "naive":
                # The naive kernel can skip outputs that are already certified.
                kk = np.flatnonzero(~resolved)
                cand, ok = _unique_candidates(a_iso, b_iso, config, kk)
                kk, ci = kk[ok], cand[ok]
            else:
                cand, ok = _unique_candidates(a_iso, b_iso, config)
                todo = ok & ~resolved
                kk, ci = k[todo], cand[todo]
            if kk.size == 0:
                continue
            good = saturate(av[ci] + bv[kk - ci]) == c[kk]
            witness[kk[good]] = ci[good]
            resolved[kk[good]] = True
    missing = np.flatnonzero(~resolved)
    if missing.size:
        witness[missing] = scan_witnesses(av, bv, missing)
    return WitnessArray(a.base + b.base, witness + a.base, wanted)


def witness_values(a: MonotoneSeq, b: MonotoneSeq, witnesses: WitnessArray) -> np.ndarray:
    """The sums certified by ``witnesses`` (encoded), for cross-checking."""
    i = witnesses.indices - a.base
    j = np.arange(witnesses.base, witnesses.base + len(witnesses)) - witnesses.indices - b.base
    return saturate(a.values[i] + b.values[j])


__all__ = [
    "KernelConfig",
    "WitnessArray",
    "batched_conv_values",
    "conv_values",
    "decode",
    "from_min_increasing",
    "maxconv",
    "maxconv_range",
    "naive_maxconv_values",
    "naive_minconv_values",
    "negate_values",
    "plugin_maxconv_values",
    "remove_neg_inf_values",
    "reverse_linear_values",
    "scan_witnesses",
    "set_plugin_minconv",
    "to_min_increasing",
    "unique_witnesses",
    "witness_array",
    "witness_values",
]

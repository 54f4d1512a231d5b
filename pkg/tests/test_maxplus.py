import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import monotone_seqs

from monoknap.core import NEG, NEG_INF, MonotoneSeq, WindowError
from monoknap.maxplus import (
    KernelConfig,
    batched_conv_values,
    conv_values,
    from_min_increasing,
    maxconv,
    maxconv_range,
    naive_minconv_values,
    negate_values,
    remove_neg_inf_values,
    reverse_linear_values,
    set_plugin_minconv,
    to_min_increasing,
    unique_witnesses,
    witness_array,
)
from monoknap.oracle import brute_maxconv, gen_monotone_seq

NAIVE = KernelConfig("naive")
PLUGIN = KernelConfig("plugin")


def seq(*vals, base=0):
    return MonotoneSeq(list(vals), base)


@pytest.mark.parametrize("config", [NAIVE, PLUGIN])
def test_maxconv_examples(config):
    assert maxconv(seq(0, 1, 3), seq(0, 2, 2), config).to_list() == [0, 2, 3, 5, 5]
    a = seq(NEG_INF, 1, 4, 4, base=2)
    assert maxconv(a, seq(0), config) == a
    assert maxconv(seq(NEG_INF, NEG_INF), seq(0, 1), config).to_list() == [NEG_INF] * 3


def test_maxconv_range_examples():
    a, b = seq(0, 1, 3), seq(0, 2, 2)
    assert maxconv_range(a, range(1, 3), b, range(0, 2), range(2, 4)).to_list() == [3, 5]
    assert maxconv_range(a, range(0, 1), b, range(0, 1), range(3, 5)).to_list() == [NEG_INF] * 2
    assert maxconv_range(a, a.window, b, b.window, range(0, 5)) == maxconv(a, b)
    with pytest.raises(WindowError):
        maxconv_range(a, range(0, 4), b, b.window, range(0, 2))


def test_transform_examples():
    assert remove_neg_inf_values(np.array([NEG, 0, 2]), 2).tolist() == [0, 4, 6]
    assert negate_values(np.array([0, 1]), 1).tolist() == [1, 0]
    assert reverse_linear_values(np.array([1, 0])).tolist() == [0, 2]


@given(monotone_seqs(base=0), monotone_seqs(base=0))
def test_min_plus_round_trip(a, b):
    if (a.values[a.finite] < 0).any() or (b.values[b.finite] < 0).any():
        return
    delta = max(a.max_finite() or 0, b.max_finite() or 0, 1)
    ta, tb = to_min_increasing(a, delta), to_min_increasing(b, delta)
    assert np.all(np.diff(ta.values) > 0)
    c = MonotoneSeq(naive_minconv_values(ta.values, tb.values), 0, check=False)
    assert from_min_increasing(c, delta, len(a), len(b)) == brute_maxconv(a, b)


@given(monotone_seqs(), monotone_seqs())
def test_kernels_match_brute_force(a, b):
    want = brute_maxconv(a, b)
    assert maxconv(a, b, NAIVE) == want
    assert maxconv(a, b, PLUGIN) == want


def test_plugin_slot_accepts_a_replacement():
    calls = []

    def counting(x, y, bound):
        calls.append(bound)
        return naive_minconv_values(x, y)

    set_plugin_minconv(counting)
    try:
        a, b = gen_monotone_seq(40, 40, seed=1), gen_monotone_seq(30, 40, seed=2)
        assert maxconv(a, b, PLUGIN) == brute_maxconv(a, b)
        assert calls
    finally:
        set_plugin_minconv(None)


@given(monotone_seqs(bound=10), monotone_seqs(bound=10), monotone_seqs(bound=10))
def test_commutative_and_associative(a, b, c):
    assert maxconv(a, b) == maxconv(b, a)
    assert maxconv(maxconv(a, b), c) == maxconv(a, maxconv(b, c))


@given(st.integers(0, 5), st.integers(1, 8), st.integers(1, 8), st.integers(0, 1000))
def test_batched_rows_match_single_convs(rows, la, lb, seed):
    rng = np.random.default_rng(seed)
    a = np.sort(rng.integers(0, 20, (rows, la)), axis=1)
    b = np.sort(rng.integers(0, 20, (rows, lb)), axis=1)
    size = int(rng.integers(1, la + lb))
    got = batched_conv_values(a, b, NAIVE, size)
    for r in range(rows):
        assert got[r].tolist() == conv_values(a[r], b[r])[:size].tolist()


@pytest.mark.parametrize(
    "a, b, k, expected",
    [((0, 5), (0, 0), 1, 1), ((0,), (0,), 0, 0)],
)
def test_unique_witness_examples(a, b, k, expected):
    assert unique_witnesses(seq(*a), seq(*b))[k] == expected


def test_non_unique_witness_is_only_a_candidate():
    a = b = seq(0, 0)
    wit = witness_array(a, b)
    assert wit.verify(a, b, maxconv(a, b))
    assert wit[1] in (0, 1)


@pytest.mark.parametrize("vals_a, vals_b", [((0, 1, 3), (0, 2, 2)), ((0,), (0,)), ((0, 0, 0), (0, 0, 0))])
def test_witness_array_examples(vals_a, vals_b):
    a, b = seq(*vals_a), seq(*vals_b)
    c = maxconv(a, b)
    wit = witness_array(a, b)
    assert wit.verify(a, b, c)
    for k in c.window:
        i = wit[k]
        assert a[i] + b[k - i] == c[k]


@given(monotone_seqs(), monotone_seqs(), st.sampled_from([NAIVE, PLUGIN]), st.integers(0, 3))
def test_witness_array_is_total(a, b, config, seed):
    config = KernelConfig(config.kernel_id, rng_seed=seed, witness_retry_cap=1)
    assert witness_array(a, b, config).verify(a, b, brute_maxconv(a, b))


@given(monotone_seqs(), monotone_seqs())
def test_unique_witnesses_match_unique_argmax(a, b):
    wit = unique_witnesses(a, b)
    c = brute_maxconv(a, b)
    for k in c.window:
        if c[k] is NEG_INF:
            continue
        arg = [i for i in a.window if (k - i) in b.window and a[i] + b[k - i] == c[k]]
        if len(arg) == 1:
            assert wit[k] == arg[0]


def test_witness_outputs_restrict_resolution():
    a, b = gen_monotone_seq(20, 20, seed=3), gen_monotone_seq(20, 20, seed=4)
    wit = witness_array(a, b, outputs=[5, 7])
    assert wit[5] is not None and wit[7] is not None and wit[6] is None
    with pytest.raises(WindowError):
        witness_array(a, b, outputs=[100])


def test_unknown_kernel_rejected():
    with pytest.raises(ValueError):
        KernelConfig("fft")

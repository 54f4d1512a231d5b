import pickle

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import instances, monotone_seqs

from monoknap.core import (
    NEG,
    NEG_INF,
    InvalidInstanceError,
    Item,
    KnapsackInstance,
    MonotoneSeq,
    Solution,
    StepList,
    WindowError,
    dominance_filter,
    instance_stats,
    normalize_instance,
    remove_dominated,
    seq_from_steps,
    steps_from_seq,
)


def test_neg_inf_is_a_saturating_singleton():
    assert NEG_INF + 5 == NEG_INF
    assert 5 + NEG_INF == NEG_INF
    assert NEG_INF < -(10**30)
    assert pickle.loads(pickle.dumps(NEG_INF)) is NEG_INF
    assert MonotoneSeq([NEG_INF, 1])[0] is NEG_INF


@pytest.mark.parametrize(
    "pairs, mode, expected",
    [
        ([(3, 2), (5, 2), (1, 1)], "unbounded", [(5, 2), (1, 1)]),
        ([(3, 2)], "unbounded", [(3, 2)]),
        ([(3, 2), (5, 2)], "zero-one", [(3, 2), (5, 2)]),
    ],
)
def test_normalize_instance(pairs, mode, expected):
    inst = KnapsackInstance.from_pairs(pairs, 10, mode)
    assert sorted(normalize_instance(inst).pairs()) == sorted(expected)


@pytest.mark.parametrize(
    "steps, window, expected",
    [
        ([(0, 0), (2, 5)], range(0, 4), [0, 0, 5, 5]),
        ([], range(0, 2), [NEG_INF, NEG_INF]),
        ([(1, 4)], range(0, 3), [NEG_INF, 4, 4]),
    ],
)
def test_seq_from_steps(steps, window, expected):
    assert seq_from_steps(StepList(steps), window).to_list() == expected


@pytest.mark.parametrize(
    "values, base, expected",
    [
        ([0, 0, 5, 5], 0, [(0, 0), (2, 5)]),
        ([7], 3, [(3, 7)]),
        ([NEG_INF, 2, 2], 0, [(1, 2)]),
    ],
)
def test_steps_from_seq(values, base, expected):
    assert steps_from_seq(MonotoneSeq(values, base)).steps == expected


@pytest.mark.parametrize(
    "pairs, expected",
    [
        ([(2, 3), (1, 4)], [(1, 4)]),
        ([(1, 1), (2, 2)], [(1, 1), (2, 2)]),
        ([(1, 5), (1, 2)], [(1, 5)]),
    ],
)
def test_remove_dominated(pairs, expected):
    assert remove_dominated(pairs).steps == expected


def test_invalid_inputs_are_rejected():
    with pytest.raises(InvalidInstanceError):
        Item(3, 0)
    with pytest.raises(InvalidInstanceError):
        Item(-1, 2)
    with pytest.raises(InvalidInstanceError):
        KnapsackInstance.from_pairs([(1, 1)], -1)
    with pytest.raises(InvalidInstanceError):
        KnapsackInstance.from_pairs([(1, 1)], 5, "fractional")
    with pytest.raises(InvalidInstanceError):
        KnapsackInstance.from_pairs([(1 << 40, 1)], 1 << 30)
    with pytest.raises(ValueError):
        MonotoneSeq([3, 2])
    with pytest.raises(OverflowError):
        MonotoneSeq([1 << 61])
    with pytest.raises(ValueError):
        StepList([(1, 5), (2, 5)])


def test_window_reads_outside_are_errors():
    seq = MonotoneSeq([1, 2, 3], base=4)
    assert seq[4] == 1 and seq[6] == 3
    with pytest.raises(WindowError):
        seq[3]
    with pytest.raises(WindowError):
        seq[7]
    with pytest.raises(WindowError):
        seq.restrict(range(3, 6))
    assert seq.restrict(range(5, 7)).to_list() == [2, 3]


def test_sequences_are_immutable():
    seq = MonotoneSeq([0, 1])
    with pytest.raises(AttributeError):
        seq.base = 2
    with pytest.raises(ValueError):
        seq.values[0] = 5


def test_instance_stats():
    inst = KnapsackInstance.from_pairs([(4, 3), (5, 4)], 7)
    st_ = instance_stats(inst)
    assert (st_.p_max, st_.w_max, st_.delta) == (5, 4, 9)
    assert st_.greedy_item_index == 0 and st_.greedy_value == 8


@given(monotone_seqs())
def test_steps_round_trip(seq):
    assert seq_from_steps(steps_from_seq(seq), seq.window) == seq


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), max_size=20))
def test_remove_dominated_is_idempotent_and_valid(pairs):
    once = remove_dominated(pairs)
    assert remove_dominated(once.steps) == once
    w, p = once.weights, once.profits
    assert np.all(np.diff(w) > 0) and np.all(np.diff(p) > 0)
    # Every input pair is weakly dominated by some kept step.
    for wi, pi in pairs:
        assert any(ws <= wi and ps >= pi for ws, ps in once.steps)


@given(st.lists(st.tuples(st.integers(1, 9), st.integers(0, 9)), max_size=12))
def test_dominance_filter_keeps_one_index_per_step(pairs):
    w = np.array([x[0] for x in pairs], dtype=np.int64)
    p = np.array([x[1] for x in pairs], dtype=np.int64)
    keep = dominance_filter(w, p)
    assert list(zip(w[keep].tolist(), p[keep].tolist())) == remove_dominated(pairs).steps


@given(instances(), st.dictionaries(st.integers(0, 5), st.integers(0, 4), max_size=4))
def test_solution_sums_match_direct_recomputation(inst, counts):
    counts = {i: c for i, c in counts.items() if i < inst.n}
    sol = Solution(counts)
    assert sol.profit(inst) == sum(inst.items[i].profit * c for i, c in counts.items())
    assert sol.weight(inst) == sum(inst.items[i].weight * c for i, c in counts.items())
    assert sol.cardinality == sum(counts.values())
    assert sol.is_feasible(inst) == (sol.weight(inst) <= inst.capacity)


def test_solution_helpers():
    sol = Solution.from_indices([2, 0, 2])
    assert sol.as_pairs() == [[0, 1], [2, 2]]
    assert (sol + Solution({0: 1})).counts == {0: 2, 2: 2}
    assert sol.remap([5, 6, 7]).counts == {5: 1, 7: 2}
    zo = KnapsackInstance.from_pairs([(1, 1), (1, 1), (1, 1)], 5, "zero-one")
    assert not sol.is_feasible(zo)


def test_monotone_seq_neg_encoding():
    seq = MonotoneSeq([NEG_INF, NEG_INF, 3])
    assert int(seq.values[0]) == NEG
    assert seq.max_finite() == 3
    assert MonotoneSeq([NEG_INF]).max_finite() is None

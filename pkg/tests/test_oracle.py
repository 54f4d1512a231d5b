import numpy as np
import pytest
from hypothesis import given
from strategies import instances

from monoknap.core import KnapsackInstance
from monoknap.oracle import (
    OracleBudgetError,
    bellman_bounded_cardinality,
    bellman_unbounded,
    bellman_zeroone,
    gen_instance,
    gen_monotone_seq,
    gen_step_list,
)
from monoknap.unbounded_exact import single_item_profile


def test_bellman_examples():
    inst = KnapsackInstance.from_pairs([(4, 3), (5, 4)], 7)
    assert bellman_unbounded(inst).to_list() == [0, 0, 0, 4, 5, 5, 8, 9]
    assert bellman_unbounded(KnapsackInstance((), 3)).to_list() == [0, 0, 0, 0]
    assert bellman_unbounded(KnapsackInstance.from_pairs([(1, 1)], 4)).to_list() == [0, 1, 2, 3, 4]
    zo = KnapsackInstance.from_pairs([(6, 5), (5, 4), (4, 3)], 7, "zero-one")
    assert bellman_zeroone(zo).values[7] == 9


@given(instances(max_n=5, p_max=20, w_max=8, max_cap=40))
def test_cardinality_caps(inst):
    W = inst.capacity
    single, _ = single_item_profile(inst, range(W + 1))
    assert bellman_bounded_cardinality(inst, 1) == single
    assert bellman_bounded_cardinality(inst, W + 3) == bellman_unbounded(inst)


def test_budget_is_enforced():
    inst = KnapsackInstance.from_pairs([(1, 1)] * 10, 1000)
    with pytest.raises(OracleBudgetError):
        bellman_unbounded(inst, budget=100)


def test_generators_are_deterministic():
    assert gen_instance(3, 5, 5, 10, seed=1) == gen_instance(3, 5, 5, 10, seed=1)
    assert gen_step_list(6, 20, 20, seed=2) == gen_step_list(6, 20, 20, seed=2)
    seq = gen_monotone_seq(8, 8, seed=7)
    assert np.all(np.diff(seq.values) >= 0) and seq.values.max() <= 8


def test_strong_correlation():
    inst = gen_instance(40, 30, 30, 100, correlation="strong", seed=3)
    assert all(abs(it.profit - it.weight) <= 1 for it in inst.items)
    zo = gen_instance(5, 10, 10, 20, mode="zero-one", correlation="inverse", seed=4)
    assert zo.mode == "zero-one" and zo.n == 5

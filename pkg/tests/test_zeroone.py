import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import instances

from monoknap.core import KnapsackInstance, StepList, remove_dominated
from monoknap.oracle import bellman_zeroone, brute_step_conv
from monoknap.zeroone_exact import (
    ZeroOneConfig,
    color_code_small,
    dyadic_class,
    group_items,
    merge_tree,
    reconstruct_zeroone,
    solve_zeroone,
    subgroup_count,
    zeroone_run,
)


def zo(pairs, cap):
    return KnapsackInstance.from_pairs(pairs, cap, "zero-one")


def opt(inst):
    return int(bellman_zeroone(inst).values[inst.capacity])


def test_dyadic_class():
    assert [dyadic_class(x) for x in (1, 2, 3, 4, 7, 8)] == [1, 2, 2, 3, 3, 4]


def test_group_items():
    assert group_items(zo([(1, 1), (2, 1), (5, 3)], 10)) == {(1, 1): [0], (2, 1): [1], (3, 2): [2]}
    assert group_items(zo([(4, 4)], 10)) == {(3, 3): [0]}
    assert group_items(zo([], 10)) == {}


def test_subgroup_count_is_at_most_group_size():
    assert 1 <= subgroup_count(1, 1, 1000, 1000, 3) <= 3
    assert subgroup_count(3, 3, 10, 10, 50) >= 1


def test_color_code_small_examples():
    rng = np.random.default_rng(0)
    assert color_code_small([(5, 3)], 1, 4, 3, rng).steps == [(0, 0), (3, 5)]
    assert color_code_small([], 2, 5, 3, rng).steps == [(0, 0)]


def test_color_code_small_two_items_succeed_with_high_probability():
    # Sampling is forced even though two items fit in kappa = 2.
    hits = 0
    for seed in range(1000):
        steps = color_code_small([(2, 1), (3, 2)], 2, 3, 20, np.random.default_rng(seed), exact_small=False)
        hits += steps.value_at(3) == 5
    assert hits >= 990


def test_merge_tree_examples():
    a, b = StepList([(0, 0), (1, 2)]), StepList([(0, 0), (1, 3)])
    assert merge_tree([a, b], 10).steps == [(0, 0), (1, 3), (2, 5)]
    assert merge_tree([a], 10) == a
    unit = StepList([(0, 0), (1, 1)])
    assert merge_tree([unit] * 5, 5).steps == [(j, j) for j in range(6)]


@given(st.lists(st.lists(st.tuples(st.integers(1, 10), st.integers(1, 20)), max_size=4), min_size=1, max_size=4))
def test_merge_tree_matches_brute_fold(raw):
    profiles = [remove_dominated(p + [(0, 0)]) for p in raw]
    want = profiles[0]
    for p in profiles[1:]:
        want = brute_step_conv(want, p)
    assert merge_tree(profiles, 25) == want.truncate(25)


def test_solve_examples():
    assert solve_zeroone(zo([(6, 5), (5, 4), (4, 3)], 7))[0] == 9
    assert solve_zeroone(zo([(3, 4)], 3))[0] == 0
    value, sol = solve_zeroone(zo([(6, 5), (5, 4), (4, 3)], 7))
    assert sol.counts == {1: 1, 2: 1}


def test_unbounded_instances_are_rejected():
    with pytest.raises(ValueError):
        solve_zeroone(KnapsackInstance.from_pairs([(1, 1)], 3))
    with pytest.raises(ValueError):
        ZeroOneConfig(repetition_factor=0)


@given(instances(max_n=12, p_max=40, w_max=20, max_cap=80, mode="zero-one"), st.integers(0, 50))
def test_never_over_reports_and_reconstructs(inst, seed):
    cfg = ZeroOneConfig(rng_seed=seed, kappa_factor=1, repetition_factor=1, exact_small=False)
    value, sol = solve_zeroone(inst, cfg)
    assert value <= opt(inst)
    assert sol.is_feasible(inst) and sol.profit(inst) == value


@given(instances(max_n=12, p_max=40, w_max=20, max_cap=80, mode="zero-one"))
def test_default_constants_are_exact_on_small_instances(inst):
    assert solve_zeroone(inst)[0] == opt(inst)


@given(instances(max_n=10, p_max=30, w_max=15, max_cap=60, mode="zero-one"), st.data())
def test_every_profile_entry_is_realised(inst, data):
    run = zeroone_run(inst, ZeroOneConfig(kappa_factor=1, repetition_factor=1, exact_small=False))
    values = run.root.values
    assert np.all(np.diff(values) >= 0)
    assert np.all(values <= bellman_zeroone(inst).values[: values.size])
    target = data.draw(st.integers(0, inst.capacity))
    sol = reconstruct_zeroone(run, target)
    # The stored profile stops at its last rise and stays flat beyond.
    assert sol.weight(inst) <= target and sol.profit(inst) == values[min(target, values.size - 1)]
    assert all(c == 1 for c in sol.counts.values())

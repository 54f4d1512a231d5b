import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import instances

from monoknap.core import KnapsackInstance, Solution, normalize_instance
from monoknap.maxplus import KernelConfig
from monoknap.oracle import bellman_unbounded, gen_instance
from monoknap.unbounded_exact import (
    clipped_decide,
    decide_unbounded,
    greedy_two_approx,
    reduce_capacity,
    search_opt,
    solve_unbounded,
)

SMALL = KnapsackInstance.from_pairs([(4, 3), (5, 4)], 7)


def opt(inst):
    return int(bellman_unbounded(inst).values[inst.capacity])


def test_greedy_two_approx():
    assert greedy_two_approx(KnapsackInstance.from_pairs([(3, 2)], 5)) == (6, Solution({0: 2}))
    value, _ = greedy_two_approx(SMALL)
    assert value == 8 and 2 * value >= opt(SMALL) == 9
    assert greedy_two_approx(SMALL.with_capacity(0))[0] == 0


def test_reduce_capacity():
    inst = KnapsackInstance.from_pairs([(3, 2), (1, 1)], 100)
    reduced, forced = reduce_capacity(inst)
    assert reduced.capacity <= 16 < reduced.capacity + 2
    assert forced.weight(inst) == 100 - reduced.capacity and set(forced.counts) == {0}

    small = KnapsackInstance.from_pairs([(3, 2)], 16)
    assert reduce_capacity(small) == (small, Solution())

    unit = KnapsackInstance.from_pairs([(1, 1)], 10**6)
    reduced, forced = reduce_capacity(unit)
    assert reduced.capacity == 2 and forced.counts == {0: 10**6 - 2}
    assert opt(reduced) + forced.profit(unit) == 10**6


@pytest.mark.parametrize("alpha, accept", [(9, True), (10, False), (0, True)])
def test_clipped_decide_examples(alpha, accept):
    assert clipped_decide(SMALL, alpha)[0] is accept


def test_solve_examples():
    assert solve_unbounded(SMALL) == (9, Solution({0: 1, 1: 1}))
    assert solve_unbounded(KnapsackInstance.from_pairs([(1, 1)], 0)) == (0, Solution())
    assert solve_unbounded(KnapsackInstance.from_pairs([(1, 1)], 5)) == (5, Solution({0: 5}))
    assert solve_unbounded(KnapsackInstance((), 5)) == (0, Solution())


def test_zero_one_instances_are_rejected():
    with pytest.raises(ValueError):
        solve_unbounded(KnapsackInstance.from_pairs([(1, 1)], 5, "zero-one"))


@given(instances(max_n=5, p_max=15, w_max=8, max_cap=80), st.data())
def test_decision_is_monotone_in_alpha(inst, data):
    inst = normalize_instance(inst)
    top = max(it.profit for it in inst.items) * inst.capacity
    answers = [clipped_decide(inst, a)[0] for a in range(0, top + 1, max(1, top // 25))]
    assert answers == sorted(answers, reverse=True)
    a = data.draw(st.integers(0, top))
    assert clipped_decide(inst, a)[0] == (opt(inst) >= a) == decide_unbounded(inst, a)


@given(instances(max_n=6, p_max=30, w_max=12, max_cap=150), st.sampled_from(["naive", "plugin"]))
def test_solver_matches_bellman(inst, kernel):
    value, sol = solve_unbounded(inst, KernelConfig(kernel))
    assert value == opt(inst)
    assert sol.is_feasible(inst) and sol.profit(inst) == value


@given(instances(max_n=4, p_max=10, w_max=5, max_cap=2000))
def test_reduce_capacity_preserves_opt(inst):
    reduced, forced = reduce_capacity(inst)
    assert opt(reduced) + forced.profit(inst) == opt(inst)
    assert forced.weight(inst) + reduced.capacity == inst.capacity


def test_search_opt_on_reduced_instance():
    inst = normalize_instance(gen_instance(8, 20, 9, 300, seed=5))
    assert search_opt(inst) == opt(inst)


@given(instances(max_n=4, p_max=10, w_max=6, max_cap=60), st.integers(-5, 700))
def test_decide_unbounded_matches_oracle(inst, alpha):
    assert decide_unbounded(inst, alpha) == (opt(inst) >= alpha)

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import instances, step_lists

from monoknap.approx import (
    ApproxParams,
    approx_maxconv_strong,
    approx_maxconv_weak,
    as_fraction,
    check_strong_approx,
    check_weak_approx,
    exact_profile_squaring,
    fptas,
    fptas_run,
    preprocess_profits,
    preprocess_profits_weights,
    reconstruct_approx,
    replace_light_items,
    weak_fptas,
    weak_fptas_run,
)
from monoknap.core import KnapsackInstance, ReconstructionError, StepList, seq_from_steps
from monoknap.oracle import bellman_unbounded, brute_step_conv

SMALL = KnapsackInstance.from_pairs([(4, 3), (5, 4)], 7)
EPS = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 10)]


def opt(inst):
    return int(bellman_unbounded(inst).values[inst.capacity])


def test_epsilon_parsing():
    assert as_fraction("3/10") == Fraction(3, 10)
    assert as_fraction(0.1) == Fraction(1, 10)
    params = ApproxParams(Fraction(1, 2))
    assert params.inner == Fraction(1, 128)
    for bad in (0, 1, Fraction(-1, 2)):
        with pytest.raises(ValueError):
            ApproxParams(as_fraction(bad))


def test_preprocess_profits_example():
    inst = KnapsackInstance.from_pairs([(10, 5), (1, 1)], 10)
    reduced, receipt = preprocess_profits(inst, Fraction(1, 4))
    assert reduced.pairs() == [(10, 5)]
    assert receipt.threshold == 10
    assert opt(inst) - opt(reduced) <= 4 * Fraction(1, 4) * opt(inst)


def test_preprocess_profits_keeps_expensive_items():
    inst = KnapsackInstance.from_pairs([(50, 5), (40, 4)], 10)
    reduced, receipt = preprocess_profits(inst, Fraction(1, 100))
    assert reduced == inst and receipt.replaced_cheap is None


def test_preprocess_single_item_is_a_multiple():
    inst = KnapsackInstance.from_pairs([(2, 3)], 30)
    reduced, receipt = preprocess_profits(inst, Fraction(1, 4))
    (p, w), = reduced.pairs()
    (i, r), = receipt.origin
    assert i == 0 and (p, w) == (2 * r, 3 * r)


def test_replace_light_items_examples():
    reduced, origin, light = replace_light_items(KnapsackInstance.from_pairs([(1, 1)], 100), Fraction(1, 10))
    assert reduced.pairs() == [(10, 10)] and origin == ((0, 10),) and light == (0, 10)
    inst = KnapsackInstance.from_pairs([(3, 2), (1, 1)], 5)
    same, _, light = replace_light_items(inst, Fraction(1, 10))
    assert same == inst and light is None


def test_both_preprocessing_steps_example():
    inst = KnapsackInstance.from_pairs([(10, 5), (1, 1)], 10)
    reduced, receipt = preprocess_profits_weights(inst, Fraction(1, 4))
    assert reduced.pairs() == [(10, 5)]


@given(instances(max_n=5, p_max=30, w_max=10, max_cap=100), st.sampled_from(EPS))
def test_preprocessing_loses_little(inst, eps):
    reduced, receipt = preprocess_profits_weights(inst, eps)
    before, after = opt(inst), opt(reduced)
    assert after <= before
    assert before - after <= 12 * eps * before
    # Every new item is a bundle of copies of one original item.
    for (p, w), (i, r) in zip(reduced.pairs(), receipt.origin):
        assert (p, w) == (inst.items[i].profit * r, inst.items[i].weight * r)


def test_strong_conv_examples():
    a = StepList([(0, 0), (1, 10)])
    out = approx_maxconv_strong(a, a, Fraction(1, 2))
    exact = brute_step_conv(a, a)
    assert check_strong_approx(out, exact, Fraction(2), n=2)
    b = StepList([(0, 0), (3, 4), (5, 9)])
    assert approx_maxconv_strong(StepList([(0, 0)]), b, Fraction(1, 10)) == b
    flat = StepList([(0, 0), (2, 7)])
    assert approx_maxconv_strong(flat, flat, Fraction(1, 3)) == brute_step_conv(flat, flat)


@pytest.mark.parametrize("a, b, eps, n, expected", [
    ([0, 3, 9], [0, 3, 9], Fraction(1, 2), None, True),
    ([0, 5], [0, 10], Fraction(1, 10), None, False),
])
def test_check_strong_approx_examples(a, b, eps, n, expected):
    assert check_strong_approx(a, b, eps, n) is expected


@given(step_lists(with_zero=True), step_lists(with_zero=True), st.sampled_from(EPS))
def test_strong_conv_sandwich(a, b, eps):
    exact = brute_step_conv(a, b)
    out = approx_maxconv_strong(a, b, eps)
    top = int(exact.weights[-1])
    assert check_strong_approx(out, exact, 4 * eps, n=top)


def test_weak_conv_example():
    a = StepList([(2, 3)])
    out = approx_maxconv_weak(a, a, Fraction(1, 4))
    assert any(w <= 2 * 4 and p >= Fraction(6, 3) for w, p in out.steps)
    exact = brute_step_conv(a, a)
    for w, p in out.steps:
        assert exact.value_at(w) >= p
    b = StepList([(0, 0), (4, 7), (9, 20)])
    assert check_weak_approx(approx_maxconv_weak(StepList([(0, 0)]), b, Fraction(1, 10)), b, Fraction(1, 10))


@pytest.mark.parametrize("eps, expected", [(Fraction(1, 10), True), (Fraction(1, 20), False)])
def test_check_weak_approx_inflated_step(eps, expected):
    b = StepList([(10, 5)])
    a = StepList([(11, 5)])
    assert check_weak_approx(a, b, eps) is expected
    assert check_weak_approx(b, b, 0)


@given(step_lists(with_zero=True), step_lists(with_zero=True), st.sampled_from(EPS))
def test_weak_conv_approximates_and_is_realisable(a, b, eps):
    exact = brute_step_conv(a, b)
    out = approx_maxconv_weak(a, b, eps)
    assert check_weak_approx(out, exact, 8 * eps)
    # Rounding never invents profit: every output step is dominated by a true one.
    for w, p in out.steps:
        assert exact.value_at(w) >= p


@given(step_lists(with_zero=True), step_lists(with_zero=True), step_lists(with_zero=True), st.sampled_from(EPS))
def test_weak_approximations_compose(a, b, c, eps):
    ab = approx_maxconv_weak(a, b, eps)
    abc = approx_maxconv_weak(ab, c, eps)
    exact = brute_step_conv(brute_step_conv(a, b), c)
    assert check_weak_approx(abc, exact, (1 + 8 * eps) ** 2 - 1)


@given(step_lists(max_size=12, w_max=3000, p_max=3000), step_lists(max_size=12, w_max=3000, p_max=3000),
       st.sampled_from(EPS + [Fraction(1, 20)]))
def test_weak_conv_output_size_bound(a, b, eps):
    if not len(a) or not len(b):
        return
    out = approx_maxconv_weak(a, b, eps)
    p_ratio = max(a.profits.max(), b.profits.max()) / min(a.profits.min(), b.profits.min())
    w_ratio = (a.weights.max() + b.weights.max()) / min(a.weights.min(), b.weights.min())
    # The constant 1 is a regression bound; measured ratios stay below 0.14.
    assert len(out) <= (1 / eps) * math.log2(2 * p_ratio) * math.log2(2 * w_ratio)


def test_fptas_examples():
    for scheme in (fptas, weak_fptas):
        value, sol = scheme(SMALL, Fraction(1, 10))
        assert value == 9 and sol.weight(SMALL) <= 7 and sol.profit(SMALL) >= 9
    single = KnapsackInstance.from_pairs([(3, 4)], 13)
    value, sol = fptas(single, Fraction(1, 10))
    assert value == 9 and sol.counts == {0: 3}


@given(instances(max_n=4, p_max=20, w_max=8, max_cap=30))
def test_fine_epsilon_is_exact(inst):
    eps = Fraction(1, max(inst.capacity, 1) + 1)
    assert fptas(inst, eps)[0] == opt(inst)


@given(instances(max_n=6, p_max=40, w_max=12, max_cap=150), st.sampled_from([Fraction(3, 10), Fraction(1, 10)]))
def test_strong_scheme_guarantee(inst, eps):
    value, sol = fptas(inst, eps)
    best = opt(inst)
    assert (1 - eps) * best <= value <= best
    assert sol.weight(inst) <= inst.capacity and sol.profit(inst) == value


@given(instances(max_n=6, p_max=40, w_max=12, max_cap=150), st.sampled_from([Fraction(3, 10), Fraction(1, 10)]))
def test_weak_scheme_guarantee(inst, eps):
    value, sol = weak_fptas(inst, eps)
    assert value >= (1 - eps) * opt(inst)
    assert sol.weight(inst) <= (1 + eps) * inst.capacity and sol.profit(inst) >= value


@given(instances(max_n=4, p_max=15, w_max=6, max_cap=40))
def test_exact_squaring_reproduces_bellman(inst):
    rounds = max(1, inst.capacity).bit_length()
    steps = exact_profile_squaring(inst, rounds)
    W = inst.capacity
    assert seq_from_steps(steps, range(W + 1)) == bellman_unbounded(inst)


def test_runs_without_witnesses_refuse_reconstruction():
    run = weak_fptas_run(SMALL, Fraction(1, 10), witnesses=False)
    with pytest.raises(ReconstructionError):
        reconstruct_approx(run)
    full = fptas_run(SMALL, Fraction(1, 10))
    assert reconstruct_approx(full).profit(SMALL) == full.value == 9


@given(instances(max_n=5, p_max=30, w_max=10, max_cap=80), st.sampled_from(EPS))
def test_weak_levels_approximate_exact_squaring(inst, eps):
    run = weak_fptas_run(inst, eps)
    for i, level in enumerate(run.levels):
        exact = exact_profile_squaring(run.reduced.with_capacity(run.budget), i)
        assert check_weak_approx(level, exact, eps, domain=run.budget)


def test_step_output_never_exceeds_budget():
    inst = KnapsackInstance.from_pairs([(7, 3), (11, 5), (2, 1)], 47)
    run = weak_fptas_run(inst, Fraction(1, 10))
    assert all(int(level.weights[-1]) <= run.budget for level in run.levels if len(level))
    assert np.all(run.levels[-1].profits >= 0)

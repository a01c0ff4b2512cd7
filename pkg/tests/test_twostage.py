import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from graverip.core import Cycle, TwoStageInstance, assemble_matrix
from graverip.generate import random_two_stage, random_two_stage_small
from graverip.twostage import (BUDGET_STOPPED, INFEASIBLE, OPTIMAL, SolverConfig, best_cycle, candidate_heads,
                               head_span, initial_solution, multipliers, solve, two_stage_graver_bound)

from oracles import brute_ip


def example(c=(0, 1)):
    return TwoStageInstance.build([[[1]]], [[[2]]], [4], [0, 0], [4, 2], list(c))


def oracle(inst):
    return brute_ip(assemble_matrix(inst).tolist(), inst.rhs, inst.lower, inst.upper, inst.objective)


def test_initial_solution_at_lower_bound():
    inst = TwoStageInstance.build([[[1, 2]]], [[[1]]], [7], [1, 2, 2], [3, 3, 3], [0, 0, 0])
    assert initial_solution(inst) == (1, 2, 2)


def test_initial_solution_example():
    x = initial_solution(example())
    assert x in {(0, 2), (2, 1), (4, 0)}


def test_parity_infeasible():
    inst = TwoStageInstance.build([[[2]]], [[[2]]], [3], [0, 0], [5, 5], [1, 1])
    assert initial_solution(inst) is None
    rep = solve(inst)
    assert rep.status == INFEASIBLE and rep.solution is None


def test_best_cycle_example():
    cyc = best_cycle(example(), (4, 0), 2, 4)
    assert cyc == Cycle((-2,), ((1,),))


def test_best_cycle_at_optimum_is_none():
    assert best_cycle(example(), (0, 2), 1, 4) is None


def test_best_cycle_multiplier_too_large():
    assert best_cycle(example(), (4, 0), 5, 4) is None


def test_solve_example():
    rep = solve(example())
    assert rep.status == OPTIMAL
    assert rep.solution == (0, 2) and rep.objective_value == 2


def test_singleton_box():
    inst = TwoStageInstance.build([[[1]]], [[[1]]], [3], [1, 2], [1, 2], [5, -1])
    rep = solve(inst)
    assert rep.solution == (1, 2) and rep.iterations == 0 and rep.status == OPTIMAL


def test_graver_bound_values():
    assert two_stage_graver_bound(1, 1, 1) == 1
    assert two_stage_graver_bound(1, 1, 2) == 32
    base = two_stage_graver_bound(1, 1, 2)
    assert two_stage_graver_bound(2, 1, 2) > base
    assert two_stage_graver_bound(1, 2, 2) > base
    assert two_stage_graver_bound(1, 1, 3) > base


def test_candidate_heads_order():
    heads = candidate_heads([-1, -1], [1, 1], 1)
    assert heads == [(0, 0), (-1, 0), (0, -1), (0, 1), (1, 0)]


def test_multipliers():
    assert multipliers("doubling", 5) == [1, 2, 4]
    assert multipliers("exhaustive", 3) == [1, 2, 3]


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(step_multipliers="random")
    with pytest.raises(ValueError):
        SolverConfig(head_norm_cap=0)


def test_iteration_limit_reports_budget_stop():
    rng = random.Random(5)
    for _ in range(50):
        inst = random_two_stage(rng, 2, 1, 2, 2, 2)
        full = solve(inst)
        if full.iterations >= 2:
            break
    rep = solve(inst, SolverConfig(max_iterations=1))
    assert rep.status == BUDGET_STOPPED and rep.iterations == 1


def test_small_cap_not_certified():
    inst = example()
    rep = solve(inst, SolverConfig(head_norm_cap=1))
    assert head_span(inst) == 4
    assert rep.status == BUDGET_STOPPED


def test_parallel_matches_sequential():
    rng = random.Random(9)
    for _ in range(5):
        inst = random_two_stage(rng, 3, 2, 2, 2, 2)
        a = solve(inst)
        b = solve(inst, SolverConfig(parallel_width=2))
        assert a.to_text() == b.to_text()


def check_run(inst, rep):
    ref = oracle(inst)
    if ref is None:
        assert rep.status == INFEASIBLE
        return
    assert rep.status == OPTIMAL and rep.objective_value == ref[0]
    assert inst.is_feasible(rep.solution)
    assert all(b > a for a, b in zip(rep.trace, rep.trace[1:]))
    for a in rep.augmentations:
        assert a.gain > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_optimal_on_random_instances(seed):
    inst = random_two_stage_small(random.Random(seed))
    check_run(inst, solve(inst))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_infeasible_rhs_detected(seed):
    rng = random.Random(seed)
    inst = random_two_stage_small(rng)
    rhs = tuple(b + rng.randint(-3, 3) for b in inst.rhs)
    inst = TwoStageInstance(inst.n, inst.r, inst.s, inst.t, inst.a_blocks, inst.b_blocks, rhs,
                            inst.lower, inst.upper, inst.objective)
    check_run(inst, solve(inst))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_deterministic_reports(seed):
    inst = random_two_stage_small(random.Random(seed))
    assert solve(inst).to_text() == solve(inst).to_text()


def test_gap_shrinks_with_full_head_cap():
    rng = random.Random(11)
    for _ in range(30):
        inst = random_two_stage_small(rng, width=3)
        cap = max(1, head_span(inst))
        rep = solve(inst, SolverConfig(head_norm_cap=cap, exact=True, step_multipliers="exhaustive"))
        opt = oracle(inst)[0]
        gaps = [opt - v for v in rep.trace]
        for g0, g1 in zip(gaps, gaps[1:]):
            assert Fraction(g1) <= (1 - Fraction(1, 2 * inst.n)) * g0


def test_fixed_cap_does_not_fake_infeasibility():
    # phase one needs a larger head step than the cap used for augmentation
    inst = TwoStageInstance.build(
        [[[1]], [[2]], [[-2]]], [[[-1, -2]], [[2, -1]], [[-1, -2]]], [0, 0, 2],
        [-2, 0, -1, 0, 0, 0, -1], [0, 0, 1, 0, 1, 2, 1], [-6, 1, -2, 7, -5, 0, -2],
    )
    rep = solve(inst, SolverConfig(head_norm_cap=1, exact=True, step_multipliers="exhaustive"))
    assert rep.status == OPTIMAL
    assert rep.objective_value == brute_ip(assemble_matrix(inst).tolist(), inst.rhs, inst.lower, inst.upper,
                                           inst.objective)[0] == 2

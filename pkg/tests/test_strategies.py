from fractions import Fraction

import pytest
from hypothesis import given, settings

from chainsched.baselines import os_style_decomposition, otac_schedule, thread_count
from chainsched.core import StageBuilder, is_valid
from chainsched.fertac import fertac_compute_solution, fertac_schedule
from chainsched.herad import herad_schedule
from chainsched.model import BIG, LITTLE, Platform, Stage, TaskChain, check_tiling, is_resource_valid
from chainsched.oracle import brute_force
from chainsched.strategies import STRATEGY_NAMES, InfeasibleSchedule, run_strategy
from chainsched.twocatac import (
    BudgetExceeded,
    CoreUsage,
    choose_best_solution,
    prefers_big_solution,
    twocatac_compute_solution,
    twocatac_schedule,
)

from conftest import chains, platforms


# -- FERTAC ---------------------------------------------------------------------------

def test_fertac_c1_target_8(c1):
    stages = fertac_compute_solution(c1, 1, 1, 2, 8)
    assert stages == (Stage(1, 1, 1, LITTLE), Stage(2, 2, 1, LITTLE), Stage(3, 4, 1, BIG))
    assert brute_force(c1, Platform(1, 2)).min_period == 8


def test_fertac_c1_schedule(c1):
    assert fertac_schedule(c1, Platform(1, 2)).period == 8


def test_fertac_no_resources(c1):
    assert fertac_compute_solution(c1, 1, 0, 0, 100) is None


def test_fertac_single_replicable_task():
    ch = TaskChain.from_weights([2], [9], [True])
    sol = fertac_schedule(ch, Platform(0, 3))
    assert sol.stages == (Stage(1, 1, 3, LITTLE),) and sol.period == 3


@settings(max_examples=150, deadline=None)
@given(chains(max_n=8), platforms(max_total=5))
def test_fertac_valid_and_never_beats_herad(chain, bl):
    plat = Platform(*bl)
    sol = fertac_schedule(chain, plat)
    check_tiling(chain, sol.stages)
    assert is_resource_valid(sol, plat)
    assert sol.period >= herad_schedule(chain, plat).period


@settings(max_examples=100, deadline=None)
@given(chains(max_n=8), platforms(max_total=5))
def test_fertac_big_stage_only_after_little_failure(chain, bl):
    plat = Platform(*bl)
    sol = fertac_schedule(chain, plat)
    builder = StageBuilder(chain, sol.period)
    b, l = plat.big, plat.little
    for st in sol.stages:
        if st.core_type == BIG:
            e, u = builder.stage(st.first, l, LITTLE)
            assert not builder.valid(st.first, e, u, LITTLE, b, l)
            b -= st.cores
        else:
            l -= st.cores


# -- 2CATAC ---------------------------------------------------------------------------

def test_choose_best_usage_rules():
    assert not prefers_big_solution(CoreUsage(2, 0), CoreUsage(1, 1))
    assert prefers_big_solution(CoreUsage(1, 2), CoreUsage(2, 2))
    assert not prefers_big_solution(CoreUsage(1, 1), CoreUsage(1, 1))
    assert prefers_big_solution(CoreUsage(1, 2), CoreUsage(2, 1))


def test_choose_best_solution_validity(c1):
    good = (Stage(1, 2, 1, BIG), Stage(3, 4, 2, LITTLE))
    bad = (Stage(1, 4, 1, LITTLE),)
    assert choose_best_solution(c1, good, bad, 1, 2, 8) == good
    assert choose_best_solution(c1, bad, good, 1, 2, 8) == good
    assert choose_best_solution(c1, bad, None, 1, 2, 8) is None
    assert choose_best_solution(c1, good, good, 1, 2, 8) == good


def test_twocatac_all_sequential_matches_fertac():
    ch = TaskChain.from_weights([3, 5, 2, 7], [6, 9, 4, 8], [False] * 4)
    plat = Platform(2, 4)
    assert twocatac_schedule(ch, plat).period == fertac_schedule(ch, plat).period


def test_twocatac_budget():
    ch = TaskChain.from_weights([5] * 12, [9] * 12, [True, False] * 6)
    with pytest.raises(BudgetExceeded):
        twocatac_compute_solution(ch, 1, 6, 6, 10, budget=3)


@settings(max_examples=150, deadline=None)
@given(chains(max_n=8), platforms(max_total=5))
def test_twocatac_valid_and_bounded_by_herad(chain, bl):
    plat = Platform(*bl)
    sol = twocatac_schedule(chain, plat)
    assert is_resource_valid(sol, plat)
    assert sol.period >= herad_schedule(chain, plat).period


# -- baselines ------------------------------------------------------------------------

def test_otac_all_replicable_uses_one_stage():
    ch = TaskChain.from_weights([3, 4, 5], [6, 8, 10], [True] * 3)
    sol = otac_schedule(ch, Platform(0, 4), LITTLE)
    assert sol.stages == (Stage(1, 3, 4, LITTLE),)
    assert sol.period == 6


def test_otac_needs_cores_of_the_type(c1):
    with pytest.raises(ValueError):
        otac_schedule(c1, Platform(0, 2), BIG)


@settings(max_examples=80, deadline=None)
@given(chains(max_n=7), platforms(max_total=4))
def test_otac_matches_oracle_and_bounds_herad(chain, bl):
    plat = Platform(*bl)
    h = herad_schedule(chain, plat).period
    for v in (BIG, LITTLE):
        if plat.count(v) == 0:
            continue
        sol = otac_schedule(chain, plat, v)
        assert all(s.core_type == v for s in sol.stages)
        assert sol.period >= h
        homo = Platform(plat.big, 0) if v == BIG else Platform(0, plat.little)
        assert sol.period == brute_force(chain, homo).min_period


def test_os_style_thread_counts(c1):
    assert thread_count(os_style_decomposition(c1, 3)) == 3 * 3 + 1
    for f in (1, 2, 3):
        sol = os_style_decomposition(c1, f)
        assert len(sol) == c1.n
        assert thread_count(sol) == c1.n + (f - 1) * c1.replicable_count


def test_os_style_rejects_zero_factor(c1):
    with pytest.raises(ValueError):
        os_style_decomposition(c1, 0)


# -- registry -------------------------------------------------------------------------

def test_every_strategy_runs(c1):
    for name in STRATEGY_NAMES:
        sol = run_strategy(name, c1, Platform(2, 2))
        check_tiling(c1, sol.stages)


def test_unknown_strategy(c1):
    with pytest.raises(ValueError):
        run_strategy("heft", c1, Platform(1, 1))


def test_infeasible_is_reported(monkeypatch, c1):
    import chainsched.strategies as mod

    monkeypatch.setattr(mod, "fertac_schedule", lambda c, p: None)
    with pytest.raises(InfeasibleSchedule):
        run_strategy("fertac", c1, Platform(1, 1))


def test_fractional_targets_are_exact():
    ch = TaskChain.from_weights([Fraction(1, 3), Fraction(2, 7)], [1, 1], [True, True])
    sol = fertac_schedule(ch, Platform(2, 0))
    assert is_valid(ch, sol.stages, 2, 0, sol.period)

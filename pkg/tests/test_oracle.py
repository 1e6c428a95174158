from fractions import Fraction

import pytest
from hypothesis import given, settings

from chainsched.model import BIG, LITTLE, Platform, TaskChain, check_tiling, is_resource_valid
from chainsched.oracle import InstanceTooLarge, brute_force

from conftest import chains, platforms


def test_c1_both_orders(c1):
    assert brute_force(c1, Platform(1, 2)).min_period == 8
    assert brute_force(c1, Platform(1, 2), reverse=True).min_period == 8


def test_single_sequential_task():
    ch = TaskChain.from_weights([6], [4], [False])
    res = brute_force(ch, Platform(1, 1))
    assert res.min_period == 4
    assert any(w.stages[0].core_type == LITTLE for w in res.witnesses)


def test_two_replicable_tasks_on_two_little():
    ch = TaskChain.from_weights([1, 1], [3, 5], [True, True])
    # options: (3 | 5) -> 5, or one stage on 2 cores -> 4
    assert brute_force(ch, Platform(0, 2)).min_period == 4


def test_usage_is_lexicographic_minimum(c1):
    res = brute_force(c1, Platform(2, 2))
    usages = [(w.big_used, w.big_used + w.little_used) for w in res.witnesses]
    assert res.best_usage == min(usages) or res.witness_count > len(res.witnesses)
    assert res.to_dict()["min_period_exact"] == str(res.min_period)


def test_guard():
    ch = TaskChain.from_weights([1] * 13, [1] * 13, [True] * 13)
    with pytest.raises(InstanceTooLarge):
        brute_force(ch, Platform(1, 1))
    with pytest.raises(InstanceTooLarge):
        brute_force(TaskChain.from_weights([1], [1], [True]), Platform(4, 3))


@settings(max_examples=150, deadline=None)
@given(chains(max_n=7), platforms(max_total=4))
def test_order_independent_and_witnesses_valid(chain, bl):
    plat = Platform(*bl)
    fwd = brute_force(chain, plat)
    rev = brute_force(chain, plat, reverse=True)
    assert fwd.min_period == rev.min_period
    assert fwd.best_usage == rev.best_usage
    for w in fwd.witnesses:
        check_tiling(chain, w.stages)
        assert is_resource_valid(w, plat)
        assert w.period == fwd.min_period

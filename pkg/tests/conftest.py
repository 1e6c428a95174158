from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from chainsched.model import BIG, LITTLE, TaskChain, stage_weight


@pytest.fixture
def c1() -> TaskChain:
    return TaskChain.from_weights([4, 2, 6, 2], [8, 4, 12, 4], [True, False, True, True], name="C1")


def scan_max_packing(chain, start, cores, core_type, target):
    """Independent reference: try every end index with the model's stage weight."""
    best = start
    for e in range(start, chain.n + 1):
        if stage_weight(chain, start, e, cores, core_type) <= target:
            best = e
    return best


@st.composite
def chains(draw, min_n=1, max_n=8, max_w=50):
    n = draw(st.integers(min_n, max_n))
    wb = draw(st.lists(st.integers(1, max_w), min_size=n, max_size=n))
    factor = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    rep = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return TaskChain.from_weights(wb, [w * f for w, f in zip(wb, factor)], rep)


@st.composite
def platforms(draw, max_total=4):
    total = draw(st.integers(1, max_total))
    b = draw(st.integers(0, total))
    return b, total - b


def as_fraction(x) -> Fraction:
    return Fraction(x)


CORE_TYPES = (BIG, LITTLE)

"""FERTAC: build every stage on little cores, fall back to big cores only when needed."""
from __future__ import annotations

from typing import Optional

from .core import SearchBounds, StageBuilder, schedule
from .model import BIG, LITTLE, Platform, Solution, Stage, TaskChain


def fertac_compute_solution(
    chain: TaskChain, start: int, big_left: int, little_left: int, target
) -> Optional[tuple[Stage, ...]]:
    """Greedy partial solution for tasks ``start..n`` at a fixed target period.

    The stage recursion is tail-positioned, so it runs as a loop here.
    """
    builder = StageBuilder(chain, target)
    n = chain.n
    b, l = big_left, little_left
    s = start
    stages = []
    while True:
        e, u = builder.stage(s, l, LITTLE)
        v = LITTLE
        if not builder.valid(s, e, u, v, b, l):
            e, u = builder.stage(s, b, BIG)
            v = BIG
            if not builder.valid(s, e, u, v, b, l):
                return None
        stages.append(Stage(s, e, u, v))
        if e == n:
            return tuple(stages)
        if v == BIG:
            b -= u
        else:
            l -= u
        s = e + 1


def fertac_schedule(chain: TaskChain, platform: Platform) -> Optional[Solution]:
    bounds = SearchBounds.for_chain(chain, platform.big, platform.little)
    return schedule(chain, platform.big, platform.little, fertac_compute_solution, bounds)

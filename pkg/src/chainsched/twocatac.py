"""2CATAC: try both core types at every stage boundary and keep the better full solution."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import SearchBounds, StageBuilder, is_valid, schedule
from .model import BIG, LITTLE, Platform, Solution, Stage, TaskChain, core_usage

DEFAULT_BUDGET = 2**22


class BudgetExceeded(RuntimeError):
    """The recursion expanded more nodes than its budget allows."""

    def __init__(self, budget: int):
        super().__init__(f"2CATAC expansion budget of {budget} nodes exceeded")
        self.budget = budget


@dataclass(frozen=True)
class CoreUsage:
    big_used: int
    little_used: int

    @property
    def total(self) -> int:
        return self.big_used + self.little_used


def prefers_big_solution(usage_big: CoreUsage, usage_little: CoreUsage) -> bool:
    """Usage comparison between two valid candidates; ``False`` keeps the little-first one."""
    bb, bl = usage_big.big_used, usage_big.little_used
    lb, ll = usage_little.big_used, usage_little.little_used
    if bl > ll and bb < lb:
        return True
    if bl < ll and bb > lb:
        return False
    return bb + bl < lb + ll


def choose_best_solution(chain: TaskChain, sol_big, sol_little, big_left: int, little_left: int, target):
    """Pick between two candidate stage lists (either may be ``None``)."""
    big_ok = is_valid(chain, sol_big, big_left, little_left, target)
    little_ok = is_valid(chain, sol_little, big_left, little_left, target)
    if big_ok and little_ok:
        ub = CoreUsage(*core_usage(sol_big))
        ul = CoreUsage(*core_usage(sol_little))
        return sol_big if prefers_big_solution(ub, ul) else sol_little
    if big_ok:
        return sol_big
    if little_ok:
        return sol_little
    return None


class _Search:
    # partial solutions are cons cells (stage, rest, big_used, little_used)
    # so combining is O(1); usage rides along for the comparison

    def __init__(self, chain: TaskChain, target, budget: int):
        self.builder = StageBuilder(chain, target)
        self.n = chain.n
        self.budget = budget
        self.expanded = 0

    def solve(self, s: int, b: int, l: int):
        self.expanded += 1
        if self.expanded > self.budget:
            raise BudgetExceeded(self.budget)
        builder = self.builder
        options = []
        for v in (BIG, LITTLE):
            r = b if v == BIG else l
            e, u = builder.stage(s, r, v)
            if not builder.valid(s, e, u, v, b, l):
                options.append(None)
                continue
            stage = Stage(s, e, u, v)
            ub, ul = (u, 0) if v == BIG else (0, u)
            if e == self.n:
                options.append((stage, None, ub, ul))
                continue
            rest = self.solve(e + 1, b - ub, l - ul)
            if rest is None:
                options.append(None)
            else:
                options.append((stage, rest, rest[2] + ub, rest[3] + ul))
        opt_b, opt_l = options
        if opt_b is not None and opt_l is not None:
            if prefers_big_solution(CoreUsage(opt_b[2], opt_b[3]), CoreUsage(opt_l[2], opt_l[3])):
                return opt_b
            return opt_l
        return opt_b if opt_b is not None else opt_l


def _unroll(cell) -> tuple[Stage, ...]:
    out = []
    while cell is not None:
        out.append(cell[0])
        cell = cell[1]
    return tuple(out)


def twocatac_compute_solution(
    chain: TaskChain, start: int, big_left: int, little_left: int, target, budget: int = DEFAULT_BUDGET
) -> Optional[tuple[Stage, ...]]:
    search = _Search(chain, target, budget)
    found = search.solve(start, big_left, little_left)
    return None if found is None else _unroll(found)


def twocatac_schedule(chain: TaskChain, platform: Platform, budget: int = DEFAULT_BUDGET) -> Optional[Solution]:
    """Binary search with the two-choice recursion.

    ``budget`` caps the recursion size of each target probe; :class:`BudgetExceeded`
    propagates to the caller.
    """

    def compute(ch, start, b, l, target):
        return twocatac_compute_solution(ch, start, b, l, target, budget)

    bounds = SearchBounds.for_chain(chain, platform.big, platform.little)
    return schedule(chain, platform.big, platform.little, compute, bounds)

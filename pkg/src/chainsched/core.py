"""Binary search on the target period and greedy stage construction.

Shared by FERTAC, 2CATAC and the homogeneous OTAC baselines. Targets are
handled as a scaled integer fraction ``(num, den)`` so that every comparison
against interval sums is exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .model import BIG, LITTLE, Solution, Stage, TaskChain, core_usage, period

StageList = tuple[Stage, ...]
ComputeSolution = Callable[[TaskChain, int, int, int, Fraction], Optional[StageList]]


@dataclass(frozen=True)
class SearchBounds:
    p_min: Fraction
    p_max: Fraction
    epsilon: Fraction

    @classmethod
    def for_chain(cls, chain: TaskChain, big: int, little: int) -> "SearchBounds":
        """Heterogeneous bounds: lower bound from big weights, slack from the largest little weight."""
        cores = big + little
        p_min = _lower_bound(chain, cores, BIG)
        w_max = max(t.weight_little for t in chain.tasks)
        return cls(p_min, p_min + w_max, Fraction(1, cores))

    @classmethod
    def homogeneous(cls, chain: TaskChain, cores: int, core_type: str) -> "SearchBounds":
        p_min = _lower_bound(chain, cores, core_type)
        w_max = max(t.weight(core_type) for t in chain.tasks)
        return cls(p_min, p_min + w_max, Fraction(1, cores))


def _lower_bound(chain: TaskChain, cores: int, core_type: str) -> Fraction:
    total = chain.interval_sum(1, chain.n, core_type)
    seq = [t.weight(core_type) for t in chain.tasks if not t.replicable]
    return max(total / cores, max(seq, default=Fraction(0)))


@dataclass(frozen=True)
class StageResult:
    last: int
    cores_used: int


def scaled_target(chain: TaskChain, target) -> tuple[int, int]:
    t = Fraction(target) * chain.scale
    return t.numerator, t.denominator


# -- integer kernels ---------------------------------------------------------
# pre: prefix sums of one core type; nxt: chain.next_sequential; (pn, pd): scaled target.

def _fits(pre, nxt, s, e, c, pn, pd) -> bool:
    if c < 1:
        return False
    mult = c if nxt[s] > e else 1
    return (pre[e] - pre[s - 1]) * pd <= pn * mult


def _max_packing(pre, nxt, n, s, c, pn, pd) -> int:
    if c < 1:
        return s
    rep_end = nxt[s] - 1
    base = pre[s - 1]
    best = s
    # stage weight is non-decreasing in e, so stop at the first miss
    for e in range(s, n + 1):
        mult = c if e <= rep_end else 1
        if (pre[e] - base) * pd <= pn * mult:
            best = e
        else:
            break
    return best


def _required_cores(pre, s, e, pn, pd) -> int:
    return -(-(pre[e] - pre[s - 1]) * pd // pn)


def _compute_stage(pre, nxt, n, s, c, pn, pd) -> tuple[int, int]:
    e = _max_packing(pre, nxt, n, s, 1, pn, pd)
    u = _required_cores(pre, s, e, pn, pd)
    if e != n and nxt[s] > e:
        e = nxt[s] - 1
        u = _required_cores(pre, s, e, pn, pd)
        if u > c:
            e = _max_packing(pre, nxt, n, s, c, pn, pd)
            # the shrunk stage may need fewer than all c cores
            u = min(c, _required_cores(pre, s, e, pn, pd))
        elif e != n and u > 1:
            # leaving one core to the next stage; skipped for u == 1 (a 0-core stage is never valid)
            f = _max_packing(pre, nxt, n, s, u - 1, pn, pd)
            # f == s may be the forced minimum of max_packing; only shrink to a stage that fits
            if _fits(pre, nxt, s, f, u - 1, pn, pd) and _required_cores(pre, f + 1, e + 1, pn, pd) == 1:
                e, u = f, u - 1
    return e, u


# -- public surface -------------------------------------------------------------

def max_packing(chain: TaskChain, start: int, cores: int, core_type: str, target) -> int:
    """Largest ``e >= start`` whose stage ``[start, e]`` fits ``target`` on ``cores`` cores (at least ``start``)."""
    pn, pd = scaled_target(chain, target)
    return _max_packing(chain.prefix[core_type], chain.next_sequential, chain.n, start, cores, pn, pd)


def required_cores(chain: TaskChain, start: int, end: int, core_type: str, target) -> int:
    pn, pd = scaled_target(chain, target)
    if pn <= 0:
        raise ValueError("target period must be positive")
    return _required_cores(chain.prefix[core_type], start, end, pn, pd)


def is_rep(chain: TaskChain, start: int, end: int) -> bool:
    return chain.is_rep(start, end)


def final_rep_task(chain: TaskChain, start: int, end: int) -> int:
    """Largest ``i >= end`` such that ``[start, i]`` holds only replicable tasks.

    Returns ``end`` when ``[start, end]`` itself is not replicable (no such ``i``).
    """
    nxt = chain.next_sequential[start]
    return max(end, nxt - 1)


def compute_stage(chain: TaskChain, start: int, cores_available: int, core_type: str, target) -> StageResult:
    pn, pd = scaled_target(chain, target)
    e, u = _compute_stage(chain.prefix[core_type], chain.next_sequential, chain.n, start, cores_available, pn, pd)
    return StageResult(e, u)


def stage_fits(chain: TaskChain, stage: Stage, target) -> bool:
    pn, pd = scaled_target(chain, target)
    return _fits(chain.prefix[stage.core_type], chain.next_sequential, stage.first, stage.last, stage.cores, pn, pd)


def is_valid(chain: TaskChain, stages: Optional[Sequence[Stage]], big: int, little: int, target) -> bool:
    """Non-empty, every stage within ``target``, and core sums within budget."""
    if not stages:
        return False
    b, l = core_usage(stages)
    if b > big or l > little:
        return False
    return all(stage_fits(chain, s, target) for s in stages)


class StageBuilder:
    """Per-target cache of the integer data ``compute_stage`` needs.

    Strategies build one per binary-search iteration and call :meth:`stage`
    many times for the same target.
    """

    __slots__ = ("n", "nxt", "pre", "pn", "pd", "target")

    def __init__(self, chain: TaskChain, target):
        self.n = chain.n
        self.nxt = chain.next_sequential
        self.pre = chain.prefix
        self.target = Fraction(target)
        self.pn, self.pd = scaled_target(chain, self.target)

    def stage(self, s: int, cores: int, v: str) -> tuple[int, int]:
        return _compute_stage(self.pre[v], self.nxt, self.n, s, cores, self.pn, self.pd)

    def valid(self, s: int, e: int, u: int, v: str, big: int, little: int) -> bool:
        if u > (big if v == BIG else little):
            return False
        return _fits(self.pre[v], self.nxt, s, e, u, self.pn, self.pd)


def schedule(
    chain: TaskChain,
    big: int,
    little: int,
    compute_solution: ComputeSolution,
    bounds: SearchBounds | None = None,
    trace: list | None = None,
) -> Optional[Solution]:
    """Binary search for the smallest target period ``compute_solution`` can meet.

    ``trace``, when given, receives one ``(target, accepted)`` pair per iteration.
    """
    if big + little < 1:
        raise ValueError("platform needs at least one core")
    if bounds is None:
        bounds = SearchBounds.for_chain(chain, big, little)
    p_min, p_max, eps = bounds.p_min, bounds.p_max, bounds.epsilon
    best = _bisect(chain, big, little, compute_solution, p_min, p_max, eps, trace)
    # big-weight bounds can sit below every period reachable without big cores;
    # only then widen the window (doubling) until a target succeeds
    widen = 0
    while best is None and widen < 64:
        p_min, p_max = p_max, 2 * p_max
        best = _bisect(chain, big, little, compute_solution, p_min, p_max, eps, trace)
        widen += 1
    return best


def _bisect(chain, big, little, compute_solution, p_min, p_max, eps, trace):
    best = None
    while p_max - p_min >= eps:
        p_mid = (p_max + p_min) / 2
        stages = compute_solution(chain, 1, big, little, p_mid)
        ok = is_valid(chain, stages, big, little, p_mid)
        if trace is not None:
            trace.append((p_mid, ok))
        if ok:
            best = Solution.build(chain, stages)
            p_max = best.period
        else:
            p_min = p_mid
    return best


__all__ = [
    "BIG",
    "LITTLE",
    "SearchBounds",
    "StageResult",
    "StageBuilder",
    "compute_stage",
    "final_rep_task",
    "is_rep",
    "is_valid",
    "max_packing",
    "required_cores",
    "schedule",
    "stage_fits",
]

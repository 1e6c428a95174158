"""Homogeneous OTAC baselines and the thread-per-task decomposition."""
from __future__ import annotations

from typing import Optional

from .core import SearchBounds, StageBuilder, schedule
from .model import BIG, Platform, Solution, Stage, TaskChain, check_core_type


def otac_compute_solution(chain: TaskChain, start: int, cores: int, core_type: str, target):
    """Greedy stages on a single core type with ``cores`` cores in total."""
    builder = StageBuilder(chain, target)
    budget = (cores, 0) if core_type == BIG else (0, cores)
    left = cores
    s = start
    stages = []
    while True:
        e, u = builder.stage(s, left, core_type)
        if not builder.valid(s, e, u, core_type, *budget):
            return None
        stages.append(Stage(s, e, u, core_type))
        if e == chain.n:
            return tuple(stages)
        left -= u
        budget = (left, 0) if core_type == BIG else (0, left)
        s = e + 1


def otac_schedule(chain: TaskChain, platform: Platform, core_type: str) -> Optional[Solution]:
    check_core_type(core_type)
    cores = platform.count(core_type)
    if cores < 1:
        raise ValueError(f"platform has no {'big' if core_type == BIG else 'little'} cores")
    big, little = (cores, 0) if core_type == BIG else (0, cores)

    def compute(ch, start, b, l, target):
        return otac_compute_solution(ch, start, cores, core_type, target)

    return schedule(chain, big, little, compute, SearchBounds.homogeneous(chain, cores, core_type))


def os_style_decomposition(chain: TaskChain, replication_factor: int = 1, core_type: str = BIG) -> Solution:
    """One stage per task; replicable tasks get ``replication_factor`` threads.

    The result ignores platform limits on purpose: an OS scheduler oversubscribes.
    """
    if replication_factor < 1:
        raise ValueError("replication factor must be at least 1")
    check_core_type(core_type)
    stages = [
        Stage(t.id, t.id, replication_factor if t.replicable else 1, core_type) for t in chain.tasks
    ]
    return Solution.build(chain, stages)


def thread_count(solution: Solution) -> int:
    return sum(s.cores for s in solution.stages)


__all__ = ["otac_compute_solution", "otac_schedule", "os_style_decomposition", "thread_count"]

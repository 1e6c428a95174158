"""Name-based access to every scheduler."""
from __future__ import annotations

from typing import Callable

from .baselines import os_style_decomposition, otac_schedule
from .fertac import fertac_schedule
from .herad import herad_schedule
from .model import BIG, LITTLE, Platform, Solution, TaskChain
from .twocatac import DEFAULT_BUDGET, twocatac_schedule

HETEROGENEOUS = ("fertac", "twocatac", "herad")
HOMOGENEOUS = ("otac-b", "otac-l")
OS_STYLE = ("os-r1", "os-r2", "os-r3")
STRATEGY_NAMES = HETEROGENEOUS + HOMOGENEOUS + OS_STYLE


class InfeasibleSchedule(RuntimeError):
    pass


def get_strategy(name: str, budget: int = DEFAULT_BUDGET) -> Callable[[TaskChain, Platform], Solution]:
    """Callable ``(chain, platform) -> Solution``; raises :class:`InfeasibleSchedule` on failure."""
    table: dict[str, Callable] = {
        "fertac": fertac_schedule,
        "twocatac": lambda c, p: twocatac_schedule(c, p, budget),
        "herad": herad_schedule,
        "otac-b": lambda c, p: otac_schedule(c, p, BIG),
        "otac-l": lambda c, p: otac_schedule(c, p, LITTLE),
        # thread-per-task, placed on big cores when the platform has any
        "os-r1": lambda c, p: os_style_decomposition(c, 1, BIG if p.big else LITTLE),
        "os-r2": lambda c, p: os_style_decomposition(c, 2, BIG if p.big else LITTLE),
        "os-r3": lambda c, p: os_style_decomposition(c, 3, BIG if p.big else LITTLE),
    }
    try:
        fn = table[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}") from None

    def run(chain: TaskChain, platform: Platform) -> Solution:
        sol = fn(chain, platform)
        if sol is None:
            raise InfeasibleSchedule(f"{name} found no valid schedule")
        return sol

    return run


def run_strategy(name: str, chain: TaskChain, platform: Platform, budget: int = DEFAULT_BUDGET) -> Solution:
    return get_strategy(name, budget)(chain, platform)


__all__ = ["STRATEGY_NAMES", "HETEROGENEOUS", "HOMOGENEOUS", "OS_STYLE", "InfeasibleSchedule", "get_strategy", "run_strategy"]

"""Throughput-optimal pipelined and replicated schedules for task chains on big/little multicores."""
from __future__ import annotations

__version__ = "0.1.0"

from .model import (
    BIG,
    LITTLE,
    ChainError,
    Cluster,
    Platform,
    Solution,
    Stage,
    Task,
    TaskChain,
    TilingError,
    core_usage,
    is_resource_valid,
    period,
    stage_weight,
)
from .core import SearchBounds, StageResult, compute_stage, max_packing, required_cores, schedule
from .fertac import fertac_compute_solution, fertac_schedule
from .twocatac import BudgetExceeded, CoreUsage, choose_best_solution, twocatac_compute_solution, twocatac_schedule
from .herad import SolutionMatrix, herad_period, herad_schedule, merge_replicable_stages
from .baselines import os_style_decomposition, otac_schedule
from .oracle import OracleResult, brute_force
from .synth import GenSpec, generate
from .sim import SimConfig, SimReport, buffer_plan, simulate
from .pinning import PinMap, pin
from .strategies import STRATEGY_NAMES, run_strategy
from .fixtures import list_fixtures, load_fixture
from .estimators import FERTACScheduler, HeRADScheduler, OTACScheduler, TwoCATACScheduler

__all__ = [
    "BIG", "LITTLE", "ChainError", "Cluster", "Platform", "Solution", "Stage", "Task", "TaskChain", "TilingError",
    "core_usage", "is_resource_valid", "period", "stage_weight",
    "SearchBounds", "StageResult", "compute_stage", "max_packing", "required_cores", "schedule",
    "fertac_compute_solution", "fertac_schedule",
    "BudgetExceeded", "CoreUsage", "choose_best_solution", "twocatac_compute_solution", "twocatac_schedule",
    "SolutionMatrix", "herad_period", "herad_schedule", "merge_replicable_stages",
    "os_style_decomposition", "otac_schedule",
    "OracleResult", "brute_force",
    "GenSpec", "generate",
    "SimConfig", "SimReport", "buffer_plan", "simulate",
    "PinMap", "pin",
    "STRATEGY_NAMES", "run_strategy",
    "list_fixtures", "load_fixture",
    "FERTACScheduler", "HeRADScheduler", "OTACScheduler", "TwoCATACScheduler",
]

"""Estimator-style wrappers around the schedulers.

``fit(X)`` takes one chain and stores the schedule in trailing-underscore
attributes; ``labels_`` gives the stage index of every task, like a
clustering of the chain into stages.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .baselines import otac_schedule
from .fertac import fertac_schedule
from .herad import herad_schedule
from .model import BIG, ChainError, Platform, Solution, TaskChain, check_core_type
from .twocatac import DEFAULT_BUDGET, twocatac_schedule


def check_chain(X) -> TaskChain:
    """Coerce a TaskChain, a chain JSON dict, or an ``(n, 3)`` array of ``[wb, wl, rep]`` rows."""
    if isinstance(X, TaskChain):
        return X
    if isinstance(X, dict):
        return TaskChain.from_dict(X)
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
        raise ChainError(f"expected an (n, 3) array of [wb, wl, rep] rows, got shape {arr.shape}")
    rows = arr.tolist()
    for i, (wb, wl, rep) in enumerate(rows, start=1):
        if any(isinstance(w, float) and not np.isfinite(w) for w in (wb, wl)):
            raise ChainError(f"row {i}: weights must be finite")
        if rep not in (0, 1, True, False):
            raise ChainError(f"row {i}: replicable flag must be boolean, got {rep!r}")
    return TaskChain.from_weights([r[0] for r in rows], [r[1] for r in rows], [bool(r[2]) for r in rows])


def check_platform(big, little) -> Platform:
    for name, v in (("big", big), ("little", little)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ChainError(f"{name} must be an integer core count, got {v!r}")
    return Platform(int(big), int(little))


class _Scheduler(BaseEstimator):
    def _schedule(self, chain: TaskChain) -> Solution:
        raise NotImplementedError

    def fit(self, X, y=None):
        chain = check_chain(X)
        sol = self._schedule(chain)
        if sol is None:
            raise ChainError("no valid schedule for this chain and platform")
        self.chain_ = chain
        self.solution_ = sol
        self.period_: Fraction = sol.period
        self.labels_ = np.asarray(sol.labels(), dtype=int)
        self.core_usage_ = sol.usage
        self.n_stages_ = len(sol)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def score(self, X=None, y=None) -> float:
        """Throughput in streams per time unit; higher is better."""
        if not hasattr(self, "period_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")
        if X is not None:
            return float(1 / self._schedule(check_chain(X)).period)
        return float(1 / self.period_)


class HeRADScheduler(_Scheduler):
    def __init__(self, big: int = 1, little: int = 1, merge: bool = True):
        self.big = big
        self.little = little
        self.merge = merge

    def _schedule(self, chain):
        return herad_schedule(chain, check_platform(self.big, self.little), merge=self.merge)


class FERTACScheduler(_Scheduler):
    def __init__(self, big: int = 1, little: int = 1):
        self.big = big
        self.little = little

    def _schedule(self, chain):
        return fertac_schedule(chain, check_platform(self.big, self.little))


class TwoCATACScheduler(_Scheduler):
    def __init__(self, big: int = 1, little: int = 1, budget: int = DEFAULT_BUDGET):
        self.big = big
        self.little = little
        self.budget = budget

    def _schedule(self, chain):
        return twocatac_schedule(chain, check_platform(self.big, self.little), self.budget)


class OTACScheduler(_Scheduler):
    """Single core type; ``cores`` of type ``core_type`` ('B' or 'L')."""

    def __init__(self, cores: int = 1, core_type: str = BIG):
        self.cores = cores
        self.core_type = core_type

    def _schedule(self, chain):
        v = check_core_type(self.core_type)
        plat = check_platform(self.cores, 0) if v == BIG else check_platform(0, self.cores)
        return otac_schedule(chain, plat, v)


__all__ = [
    "FERTACScheduler",
    "HeRADScheduler",
    "OTACScheduler",
    "TwoCATACScheduler",
    "check_chain",
    "check_platform",
]

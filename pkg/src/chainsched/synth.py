"""Seeded synthetic chains.

Randomness comes from numpy's ``PCG64`` bit generator seeded with the GenSpec's
64-bit ``seed``. Draw order per chain is fixed: big weights (``integers``),
then slowdown factors (``uniform``), then replicable positions (``choice``
without replacement). Any PCG64 implementation that replays these calls
reproduces a corpus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import TaskChain


@dataclass(frozen=True)
class GenSpec:
    n_tasks: int
    stateless_ratio: float
    seed: int = 0
    weight_range: tuple[int, int] = (1, 100)
    slowdown_range: tuple[float, float] = (1.0, 5.0)

    def __post_init__(self):
        if self.n_tasks < 1:
            raise ValueError("n_tasks must be positive")
        if not 0.0 <= self.stateless_ratio <= 1.0:
            raise ValueError("stateless_ratio must lie in [0, 1]")
        lo, hi = self.weight_range
        if not (1 <= lo <= hi):
            raise ValueError("weight_range must be a non-empty interval of positive integers")
        slo, shi = self.slowdown_range
        if not (1.0 <= slo <= shi):
            raise ValueError("slowdown_range must be a non-empty interval with lower end >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def replicable_count(self) -> int:
        # half-up rounding, so 0.5 * odd n is deterministic across languages
        return int(math.floor(self.n_tasks * self.stateless_ratio + 0.5))


def generate(spec: GenSpec) -> TaskChain:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n = spec.n_tasks
    lo, hi = spec.weight_range
    wb = rng.integers(lo, hi, size=n, endpoint=True)
    slow = rng.uniform(spec.slowdown_range[0], spec.slowdown_range[1], size=n)
    wl = np.maximum(np.ceil(wb * slow), wb)
    rep = np.zeros(n, dtype=bool)
    k = spec.replicable_count
    if k:
        rep[rng.choice(n, size=k, replace=False)] = True
    name = f"synth-n{n}-sr{spec.stateless_ratio:g}-s{spec.seed}"
    return TaskChain.from_weights([int(x) for x in wb], [int(x) for x in wl], [bool(x) for x in rep], name)


def corpus_seeds(base_seed: int, count: int) -> list[int]:
    """``count`` independent 64-bit seeds derived from ``base_seed`` via numpy's SeedSequence."""
    state = np.random.SeedSequence(base_seed).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


def corpus(n_tasks: int, stateless_ratio: float, count: int, base_seed: int = 0, **kw) -> list[GenSpec]:
    return [GenSpec(n_tasks, stateless_ratio, s, **kw) for s in corpus_seeds(base_seed, count)]


__all__ = ["GenSpec", "generate", "corpus", "corpus_seeds"]

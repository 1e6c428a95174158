"""Task chains, platforms, stages and solutions.

Weights are kept as exact :class:`fractions.Fraction` values. Every chain also
carries an integer view of its weights (scaled by the lcm of the weight
denominators) that the schedulers use for fast exact comparisons.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

BIG = "B"
LITTLE = "L"
CORE_TYPES = (BIG, LITTLE)
INF = math.inf


class ChainError(ValueError):
    """Malformed chain, platform or solution input."""


class TilingError(ChainError):
    """A solution does not cover the chain with contiguous stages."""


def to_fraction(value) -> Fraction:
    # floats go through their shortest repr so 193.4 stays 967/5
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def check_core_type(v: str) -> str:
    if v not in CORE_TYPES:
        raise ChainError(f"core type must be 'B' or 'L', got {v!r}")
    return v


@dataclass(frozen=True)
class Task:
    id: int
    weight_big: Fraction
    weight_little: Fraction
    replicable: bool
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "weight_big", to_fraction(self.weight_big))
        object.__setattr__(self, "weight_little", to_fraction(self.weight_little))
        if self.weight_big <= 0 or self.weight_little <= 0:
            raise ChainError(f"task {self.id}: weights must be strictly positive")

    def weight(self, core_type: str) -> Fraction:
        return self.weight_big if core_type == BIG else self.weight_little


@dataclass(frozen=True)
class TaskChain:
    tasks: tuple[Task, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        if not self.tasks:
            raise ChainError("a chain needs at least one task")
        for pos, task in enumerate(self.tasks, start=1):
            if task.id != pos:
                raise ChainError(f"task ids must be 1..n without gaps (position {pos} has id {task.id})")

    @classmethod
    def from_weights(cls, big: Sequence, little: Sequence, replicable: Sequence[bool], name: str = "") -> "TaskChain":
        if not (len(big) == len(little) == len(replicable)):
            raise ChainError("weight and flag sequences must have equal length")
        tasks = [Task(i + 1, wb, wl, bool(rep)) for i, (wb, wl, rep) in enumerate(zip(big, little, replicable))]
        return cls(tuple(tasks), name)

    def __len__(self) -> int:
        return len(self.tasks)

    @property
    def n(self) -> int:
        return len(self.tasks)

    def task(self, i: int) -> Task:
        """1-based access."""
        return self.tasks[i - 1]

    @cached_property
    def scale(self) -> int:
        return math.lcm(*(w.denominator for t in self.tasks for w in (t.weight_big, t.weight_little)))

    @cached_property
    def int_weights(self) -> dict[str, tuple[int, ...]]:
        s = self.scale
        return {
            BIG: tuple(int(t.weight_big * s) for t in self.tasks),
            LITTLE: tuple(int(t.weight_little * s) for t in self.tasks),
        }

    @cached_property
    def prefix(self) -> dict[str, tuple[int, ...]]:
        """Scaled-integer prefix sums; ``prefix[v][e] - prefix[v][c-1]`` sums tasks c..e."""
        out = {}
        for v, ws in self.int_weights.items():
            acc = [0]
            for w in ws:
                acc.append(acc[-1] + w)
            out[v] = tuple(acc)
        return out

    @cached_property
    def next_sequential(self) -> tuple[int, ...]:
        """``next_sequential[i]`` is the first sequential task index >= i (n+1 if none)."""
        n = self.n
        nxt = [n + 1] * (n + 2)
        for i in range(n, 0, -1):
            nxt[i] = i if not self.tasks[i - 1].replicable else nxt[i + 1]
        return tuple(nxt)

    @property
    def replicable_count(self) -> int:
        return sum(t.replicable for t in self.tasks)

    def interval_sum(self, first: int, last: int, core_type: str) -> Fraction:
        p = self.prefix[core_type]
        return Fraction(p[last] - p[first - 1], self.scale)

    def is_rep(self, first: int, last: int) -> bool:
        return self.next_sequential[first] > last

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tasks": [
                {"id": t.id, "wb": _num(t.weight_big), "wl": _num(t.weight_little), "rep": t.replicable}
                | ({"label": t.name} if t.name else {})
                for t in self.tasks
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TaskChain":
        try:
            tasks = tuple(
                Task(int(t["id"]), to_fraction(t["wb"]), to_fraction(t["wl"]), bool(t["rep"]), t.get("label", ""))
                for t in data["tasks"]
            )
        except (KeyError, TypeError) as exc:
            raise ChainError(f"bad chain document: {exc}") from exc
        return cls(tasks, data.get("name", ""))


def _num(x: Fraction):
    """JSON-friendly number: int when integral, else float (fixtures carry one decimal)."""
    if x.denominator == 1:
        return int(x)
    return float(x)


@dataclass(frozen=True)
class Cluster:
    core_type: str
    cores: tuple[int, ...]
    package: int = 0

    def __post_init__(self):
        check_core_type(self.core_type)
        object.__setattr__(self, "cores", tuple(self.cores))


@dataclass(frozen=True)
class Platform:
    big: int
    little: int
    topology: tuple[Cluster, ...] | None = None

    def __post_init__(self):
        if self.big < 0 or self.little < 0:
            raise ChainError("core counts must be non-negative")
        if self.big + self.little < 1:
            raise ChainError("platform needs at least one core")
        if self.topology is not None:
            object.__setattr__(self, "topology", tuple(self.topology))
            nb = sum(len(c.cores) for c in self.topology if c.core_type == BIG)
            nl = sum(len(c.cores) for c in self.topology if c.core_type == LITTLE)
            if (nb, nl) != (self.big, self.little):
                raise ChainError(f"topology has ({nb}, {nl}) cores but platform declares ({self.big}, {self.little})")
            ids = [i for c in self.topology for i in c.cores]
            if len(set(ids)) != len(ids):
                raise ChainError("core ids in topology must be unique")

    def count(self, core_type: str) -> int:
        return self.big if core_type == BIG else self.little

    def to_dict(self) -> dict:
        d = {"big": self.big, "little": self.little}
        if self.topology is not None:
            d["clusters"] = [
                {"type": c.core_type, "cores": list(c.cores), "package": c.package} for c in self.topology
            ]
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Platform":
        clusters = data.get("clusters")
        topo = None
        if clusters is not None:
            topo = tuple(Cluster(c["type"], tuple(c["cores"]), int(c.get("package", 0))) for c in clusters)
        if "big" in data or "little" in data:
            big, little = int(data.get("big", 0)), int(data.get("little", 0))
        elif topo is not None:
            big = sum(len(c.cores) for c in topo if c.core_type == BIG)
            little = sum(len(c.cores) for c in topo if c.core_type == LITTLE)
        else:
            raise ChainError("platform document needs 'big'/'little' or 'clusters'")
        return cls(big, little, topo)


@dataclass(frozen=True)
class Stage:
    first: int
    last: int
    cores: int
    core_type: str

    def __post_init__(self):
        check_core_type(self.core_type)
        if self.first > self.last:
            raise ChainError(f"stage [{self.first}, {self.last}] is empty")
        if self.first < 1:
            raise ChainError("task indices are 1-based")

    @property
    def size(self) -> int:
        return self.last - self.first + 1


def stage_weight(chain: TaskChain, first: int, last: int, cores: int, core_type: str):
    """Weight of tasks ``first..last`` on ``cores`` cores of one type.

    Returns a Fraction, or ``math.inf`` when ``cores`` is zero.
    """
    if not 1 <= first <= last <= chain.n:
        raise ChainError(f"interval [{first}, {last}] out of range for a chain of {chain.n} tasks")
    if cores < 1:
        return INF
    total = chain.interval_sum(first, last, core_type)
    if chain.is_rep(first, last):
        return total / cores
    return total


def check_tiling(chain: TaskChain, stages: Sequence[Stage]) -> None:
    if not stages:
        raise TilingError("solution has no stages")
    expected = 1
    for st in stages:
        if st.first != expected:
            raise TilingError(f"stage starting at {st.first} should start at {expected}")
        expected = st.last + 1
    if expected != chain.n + 1:
        raise TilingError(f"stages end at {expected - 1}, chain has {chain.n} tasks")


def period(chain: TaskChain, solution: "Solution | Sequence[Stage]"):
    stages = solution.stages if isinstance(solution, Solution) else tuple(solution)
    check_tiling(chain, stages)
    return max(stage_weight(chain, s.first, s.last, s.cores, s.core_type) for s in stages)


def core_usage(stages: Iterable[Stage]) -> tuple[int, int]:
    """(big cores, little cores) summed over the stages."""
    b = l = 0
    for s in stages:
        if s.core_type == BIG:
            b += s.cores
        else:
            l += s.cores
    return b, l


def is_resource_valid(solution: "Solution | Sequence[Stage]", platform: Platform) -> bool:
    stages = solution.stages if isinstance(solution, Solution) else solution
    b, l = core_usage(stages)
    return b <= platform.big and l <= platform.little


@dataclass(frozen=True)
class Solution:
    stages: tuple[Stage, ...]
    period: Fraction = field(compare=False)

    @classmethod
    def build(cls, chain: TaskChain, stages: Iterable[Stage]) -> "Solution":
        stages = tuple(stages)
        return cls(stages, period(chain, stages))

    @property
    def usage(self) -> tuple[int, int]:
        return core_usage(self.stages)

    @property
    def big_used(self) -> int:
        return self.usage[0]

    @property
    def little_used(self) -> int:
        return self.usage[1]

    def __len__(self) -> int:
        return len(self.stages)

    def labels(self) -> list[int]:
        """Stage index (0-based) of every task, in chain order."""
        out = []
        for k, s in enumerate(self.stages):
            out.extend([k] * s.size)
        return out

    def decomposition(self) -> list[tuple[int, int, str]]:
        """(tasks in stage, cores, type) triples, the compact form used in result tables."""
        return [(s.size, s.cores, s.core_type) for s in self.stages]

    def to_dict(self) -> dict:
        return {
            "period": float(self.period),
            "period_exact": str(self.period),
            "stages": [{"first": s.first, "last": s.last, "r": s.cores, "v": s.core_type} for s in self.stages],
        }

    @classmethod
    def from_dict(cls, data: dict, chain: TaskChain | None = None) -> "Solution":
        try:
            stages = tuple(Stage(int(s["first"]), int(s["last"]), int(s["r"]), s["v"]) for s in data["stages"])
        except (KeyError, TypeError) as exc:
            raise ChainError(f"bad solution document: {exc}") from exc
        if chain is not None:
            return cls.build(chain, stages)
        if "period_exact" in data:
            p = Fraction(data["period_exact"])
        else:
            p = to_fraction(data["period"])
        return cls(stages, p)


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None, **kw) -> str:
    text = json.dumps(obj, indent=2, **kw)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text

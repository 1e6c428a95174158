"""Thread-to-core maps for the loose, guided, packed and distant policies.

Threads are stage replicas numbered from 1 in stage order, replicas of a
stage consecutive. Only the map is computed; nothing touches the OS.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Optional

from .model import BIG, LITTLE, Cluster, Platform, Solution

POLICIES = ("loose", "guided", "packed", "distant")


class PinCapacityError(ValueError):
    pass


@dataclass(frozen=True)
class ThreadPin:
    thread: int
    stage: int
    replica: int
    core_type: str
    cores: Optional[tuple[int, ...]]  # None means any core

    @property
    def core(self) -> int:
        if self.cores is None or len(self.cores) != 1:
            raise ValueError(f"thread {self.thread} is not pinned to a single core")
        return self.cores[0]


@dataclass(frozen=True)
class PinMap:
    policy: str
    threads: tuple[ThreadPin, ...]

    def core_of(self, thread: int) -> int:
        return self.threads[thread - 1].core

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "threads": [
                {
                    "thread": t.thread,
                    "stage": t.stage,
                    "replica": t.replica,
                    "type": t.core_type,
                    "cores": "any" if t.cores is None else list(t.cores),
                }
                for t in self.threads
            ],
        }


def _threads(solution: Solution):
    tid = 0
    for k, st in enumerate(solution.stages, start=1):
        for rep in range(st.cores):
            tid += 1
            yield tid, k, rep, st.core_type


def packed_order(topology, core_type: str) -> list[int]:
    return sorted(c for cl in topology if cl.core_type == core_type for c in cl.cores)


def distant_order(topology, core_type: str) -> list[int]:
    """Clusters interleaved across packages, then round-robin over them taking the lowest free core."""
    clusters = [cl for cl in topology if cl.core_type == core_type]
    by_pkg = [
        [sorted(cl.cores) for cl in grp]
        for _, grp in groupby(sorted(clusters, key=lambda c: c.package), key=lambda c: c.package)
    ]
    # first cluster of every package, then every second one, and so on
    ring = [grp[k] for k in range(max(map(len, by_pkg), default=0)) for grp in by_pkg if k < len(grp)]
    order: list[int] = []
    while any(ring):
        for cores in ring:
            if cores:
                order.append(cores.pop(0))
    return order


def pin(solution: Solution, platform: Platform, policy: str) -> PinMap:
    if policy not in POLICIES:
        raise ValueError(f"unknown pinning policy {policy!r}; expected one of {', '.join(POLICIES)}")
    threads = list(_threads(solution))
    if policy == "loose":
        return PinMap(policy, tuple(ThreadPin(t, k, r, v, None) for t, k, r, v in threads))
    topo = platform.topology
    if topo is None:
        raise ValueError(f"policy {policy!r} needs a platform topology")
    for v in (BIG, LITTLE):
        need = sum(1 for *_, tv in threads if tv == v)
        have = sum(len(cl.cores) for cl in topo if cl.core_type == v)
        if need > have:
            raise PinCapacityError(f"{need} threads need {'big' if v == BIG else 'little'} cores, only {have} exist")
    if policy == "guided":
        sets = {v: tuple(packed_order(topo, v)) for v in (BIG, LITTLE)}
        return PinMap(policy, tuple(ThreadPin(t, k, r, v, sets[v]) for t, k, r, v in threads))
    order_fn = packed_order if policy == "packed" else distant_order
    queues = {v: iter(order_fn(topo, v)) for v in (BIG, LITTLE)}
    return PinMap(policy, tuple(ThreadPin(t, k, r, v, (next(queues[v]),)) for t, k, r, v in threads))


def core_distance(a: int, b: int) -> int:
    return abs(a - b)


def two_package_topology() -> Platform:
    """Two packages, each with a 2-core big cluster and a 2-core little cluster (ids 1..8)."""
    return Platform(
        4,
        4,
        (
            Cluster(BIG, (1, 2), 1),
            Cluster(LITTLE, (3, 4), 1),
            Cluster(BIG, (5, 6), 2),
            Cluster(LITTLE, (7, 8), 2),
        ),
    )


__all__ = [
    "POLICIES",
    "PinCapacityError",
    "PinMap",
    "ThreadPin",
    "core_distance",
    "distant_order",
    "packed_order",
    "pin",
    "two_package_topology",
]

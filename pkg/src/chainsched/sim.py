"""Discrete-event simulation of a pipelined, replicated schedule.

Model, in short:

* replica ``k`` of an ``r``-replica stage serves streams ``i`` with ``i % r == k``, in order;
* the link after stage ``j`` has ``B_j`` one-stream slots and stream ``i`` uses slot ``i % B_j``;
* a replica starts stream ``i`` once the stream sits in its input slot and its output slot
  is free; the input slot is released and the output slot reserved at start, and the
  output is filled at completion;
* processing time is the stage's 1-core weight on its core type;
* the source is unbounded and instantaneous, the sink drains slots in stream order.

Event times are exact fractions. Simultaneous starts are resolved by
(stage index, replica index).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .model import Platform, Solution, Stage, TaskChain, check_tiling, is_resource_valid


class SimulationDeadlock(RuntimeError):
    def __init__(self, link: str, time: Fraction, done: int):
        super().__init__(f"deadlock at t={time} after {done} streams: blocked on link {link}")
        self.link = link
        self.time = time
        self.done = done


def buffer_plan(solution: Solution | Sequence[int]) -> list[int]:
    """Slots per link between consecutive stages: lcm of the two replica counts."""
    reps = [s.cores for s in solution.stages] if isinstance(solution, Solution) else list(solution)
    return [math.lcm(a, b) for a, b in zip(reps, reps[1:])]


@dataclass(frozen=True)
class SimConfig:
    streams: int = 500
    buffers_per_link: int | tuple[int, ...] | None = None
    warmup_streams: int = 50

    def __post_init__(self):
        if not self.streams > self.warmup_streams >= 0:
            raise ValueError("need streams > warmup_streams >= 0")
        if isinstance(self.buffers_per_link, (list, tuple)):
            object.__setattr__(self, "buffers_per_link", tuple(int(b) for b in self.buffers_per_link))


@dataclass
class SimReport:
    measured_period: Fraction
    completion_order: list[int]
    per_stage_busy: list[Fraction]
    buffers: list[int]
    sync_links: list[int] = field(default_factory=list)
    completion_times: list[Fraction] = field(default_factory=list, repr=False)

    @property
    def ordered(self) -> bool:
        return self.completion_order == list(range(len(self.completion_order)))

    def to_dict(self) -> dict:
        return {
            "measured_period": float(self.measured_period),
            "measured_period_exact": str(self.measured_period),
            "completion_order_is_identity": self.ordered,
            "completion_order": self.completion_order,
            "per_stage_busy": [float(x) for x in self.per_stage_busy],
            "buffers": self.buffers,
            "sync_links": self.sync_links,
        }


def _resolve_buffers(cfg: SimConfig, k: int, reps: list[int]) -> list[int]:
    b = cfg.buffers_per_link
    if b is None:
        inner = buffer_plan(reps)
    elif isinstance(b, int):
        inner = [b] * (k - 1)
    else:
        inner = list(b)
    if len(inner) != k - 1:
        raise ValueError(f"expected {k - 1} link buffer counts, got {len(inner)}")
    if any(x < 1 for x in inner):
        raise ValueError("every link needs at least one buffer slot")
    return inner


def simulate(
    chain: TaskChain, solution: Solution, platform: Platform | None = None, config: SimConfig | None = None
) -> SimReport:
    cfg = config or SimConfig()
    stages = solution.stages
    check_tiling(chain, stages)
    if platform is not None and not is_resource_valid(solution, platform):
        raise ValueError("solution exceeds the platform's cores")
    K = len(stages)
    N = cfg.streams
    reps = [s.cores for s in stages]
    dur = [chain.interval_sum(s.first, s.last, s.core_type) for s in stages]
    inner = _resolve_buffers(cfg, K, reps)
    # link j follows stage j; the last one feeds the sink
    slots_per = inner + [reps[-1]]
    slots: list[list] = [[None] * B for B in slots_per]  # None | ("res", i) | ("full", i)
    # ring discipline: slot d next accepts stream turn[d], then turn[d] + B once released
    turn = [list(range(B)) for B in slots_per]
    writers = [[set() for _ in range(B)] for B in slots_per]
    readers = [[set() for _ in range(B)] for B in slots_per]

    nxt = [list(range(r)) for r in reps]  # next stream per replica
    idle = [[True] * r for r in reps]
    busy = [Fraction(0)] * K
    events: list = []
    now = Fraction(0)
    out_next = 0
    order: list[int] = []
    times: list[Fraction] = []

    def drain():
        nonlocal out_next
        last = slots[K - 1]
        B = len(last)
        while out_next < N:
            cell = last[out_next % B]
            if cell is None or cell[0] != "full":
                return
            order.append(cell[1])
            times.append(now)
            last[out_next % B] = None
            turn[K - 1][out_next % B] += B
            out_next += 1

    def start_ready():
        progress = True
        while progress:
            progress = False
            drain()
            for k in range(K):
                for j in range(reps[k]):
                    i = nxt[k][j]
                    if not idle[k][j] or i >= N:
                        continue
                    if k > 0:
                        src = slots[k - 1]
                        si = i % len(src)
                        if src[si] != ("full", i):
                            continue
                    dst = slots[k]
                    di = i % len(dst)
                    if dst[di] is not None or turn[k][di] != i:
                        continue
                    if k > 0:
                        src[si] = None
                        turn[k - 1][si] += len(src)
                        readers[k - 1][si].add(j)
                    dst[di] = ("res", i)
                    writers[k][di].add(j)
                    idle[k][j] = False
                    busy[k] += dur[k]
                    heapq.heappush(events, (now + dur[k], k, j, i))
                    progress = True

    start_ready()
    while out_next < N:
        if not events:
            raise SimulationDeadlock(_blocked_link(K, N, nxt, idle, slots, turn), now, out_next)
        now = events[0][0]
        while events and events[0][0] == now:
            _, k, j, i = heapq.heappop(events)
            slots[k][i % len(slots[k])] = ("full", i)
            idle[k][j] = True
            nxt[k][j] += reps[k]
        start_ready()

    sync = [j for j in range(K - 1) if any(len(w) > 1 for w in writers[j]) or any(len(r) > 1 for r in readers[j])]
    span = times[-1] if times[-1] > 0 else Fraction(1)
    util = [busy[k] / (reps[k] * span) for k in range(K)]
    return SimReport(_steady_period(times, cfg.warmup_streams, reps), order, util, inner, sync, times)


def _steady_period(times: list[Fraction], warmup: int, reps: list[int]) -> Fraction:
    # the steady state repeats every lcm(replica counts) streams, so measure whole multiples of it
    hyper = math.lcm(*reps)
    span = len(times) - 1 - warmup
    if span < 1:
        return times[-1] - times[0] if len(times) > 1 else times[-1]
    window = (span // hyper) * hyper or span
    return (times[warmup + window] - times[warmup]) / window


def _blocked_link(K, N, nxt, idle, slots, turn) -> str:
    for k in range(K):
        for j, i in enumerate(nxt[k]):
            if not idle[k][j] or i >= N:
                continue
            dst = slots[k]
            if dst[i % len(dst)] is not None or turn[k][i % len(dst)] != i:
                return f"{k}->{k + 1 if k + 1 < K else 'sink'}"
            if k > 0:
                return f"{k - 1}->{k}"
    return "unknown"


def smallest_sync_free_buffer(producers: int, consumers: int, streams: int | None = None) -> int:
    """Brute-force the fewest slots on a producer/consumer link that need no intra-stage sharing.

    Simulates a two-stage pipeline with ``producers`` and ``consumers`` replicas
    for increasing slot counts and returns the first count where every slot
    is touched by a single replica on each side and ordering holds.
    """
    chain = TaskChain.from_weights([1, 1], [1, 1], [True, True])
    sol = Solution((Stage(1, 1, producers, "B"), Stage(2, 2, consumers, "B")), Fraction(1))
    n = streams or 4 * producers * consumers + 8
    for B in range(1, producers * consumers + 1):
        rep = simulate(chain, sol, None, SimConfig(streams=n, buffers_per_link=(B,), warmup_streams=0))
        if rep.ordered and not rep.sync_links:
            return B
    raise AssertionError("unreachable: lcm slots always suffice")


__all__ = ["SimConfig", "SimReport", "SimulationDeadlock", "buffer_plan", "simulate", "smallest_sync_free_buffer"]

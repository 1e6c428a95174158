"""Slowdown study over a synthetic corpus and strategy run-time profiling."""
from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .model import Platform, TaskChain
from .strategies import InfeasibleSchedule, get_strategy
from .synth import GenSpec, corpus, generate
from .twocatac import DEFAULT_BUDGET, BudgetExceeded

CSV_COLUMNS = (
    "chain_id", "seed", "n", "sr", "b", "l", "strategy", "period", "slowdown",
    "big_used", "little_used", "stages", "wall_us", "flagged", "slowdown_exact",
)
GRID_PLATFORMS = ((16, 4), (10, 10), (4, 16))
GRID_RATIOS = (0.2, 0.5, 0.8)
GRID_STRATEGIES = ("otac-l", "otac-b", "fertac", "twocatac", "herad")
REFERENCE = "herad"


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: tuple[GenSpec, ...]
    platforms: tuple[tuple[int, int], ...] = GRID_PLATFORMS
    strategies: tuple[str, ...] = GRID_STRATEGIES
    budget: int = DEFAULT_BUDGET
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "corpus", tuple(self.corpus))
        object.__setattr__(self, "platforms", tuple(tuple(p) for p in self.platforms))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if not self.corpus or not self.platforms or not self.strategies:
            raise ValueError("corpus, platforms and strategies must be non-empty")

    @classmethod
    def slowdown_grid(cls, chains: int = 1000, n_tasks: int = 20, base_seed: int = 2025, **kw) -> "ExperimentConfig":
        """Every SR gets its own ``chains``-sized corpus; seeds differ per SR."""
        specs = [s for k, sr in enumerate(GRID_RATIOS) for s in corpus(n_tasks, sr, chains, base_seed + k)]
        return cls(tuple(specs), **kw)


@dataclass(frozen=True)
class CellStats:
    runs: int
    excluded: int
    pct_optimal: Fraction
    avg: Fraction
    median: Fraction
    max: Fraction
    avg_big: Fraction
    avg_little: Fraction

    def as_tuple(self) -> tuple:
        """(% opt, avg, med, max), (b_used, l_used) as floats."""
        return (
            (float(self.pct_optimal), float(self.avg), float(self.median), float(self.max)),
            (float(self.avg_big), float(self.avg_little)),
        )


@dataclass
class StatsReport:
    rows: list[dict]
    cells: dict[tuple, CellStats] = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows: Sequence[dict]) -> "StatsReport":
        """Aggregate per (b, l, sr, strategy); flagged rows only count as exclusions."""
        groups: dict[tuple, list[dict]] = {}
        for r in rows:
            groups.setdefault((int(r["b"]), int(r["l"]), float(r["sr"]), r["strategy"]), []).append(r)
        cells = {}
        for key, grp in sorted(groups.items()):
            ok = [r for r in grp if not _flag(r)]
            if not ok:
                cells[key] = CellStats(0, len(grp), *(Fraction(0),) * 6)
                continue
            sd = [_slowdown(r) for r in ok]
            m = len(ok)
            cells[key] = CellStats(
                runs=m,
                excluded=len(grp) - m,
                pct_optimal=Fraction(100 * sum(1 for x in sd if x == 1), m),
                avg=sum(sd, Fraction(0)) / m,
                median=statistics.median(sd),
                max=max(sd),
                avg_big=Fraction(sum(int(r["big_used"]) for r in ok), m),
                avg_little=Fraction(sum(int(r["little_used"]) for r in ok), m),
            )
        return cls(list(rows), cells)

    def cell(self, b: int, l: int, sr: float, strategy: str) -> CellStats:
        return self.cells[(b, l, float(sr), strategy)]

    def overall_avg(self, strategy: str) -> Fraction:
        """Mean slowdown of a strategy over all of its unflagged runs."""
        sd = [_slowdown(r) for r in self.rows if r["strategy"] == strategy and not _flag(r)]
        return sum(sd, Fraction(0)) / len(sd)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            w.writeheader()
            for r in self.rows:
                # slowdown_exact stays a rational string so aggregates rebuild exactly from the file
                w.writerow({k: str(r[k]) if k == "slowdown_exact" else _fmt(r[k]) for k in CSV_COLUMNS})

    @staticmethod
    def read_csv(path) -> list[dict]:
        with open(path, newline="") as fh:
            return list(csv.DictReader(fh))

    def format_table(self) -> str:
        lines = []
        for (b, l, sr, strat), c in self.cells.items():
            (po, avg, med, mx), (bu, lu) = c.as_tuple()
            lines.append(
                f"({b:>2}B,{l:>2}L) SR={sr:.1f} {strat:<9} ({po:5.1f}%, {avg:.3f}, {med:.3f}, {mx:.3f}) "
                f"({bu:4.1f}, {lu:4.1f}) excluded={c.excluded}"
            )
        return "\n".join(lines)


def _flag(r) -> bool:
    v = r["flagged"]
    return v if isinstance(v, bool) else str(v).lower() in ("true", "1")


def _slowdown(r) -> Fraction:
    v = r.get("slowdown_exact")
    if isinstance(v, Fraction):
        return v
    return Fraction(v)


def _fmt(v):
    if isinstance(v, Fraction):
        return f"{float(v):.6g}"
    if isinstance(v, float):
        return f"{v:.6g}"
    return v


def _chain_rows(args) -> list[dict]:
    chain_id, spec, platforms, strategies, budget = args
    chain = generate(spec)
    names = list(strategies)
    if REFERENCE not in names:
        names.insert(0, REFERENCE)
    rows = []
    for b, l in platforms:
        plat = Platform(b, l)
        results = {}
        for name in names:
            fn = get_strategy(name, budget)
            t0 = time.perf_counter_ns()
            try:
                sol = fn(chain, plat)
            except (BudgetExceeded, InfeasibleSchedule, ValueError):
                sol = None
            results[name] = (sol, (time.perf_counter_ns() - t0) // 1000)
        ref = results[REFERENCE][0].period
        for name in strategies:
            sol, wall = results[name]
            row = {
                "chain_id": chain_id, "seed": spec.seed, "n": spec.n_tasks, "sr": spec.stateless_ratio,
                "b": b, "l": l, "strategy": name, "wall_us": wall, "flagged": sol is None,
            }
            if sol is None:
                row.update(period="", slowdown="", slowdown_exact="", big_used="", little_used="", stages="")
            else:
                sd = sol.period / ref
                row.update(
                    period=sol.period, slowdown=sd, slowdown_exact=sd,
                    big_used=sol.big_used, little_used=sol.little_used, stages=len(sol),
                )
            rows.append(row)
    return rows


def run_slowdown_study(config: ExperimentConfig, csv_path=None) -> StatsReport:
    jobs = [(i, s, config.platforms, config.strategies, config.budget) for i, s in enumerate(config.corpus)]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(_chain_rows, jobs, chunksize=8))
    else:
        chunks = [_chain_rows(j) for j in jobs]
    # map() keeps job order, so the reduction does not depend on completion order
    rows = [r for chunk in chunks for r in chunk]
    report = StatsReport.from_rows(rows)
    if csv_path is not None:
        report.write_csv(csv_path)
    return report


@dataclass(frozen=True)
class TimingPoint:
    n: int
    b: int
    l: int
    sr: float
    strategy: str
    median_us: float
    mean_us: float
    runs: int
    truncated: int


def run_time_profile(
    sizes: Iterable[tuple[int, int, int, float]],
    strategies: Sequence[str] = ("fertac", "twocatac", "herad"),
    repetitions: int = 50,
    base_seed: int = 7,
    budget: int = DEFAULT_BUDGET,
) -> list[TimingPoint]:
    """Wall-clock per strategy; each point uses ``repetitions`` fresh chains."""
    warm = generate(GenSpec(4, 0.5, 0))
    for name in strategies:  # load compiled kernels outside the timed region
        get_strategy(name, budget)(warm, Platform(1, 1))
    out = []
    for n, b, l, sr in sizes:
        chains = [generate(s) for s in corpus(n, sr, repetitions, base_seed)]
        for ch in chains:
            ch.prefix  # noqa: B018 - build cached prefix sums before timing
        plat = Platform(b, l)
        for name in strategies:
            fn = get_strategy(name, budget)
            times, truncated = [], 0
            for ch in chains:
                t0 = time.perf_counter_ns()
                try:
                    fn(ch, plat)
                except BudgetExceeded:
                    truncated += 1
                    continue
                times.append((time.perf_counter_ns() - t0) / 1000)
            med = statistics.median(times) if times else float("nan")
            mean = statistics.fmean(times) if times else float("nan")
            out.append(TimingPoint(n, b, l, sr, name, med, mean, len(times), truncated))
    return out


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def write_timings_csv(points: Sequence[TimingPoint], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "b", "l", "sr", "strategy", "median_us", "mean_us", "runs", "truncated"])
        for p in points:
            w.writerow([p.n, p.b, p.l, p.sr, p.strategy, f"{p.median_us:.6g}", f"{p.mean_us:.6g}", p.runs, p.truncated])


__all__ = [
    "CSV_COLUMNS",
    "CellStats",
    "ExperimentConfig",
    "StatsReport",
    "TimingPoint",
    "loglog_slope",
    "run_slowdown_study",
    "run_time_profile",
    "write_timings_csv",
]

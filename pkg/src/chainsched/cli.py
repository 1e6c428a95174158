"""Command-line entry point.

Exit status: 0 on success, 1 on bad input or usage, 2 when no schedule can be
produced (infeasible instance, exhausted budget, deadlock, too few cores).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .fixtures import Fixture, list_fixtures, load_fixture
from .harness import ExperimentConfig, loglog_slope, run_slowdown_study, run_time_profile, write_timings_csv
from .herad import InfeasibleError
from .model import ChainError, Platform, Solution, TaskChain, dump_json, load_json
from .oracle import InstanceTooLarge, brute_force
from .pinning import POLICIES, PinCapacityError, pin
from .sim import SimConfig, SimulationDeadlock, buffer_plan, simulate
from .strategies import STRATEGY_NAMES, InfeasibleSchedule, run_strategy
from .synth import GenSpec, corpus_seeds, generate
from .twocatac import DEFAULT_BUDGET, BudgetExceeded

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2
_PAIR = re.compile(r"^\s*(\d+)\s*[,x:]\s*(\d+)\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- argument helpers ---------------------------------------------------------------

def _load_chain(ref: str) -> tuple[TaskChain, Fixture | None]:
    """A JSON path, or the key of a bundled fixture (optionally prefixed ``fixture:``)."""
    key = ref[len("fixture:"):] if ref.startswith("fixture:") else ref
    if not Path(ref).exists() and key in list_fixtures():
        fx = load_fixture(key)
        return fx.chain, fx
    return TaskChain.from_dict(load_json(ref)), None


def _load_platform(ref: str) -> Platform:
    """``B,L`` / ``BxL`` inline, or a platform JSON file."""
    m = _PAIR.match(ref)
    if m and not Path(ref).exists():
        return Platform(int(m.group(1)), int(m.group(2)))
    return Platform.from_dict(load_json(ref))


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(";") if ";" in text else text.split():
        m = _PAIR.match(part)
        if not m:
            raise ValueError(f"bad platform pair {part!r}; use e.g. '16x4 10x10'")
        out.append((int(m.group(1)), int(m.group(2))))
    return out


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json or text is None:
        sys.stdout.write(dump_json(payload) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _write_or_print(args, doc: dict, out: str | None) -> None:
    if out:
        dump_json(doc, out)
        if not args.json:
            print(f"wrote {out}")
            return
    _emit(args, doc)


# -- subcommands --------------------------------------------------------------------

def cmd_gen(args) -> int:
    kw = dict(weight_range=(args.wmin, args.wmax), slowdown_range=(args.smin, args.smax))
    if args.count == 1:
        chain = generate(GenSpec(args.n, args.sr, args.seed, **kw))
        _write_or_print(args, chain.to_dict(), args.out)
        return EXIT_OK
    if not args.out_dir:
        raise ValueError("--count > 1 needs --out-dir")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seeds = corpus_seeds(args.seed, args.count)
    entries = []
    for i, s in enumerate(seeds):
        fname = f"chain_{i:05d}.json"
        dump_json(generate(GenSpec(args.n, args.sr, s, **kw)).to_dict(), out / fname)
        entries.append({"file": fname, "seed": s})
    manifest = {
        "generator": "numpy PCG64",
        "base_seed": args.seed,
        "n_tasks": args.n,
        "stateless_ratio": args.sr,
        "weight_range": [args.wmin, args.wmax],
        "slowdown_range": [args.smin, args.smax],
        "chains": entries,
    }
    dump_json(manifest, out / "manifest.json")
    _emit(args, {"written": len(entries), "manifest": str(out / "manifest.json")}, f"wrote {len(entries)} chains to {out}")
    return EXIT_OK


def cmd_schedule(args) -> int:
    chain, fx = _load_chain(args.chain)
    plat = _load_platform(args.platform)
    sol = run_strategy(args.strategy, chain, plat, args.budget)
    bits = args.bits_per_stream if args.bits_per_stream is not None else (fx.bits_per_stream if fx else None)
    doc = {
        "strategy": args.strategy,
        "platform": {"big": plat.big, "little": plat.little},
        "solution": sol.to_dict(),
        "period": float(sol.period),
        "big_used": sol.big_used,
        "little_used": sol.little_used,
        "decomposition": [list(d) for d in sol.decomposition()],
    }
    if bits is not None:
        doc["bits_per_stream"] = bits
        doc["throughput_mbps"] = bits / float(sol.period)
    text = f"{args.strategy}: period {float(sol.period):.1f} on ({plat.big}B,{plat.little}L), uses {sol.big_used}B+{sol.little_used}L\n"
    text += "  " + " ".join(f"({k},{r}{v})" for k, r, v in sol.decomposition())
    if bits is not None:
        text += f"\n  throughput {doc['throughput_mbps']:.2f} Mb/s"
    if args.out:
        dump_json(sol.to_dict(), args.out)
    _emit(args, doc, text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    chain, _ = _load_chain(args.chain)
    plat = _load_platform(args.platform)
    res = brute_force(chain, plat, reverse=args.reverse, max_tasks=args.max_tasks, max_cores=args.max_cores)
    text = (
        f"min period {res.min_period} ({float(res.min_period):.6g}); {res.witness_count} optimal mappings; "
        f"fewest big cores {res.min_big_used}, then total {res.min_total_used}"
    )
    _emit(args, res.to_dict(), text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    chain, _ = _load_chain(args.chain)
    sol = Solution.from_dict(load_json(args.solution), chain)
    plat = _load_platform(args.platform) if args.platform else None
    buffers = None
    if args.buffers:
        vals = [int(x) for x in args.buffers.split(",")]
        buffers = vals[0] if len(vals) == 1 else tuple(vals)
    rep = simulate(chain, sol, plat, SimConfig(args.streams, buffers, args.warmup))
    doc = rep.to_dict()
    doc["analytic_period"] = float(sol.period)
    text = (
        f"measured period {float(rep.measured_period):.6g} (analytic {float(sol.period):.6g}), "
        f"order preserved: {rep.ordered}, buffers {rep.buffers}"
    )
    _emit(args, doc, text)
    return EXIT_OK


def cmd_pin(args) -> int:
    sol = Solution.from_dict(load_json(args.solution))
    plat = _load_platform(args.platform)
    pm = pin(sol, plat, args.policy)
    lines = [f"t{t.thread} (stage {t.stage}, {t.core_type}) -> {'any' if t.cores is None else ','.join(map(str, t.cores))}" for t in pm.threads]
    _emit(args, pm.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_buffers(args) -> int:
    if args.replicas:
        reps = [int(x) for x in args.replicas.split(",")]
    elif args.solution:
        reps = [s.cores for s in Solution.from_dict(load_json(args.solution)).stages]
    else:
        raise ValueError("give --solution or --replicas")
    links = buffer_plan(reps)
    _emit(args, {"replicas": reps, "links": links}, " ".join(map(str, links)))
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .synth import corpus

    srs = [float(x) for x in args.sr.split(",")]
    specs = [s for k, sr in enumerate(srs) for s in corpus(args.n, sr, args.chains, args.seed + k)]
    cfg = ExperimentConfig(
        tuple(specs), tuple(_pairs(args.platforms)), tuple(args.strategies.split(",")), args.budget, args.workers
    )
    rep = run_slowdown_study(cfg, args.csv)
    cells = [
        {"b": b, "l": l, "sr": sr, "strategy": s, "runs": c.runs, "excluded": c.excluded,
         "pct_optimal": float(c.pct_optimal), "avg": float(c.avg), "median": float(c.median), "max": float(c.max),
         "avg_big": float(c.avg_big), "avg_little": float(c.avg_little)}
        for (b, l, sr, s), c in rep.cells.items()
    ]
    _emit(args, {"cells": cells, "csv": args.csv}, rep.format_table())
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = []
    for part in args.sizes.split():
        n, b, l, sr = part.split(":")
        sizes.append((int(n), int(b), int(l), float(sr)))
    pts = run_time_profile(sizes, args.strategies.split(","), args.reps, args.seed, args.budget)
    if args.csv:
        write_timings_csv(pts, args.csv)
    rows = [p.__dict__ for p in pts]
    slopes = {}
    for s in {p.strategy for p in pts}:
        sel = [p for p in pts if p.strategy == s and p.runs]
        if len({p.n for p in sel}) > 1:
            slopes[s] = loglog_slope([p.n for p in sel], [p.median_us for p in sel])
    text = "\n".join(f"n={p.n:<4} ({p.b},{p.l}) SR={p.sr} {p.strategy:<9} median {p.median_us:10.1f} us  truncated {p.truncated}" for p in pts)
    if slopes:
        text += "\n" + " ".join(f"{k}: slope {v:.2f}" for k, v in sorted(slopes.items()))
    _emit(args, {"points": rows, "loglog_slope_vs_n": slopes}, text)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    items = []
    for key in list_fixtures():
        fx = load_fixture(key)
        items.append({"key": key, "name": fx.chain.name, "tasks": fx.chain.n, "frames_per_stream": fx.frames_per_stream,
                      "bits_per_stream": fx.bits_per_stream})
    text = "\n".join(f"{i['key']:<16} {i['tasks']} tasks, {i['frames_per_stream']} frames/stream  {i['name']}" for i in items)
    _emit(args, {"fixtures": items}, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chainsched", description="Period-minimising schedules for task chains on big/little cores.")
    p.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate synthetic chains")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--sr", type=float, required=True, help="stateless (replicable) ratio")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--wmin", type=int, default=1)
    g.add_argument("--wmax", type=int, default=100)
    g.add_argument("--smin", type=float, default=1.0)
    g.add_argument("--smax", type=float, default=5.0)
    g.add_argument("--count", type=int, default=1, help="chains to write (seeds derived from --seed)")
    g.add_argument("--out", "-o")
    g.add_argument("--out-dir")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("schedule", parents=[common], help="compute a schedule")
    s.add_argument("--strategy", required=True, choices=STRATEGY_NAMES)
    s.add_argument("--chain", required=True, help="chain JSON or fixture key")
    s.add_argument("--platform", required=True, help="platform JSON or 'B,L'")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="2CATAC expansion budget")
    s.add_argument("--bits-per-stream", type=int, help="for Mb/s throughput (fixtures supply a default)")
    s.add_argument("--out", "-o", help="also write the solution JSON here")
    s.set_defaults(func=cmd_schedule)

    o = sub.add_parser("oracle", parents=[common], help="exhaustive optimum for small instances")
    o.add_argument("--chain", required=True)
    o.add_argument("--platform", required=True)
    o.add_argument("--reverse", action="store_true", help="reverse enumeration order")
    o.add_argument("--max-tasks", type=int, default=12)
    o.add_argument("--max-cores", type=int, default=6)
    o.set_defaults(func=cmd_oracle)

    m = sub.add_parser("simulate", parents=[common], help="discrete-event run of a solution")
    m.add_argument("--chain", required=True)
    m.add_argument("--solution", required=True)
    m.add_argument("--platform")
    m.add_argument("--streams", type=int, default=500)
    m.add_argument("--warmup", type=int, default=50)
    m.add_argument("--buffers", help="one count for all links or a comma list (default: lcm plan)")
    m.set_defaults(func=cmd_simulate)

    n = sub.add_parser("pin", parents=[common], help="thread-to-core map")
    n.add_argument("--solution", required=True)
    n.add_argument("--platform", required=True, help="platform JSON with clusters")
    n.add_argument("--policy", required=True, choices=POLICIES)
    n.set_defaults(func=cmd_pin)

    b = sub.add_parser("buffers", parents=[common], help="per-link buffer counts")
    b.add_argument("--solution")
    b.add_argument("--replicas", help="comma-separated replica counts per stage")
    b.set_defaults(func=cmd_buffers)

    w = sub.add_parser("sweep", parents=[common], help="slowdown study on a synthetic corpus")
    w.add_argument("--chains", type=int, default=1000)
    w.add_argument("--n", type=int, default=20)
    w.add_argument("--sr", default="0.2,0.5,0.8")
    w.add_argument("--platforms", default="16x4 10x10 4x16")
    w.add_argument("--strategies", default="otac-l,otac-b,fertac,twocatac,herad")
    w.add_argument("--seed", type=int, default=2025)
    w.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--csv")
    w.set_defaults(func=cmd_sweep)

    t = sub.add_parser("bench", parents=[common], help="strategy run-time profile")
    t.add_argument("--sizes", required=True, help="space-separated n:b:l:sr points")
    t.add_argument("--strategies", default="fertac,twocatac,herad")
    t.add_argument("--reps", type=int, default=50)
    t.add_argument("--seed", type=int, default=7)
    t.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    t.add_argument("--workers", type=int, default=1, help="accepted for symmetry; timing runs serially")
    t.add_argument("--csv")
    t.set_defaults(func=cmd_bench)

    f = sub.add_parser("fixtures", parents=[common], help="list bundled DVB-S2 profiles")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (InfeasibleSchedule, BudgetExceeded, InfeasibleError, SimulationDeadlock, PinCapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ChainError, InstanceTooLarge, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

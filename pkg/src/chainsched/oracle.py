"""Exhaustive search over tilings, core types and core counts.

Ground truth for small instances. Periods are tracked as scaled integer
fractions so the minimum is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import BIG, LITTLE, Platform, Solution, Stage, TaskChain

DEFAULT_MAX_TASKS = 12
DEFAULT_MAX_CORES = 6


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    min_period: Fraction
    witnesses: tuple[Solution, ...]
    min_big_used: int
    min_total_used: int
    witness_count: int = field(default=0, compare=False)

    @property
    def best_usage(self) -> tuple[int, int]:
        """(big, total) of the lexicographically smallest witness usage."""
        return self.min_big_used, self.min_total_used

    def to_dict(self) -> dict:
        return {
            "min_period": float(self.min_period),
            "min_period_exact": str(self.min_period),
            "min_big_used": self.min_big_used,
            "min_total_used": self.min_total_used,
            "witness_count": self.witness_count,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def brute_force(
    chain: TaskChain,
    platform: Platform,
    *,
    reverse: bool = False,
    max_tasks: int = DEFAULT_MAX_TASKS,
    max_cores: int = DEFAULT_MAX_CORES,
    max_witnesses: int = 32,
) -> OracleResult:
    """Minimum period over every valid mapping.

    ``min_big_used`` and ``min_total_used`` are the lexicographic minimum of
    (big cores, total cores) over all optimal mappings, not only the stored
    witnesses. ``reverse`` flips every enumeration order.
    """
    n, b, l = chain.n, platform.big, platform.little
    if n > max_tasks or b + l > max_cores:
        raise InstanceTooLarge(
            f"oracle limited to n <= {max_tasks} and b+l <= {max_cores} (got n={n}, b+l={b + l})"
        )
    pre = chain.prefix
    nxt = chain.next_sequential
    types = (LITTLE, BIG) if reverse else (BIG, LITTLE)
    ends_order = (lambda s: range(n, s - 1, -1)) if reverse else (lambda s: range(s, n + 1))

    best = [None, None]  # scaled period (num, den), or None before the first full mapping
    witnesses: list[tuple[Stage, ...]] = []
    stats = {"count": 0, "usage": None}
    stack: list[Stage] = []

    def worse(pn, pd):
        return best[0] is not None and pn * best[1] > best[0] * pd

    def record(pn, pd, bu, lu):
        if best[0] is None or pn * best[1] < best[0] * pd:
            best[0], best[1] = pn, pd
            witnesses.clear()
            stats["count"] = 0
            stats["usage"] = None
        stats["count"] += 1
        usage = (bu, bu + lu)
        if stats["usage"] is None or usage < stats["usage"]:
            stats["usage"] = usage
        if len(witnesses) < max_witnesses:
            witnesses.append(tuple(stack))

    def dfs(s, bl, ll, cn, cd, bu, lu):
        for e in ends_order(s):
            rep = nxt[s] > e
            for v in types:
                avail = bl if v == BIG else ll
                if avail < 1:
                    continue
                total = pre[v][e] - pre[v][s - 1]
                counts = range(1, avail + 1) if rep else range(1, 2)
                if reverse:
                    counts = reversed(counts)
                for u in counts:
                    d = u if rep else 1
                    # running max of the stage weights
                    mn, md = (total, d) if total * cd > cn * d else (cn, cd)
                    if worse(mn, md):
                        continue
                    stack.append(Stage(s, e, u, v))
                    nb, nl = (bu + u, lu) if v == BIG else (bu, lu + u)
                    if e == n:
                        record(mn, md, nb, nl)
                    else:
                        dfs(e + 1, bl - (u if v == BIG else 0), ll - (u if v == LITTLE else 0), mn, md, nb, nl)
                    stack.pop()

    dfs(1, b, l, 0, 1, 0, 0)
    if best[0] is None:  # pragma: no cover - b+l >= 1 always admits a mapping
        raise RuntimeError("no valid mapping found")
    min_period = Fraction(best[0], best[1] * chain.scale)
    sols = tuple(Solution(ws, min_period) for ws in witnesses)
    big_used, total_used = stats["usage"]
    return OracleResult(min_period, sols, big_used, total_used, stats["count"])


__all__ = ["OracleResult", "InstanceTooLarge", "brute_force", "DEFAULT_MAX_TASKS", "DEFAULT_MAX_CORES"]

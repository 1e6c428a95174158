"""HeRAD: optimal dynamic program over (task prefix, big budget, little budget).

Periods inside the matrix are exact fractions stored as integer pairs
``(num, den)`` in scaled-weight units; ``(1, 0)`` encodes +infinity. Cross
multiplication keeps every comparison exact. The kernels are compiled with
numba when the integer magnitudes fit in int64 and otherwise run as plain
Python over object arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import BIG, INF, LITTLE, Platform, Solution, Stage, TaskChain

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

_V_LITTLE = 0
_V_BIG = 1
_INT64_SAFE = 2**62

# Fields of the solution matrix, in kernel argument order.
_FIELDS = ("pnum", "pden", "acc_b", "acc_l", "prev_b", "prev_l", "vtype", "start")


def _takes_new(cn, cd, cb, cl, nn, nd, nb, nl):
    """Cell comparison: does candidate (nn/nd, acc nb, nl) replace current (cn/cd, acc cb, cl)?"""
    lhs = cn * nd
    rhs = nn * cd
    if lhs > rhs:
        return True
    if lhs == rhs:
        if cl < nl and cb > nb:
            return True
        if cl >= nl and cb >= nb:
            return True
    return False


def _single_stage(t, preb, prel, nxt, b, l, pnum, pden, acc_b, acc_l, prev_b, prev_l, vtype, start):
    rep = nxt[1] > t
    sum_b = preb[t] - preb[0]
    sum_l = prel[t] - prel[0]
    for rl in range(1, l + 1):
        pnum[t, 0, rl] = sum_l
        pden[t, 0, rl] = rl if rep else 1
        acc_b[t, 0, rl] = 0
        acc_l[t, 0, rl] = rl if rep else 1
        vtype[t, 0, rl] = _V_LITTLE
        start[t, 0, rl] = 1
    for rb in range(1, b + 1):
        wd = rb if rep else 1
        ub = rb if rep else 1
        for rl in range(0, l + 1):
            # strict "<" on the period: ties stay on little cores
            if sum_b * pden[t, 0, rl] < pnum[t, 0, rl] * wd:
                pnum[t, rb, rl] = sum_b
                pden[t, rb, rl] = wd
                acc_b[t, rb, rl] = ub
                acc_l[t, rb, rl] = 0
                vtype[t, rb, rl] = _V_BIG
            else:
                pnum[t, rb, rl] = pnum[t, 0, rl]
                pden[t, rb, rl] = pden[t, 0, rl]
                acc_b[t, rb, rl] = acc_b[t, 0, rl]
                acc_l[t, rb, rl] = acc_l[t, 0, rl]
                vtype[t, rb, rl] = vtype[t, 0, rl]
            start[t, rb, rl] = 1


def _recompute_cell(j, cb_, cl_, preb, prel, nxt, pnum, pden, acc_b, acc_l, prev_b, prev_l, vtype, start):
    # current best, starting from the single-stage value
    c_n = pnum[j, cb_, cl_]
    c_d = pden[j, cb_, cl_]
    c_ab = acc_b[j, cb_, cl_]
    c_al = acc_l[j, cb_, cl_]
    c_pb = prev_b[j, cb_, cl_]
    c_pl = prev_l[j, cb_, cl_]
    c_v = vtype[j, cb_, cl_]
    c_s = start[j, cb_, cl_]
    # neighbours with one core fewer
    if cl_ > 0:
        x, y = cb_, cl_ - 1
        if _takes_new(c_n, c_d, c_ab, c_al, pnum[j, x, y], pden[j, x, y], acc_b[j, x, y], acc_l[j, x, y]):
            c_n, c_d, c_ab, c_al = pnum[j, x, y], pden[j, x, y], acc_b[j, x, y], acc_l[j, x, y]
            c_pb, c_pl, c_v, c_s = prev_b[j, x, y], prev_l[j, x, y], vtype[j, x, y], start[j, x, y]
    if cb_ > 0:
        x, y = cb_ - 1, cl_
        if _takes_new(c_n, c_d, c_ab, c_al, pnum[j, x, y], pden[j, x, y], acc_b[j, x, y], acc_l[j, x, y]):
            c_n, c_d, c_ab, c_al = pnum[j, x, y], pden[j, x, y], acc_b[j, x, y], acc_l[j, x, y]
            c_pb, c_pl, c_v, c_s = prev_b[j, x, y], prev_l[j, x, y], vtype[j, x, y], start[j, x, y]
    for i in range(j, 0, -1):
        rep = nxt[i] > j
        sum_b = preb[j] - preb[i - 1]
        sum_l = prel[j] - prel[i - 1]
        # a sequential stage gains nothing from extra cores: probe u = 1 only
        ub_max = cb_ if rep else min(cb_, 1)
        for u in range(1, ub_max + 1):
            wd = u if rep else 1
            qn = pnum[i - 1, cb_ - u, cl_]
            qd = pden[i - 1, cb_ - u, cl_]
            if qn * wd < sum_b * qd:
                qn, qd = sum_b, wd
            nb = acc_b[i - 1, cb_ - u, cl_] + (u if rep else 1)
            nl = acc_l[i - 1, cb_ - u, cl_]
            if _takes_new(c_n, c_d, c_ab, c_al, qn, qd, nb, nl):
                c_n, c_d, c_ab, c_al = qn, qd, nb, nl
                c_pb, c_pl, c_v, c_s = cb_ - u, cl_, _V_BIG, i
        ul_max = cl_ if rep else min(cl_, 1)
        for u in range(1, ul_max + 1):
            wd = u if rep else 1
            qn = pnum[i - 1, cb_, cl_ - u]
            qd = pden[i - 1, cb_, cl_ - u]
            if qn * wd < sum_l * qd:
                qn, qd = sum_l, wd
            nb = acc_b[i - 1, cb_, cl_ - u]
            nl = acc_l[i - 1, cb_, cl_ - u] + (u if rep else 1)
            if _takes_new(c_n, c_d, c_ab, c_al, qn, qd, nb, nl):
                c_n, c_d, c_ab, c_al = qn, qd, nb, nl
                c_pb, c_pl, c_v, c_s = cb_, cl_ - u, _V_LITTLE, i
    pnum[j, cb_, cl_] = c_n
    pden[j, cb_, cl_] = c_d
    acc_b[j, cb_, cl_] = c_ab
    acc_l[j, cb_, cl_] = c_al
    prev_b[j, cb_, cl_] = c_pb
    prev_l[j, cb_, cl_] = c_pl
    vtype[j, cb_, cl_] = c_v
    start[j, cb_, cl_] = c_s


def _fill(n, b, l, preb, prel, nxt, pnum, pden, acc_b, acc_l, prev_b, prev_l, vtype, start):
    _single_stage(1, preb, prel, nxt, b, l, pnum, pden, acc_b, acc_l, prev_b, prev_l, vtype, start)
    for e in range(2, n + 1):
        _single_stage(e, preb, prel, nxt, b, l, pnum, pden, acc_b, acc_l, prev_b, prev_l, vtype, start)
        for ub in range(0, b + 1):
            for ul in range(0, l + 1):
                if ub != 0 or ul != 0:
                    _recompute_cell(e, ub, ul, preb, prel, nxt, pnum, pden, acc_b, acc_l, prev_b, prev_l, vtype, start)


_py_kernels = {
    "takes_new": _takes_new,
    "single_stage": _single_stage,
    "recompute_cell": _recompute_cell,
    "fill": _fill,
}

if njit is not None:
    _jit_takes_new = njit(cache=True)(_takes_new)

    # rebind the helpers the jitted kernels call so numba resolves compiled versions
    def _build_jit():
        g = {"__name__": __name__, "_takes_new": _jit_takes_new, "_V_BIG": _V_BIG, "_V_LITTLE": _V_LITTLE, "range": range, "min": min}
        single = njit(cache=True)(_rebind(_single_stage, g))
        g["_single_stage"] = single
        recompute = njit(cache=True)(_rebind(_recompute_cell, g))
        g["_recompute_cell"] = recompute
        fill = njit(cache=True)(_rebind(_fill, g))
        return {"takes_new": _jit_takes_new, "single_stage": single, "recompute_cell": recompute, "fill": fill}

    def _rebind(fn, g):
        import types

        return types.FunctionType(fn.__code__, g, fn.__name__, fn.__defaults__, fn.__closure__)

    _jit_kernels = _build_jit()
else:  # pragma: no cover
    _jit_kernels = None


@dataclass(frozen=True)
class Cell:
    p_best: object  # Fraction or math.inf
    prev: tuple[int, int]
    acc: tuple[int, int]
    core_type: str
    start: int


def compare_cells(current: Cell, candidate: Cell) -> Cell:
    """Keep the smaller period; on ties prefer trading big cores for little, then fewer cores."""
    cn, cd = _as_pair(current.p_best)
    nn, nd = _as_pair(candidate.p_best)
    take = _takes_new(cn, cd, current.acc[0], current.acc[1], nn, nd, candidate.acc[0], candidate.acc[1])
    return candidate if take else current


def _as_pair(p):
    if p == INF:
        return 1, 0
    p = Fraction(p)
    return p.numerator, p.denominator


class SolutionMatrix:
    """DP table with rows 0..n (row 0 is the empty prefix) and (b+1) x (l+1) cells per row."""

    def __init__(self, chain: TaskChain, big: int, little: int, use_jit: bool | None = None):
        if big + little < 1:
            raise ValueError("platform needs at least one core")
        self.chain = chain
        self.n = chain.n
        self.big = big
        self.little = little
        pre_b = chain.prefix[BIG]
        pre_l = chain.prefix[LITTLE]
        bound = max(pre_b[-1], pre_l[-1], 1) * (max(big, little) + 1)
        if use_jit is None:
            use_jit = _jit_kernels is not None and bound < _INT64_SAFE
        self.jit = bool(use_jit)
        dtype = np.int64 if self.jit else object
        shape = (self.n + 1, big + 1, little + 1)
        self.preb = np.array(pre_b, dtype=dtype)
        self.prel = np.array(pre_l, dtype=dtype)
        self.nxt = np.array(chain.next_sequential, dtype=np.int64 if self.jit else object)
        self.pnum = np.ones(shape, dtype=dtype)
        self.pden = np.zeros(shape, dtype=dtype)
        self.pnum[0] = 0
        self.pden[0] = 1
        self.acc_b = np.zeros(shape, dtype=dtype)
        self.acc_l = np.zeros(shape, dtype=dtype)
        self.prev_b = np.zeros(shape, dtype=dtype)
        self.prev_l = np.zeros(shape, dtype=dtype)
        self.vtype = np.zeros(shape, dtype=dtype)
        self.start = np.zeros(shape, dtype=dtype)
        self._k = _jit_kernels if self.jit else _py_kernels

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.pnum.shape

    def _arrays(self):
        return tuple(getattr(self, f) for f in _FIELDS)

    def single_stage_solution(self, prefix_end: int) -> None:
        self._k["single_stage"](prefix_end, self.preb, self.prel, self.nxt, self.big, self.little, *self._arrays())

    def recompute_cell(self, prefix_end: int, big: int, little: int) -> None:
        if big == 0 and little == 0:
            return
        self._k["recompute_cell"](prefix_end, big, little, self.preb, self.prel, self.nxt, *self._arrays())

    def fill(self) -> "SolutionMatrix":
        self._k["fill"](self.n, self.big, self.little, self.preb, self.prel, self.nxt, *self._arrays())
        return self

    def period(self, j: int, big: int, little: int):
        num, den = int(self.pnum[j, big, little]), int(self.pden[j, big, little])
        if den == 0:
            return INF
        return Fraction(num, den * self.chain.scale)

    def cell(self, j: int, big: int, little: int) -> Cell:
        idx = (j, big, little)
        return Cell(
            self.period(*idx),
            (int(self.prev_b[idx]), int(self.prev_l[idx])),
            (int(self.acc_b[idx]), int(self.acc_l[idx])),
            BIG if int(self.vtype[idx]) == _V_BIG else LITTLE,
            int(self.start[idx]),
        )

    def periods(self) -> np.ndarray:
        """Float view of every cell's period (inf where unreachable), for inspection."""
        num = self.pnum.astype(float)
        den = self.pden.astype(float) * self.chain.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(den == 0, np.inf, num / np.where(den == 0, 1, den))
        return out


class InfeasibleError(RuntimeError):
    pass


def extract_solution(matrix: SolutionMatrix) -> Solution:
    """Walk back from cell (n, b, l), recovering each stage's cores from accumulated-usage deltas."""
    chain = matrix.chain
    e, rb, rl = matrix.n, matrix.big, matrix.little
    if matrix.period(e, rb, rl) == INF:
        raise InfeasibleError("no feasible mapping for this platform")
    stages = []
    while e >= 1:
        s = int(matrix.start[e, rb, rl])
        ub, ul = int(matrix.acc_b[e, rb, rl]), int(matrix.acc_l[e, rb, rl])
        v = BIG if int(matrix.vtype[e, rb, rl]) == _V_BIG else LITTLE
        pb, pl = int(matrix.prev_b[e, rb, rl]), int(matrix.prev_l[e, rb, rl])
        if s > 1:
            ub -= int(matrix.acc_b[s - 1, pb, pl])
            ul -= int(matrix.acc_l[s - 1, pb, pl])
        stages.append(Stage(s, e, ub if v == BIG else ul, v))
        e, rb, rl = s - 1, pb, pl
    stages.reverse()
    return Solution.build(chain, stages)


def merge_replicable_stages(chain: TaskChain, solution: Solution) -> Solution:
    """Fuse neighbouring all-replicable stages that use the same core type."""
    merged: list[Stage] = []
    for st in solution.stages:
        if merged:
            last = merged[-1]
            if (
                last.core_type == st.core_type
                and chain.is_rep(last.first, last.last)
                and chain.is_rep(st.first, st.last)
            ):
                merged[-1] = Stage(last.first, st.last, last.cores + st.cores, st.core_type)
                continue
        merged.append(st)
    return Solution.build(chain, merged)


def herad_matrix(chain: TaskChain, big: int, little: int, use_jit: bool | None = None) -> SolutionMatrix:
    return SolutionMatrix(chain, big, little, use_jit).fill()


def herad_schedule(chain: TaskChain, platform: Platform, merge: bool = True, use_jit: bool | None = None) -> Solution:
    matrix = herad_matrix(chain, platform.big, platform.little, use_jit)
    sol = extract_solution(matrix)
    return merge_replicable_stages(chain, sol) if merge else sol


def herad_period(chain: TaskChain, platform: Platform):
    """Optimal period only (no extraction)."""
    m = herad_matrix(chain, platform.big, platform.little)
    return m.period(chain.n, platform.big, platform.little)


__all__ = [
    "Cell",
    "InfeasibleError",
    "SolutionMatrix",
    "compare_cells",
    "extract_solution",
    "herad_matrix",
    "herad_period",
    "herad_schedule",
    "merge_replicable_stages",
]

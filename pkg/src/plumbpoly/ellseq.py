"""The elliptic sequence B_{-1} >= B_0 > ... > B_m of an elliptic graph."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import NotElliptic, SubgraphError
from .graph import components, induced_subgraph
from .lattice import (
    Cycle,
    LatticeContext,
    build_context,
    chi,
    in_lipman_cone,
    leq,
    representative_r,
    scale,
    unscale,
)
from .laufer import classify, minimal_cycle, minimal_cycle_on, minimally_elliptic_cycle, s_h


@dataclass(frozen=True)
class Level:
    j: int
    B: tuple[int, ...]
    Z: Cycle
    C: Cycle
    Cprime: Cycle

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "B": list(self.B),
            "Z": self.Z.to_strings(),
            "C": self.C.to_strings(),
            "Cprime": self.Cprime.to_strings(),
        }


@dataclass(frozen=True)
class EllipticSequence:
    levels: tuple[Level, ...]  # levels[k] describes j = k - 1
    numerically_gorenstein: bool

    @property
    def m(self) -> int:
        return len(self.levels) - 2

    def level(self, j: int) -> Level:
        if not -1 <= j <= self.m:
            raise IndexError(f"level {j} outside [-1, {self.m}]")
        return self.levels[j + 1]

    def B(self, j: int) -> frozenset[int]:
        """B_j, with the conventions B_j = empty for j > m."""
        if j > self.m:
            return frozenset()
        return frozenset(self.level(j).B)

    def C(self, j: int) -> Cycle:
        return self.level(j).C

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "numerically_gorenstein": self.numerically_gorenstein,
            "levels": [lv.to_json() for lv in self.levels],
        }


def _ordered(ctx: LatticeContext, s) -> tuple[int, ...]:
    s = set(s)
    return tuple(v for v in ctx.graph.vertices if v in s)


@lru_cache(maxsize=512)
def nn_elliptic_sequence(ctx: LatticeContext) -> EllipticSequence:
    if not classify(ctx).is_elliptic:
        raise NotElliptic("the elliptic sequence is defined only for elliptic graphs")
    zk = ctx.ZK
    pre = s_h(ctx, zk)
    zs: list[tuple[tuple[int, ...], Cycle]] = [(ctx.graph.vertices, pre)]
    acc = pre
    while True:
        residual = zk - acc
        supp = residual.support
        assert supp, "residual vanished before the stopping rule fired"
        try:
            z = minimal_cycle_on(ctx, supp)
        except SubgraphError as exc:  # a disconnected B_j would be a bug
            raise AssertionError(f"B_{len(zs) - 1} is disconnected") from exc
        zs.append((_ordered(ctx, supp), z))
        acc = acc + z
        if z == residual:
            break
    levels = []
    c = ctx.zero()
    for k, (b, z) in enumerate(zs):
        c = c + z
        cp = ctx.zero()
        for _, z2 in zs[k:]:
            cp = cp + z2
        levels.append(Level(k - 1, b, z, c, cp))
    return EllipticSequence(tuple(levels), ctx.numerically_gorenstein)


@dataclass(frozen=True)
class ClauseResult:
    name: str
    ok: bool
    detail: str = ""


def verify_sequence(ctx: LatticeContext, seq: EllipticSequence) -> list[ClauseResult]:
    """Check the structural properties of an elliptic sequence clause by clause."""
    out: list[ClauseResult] = []
    g = ctx.graph
    m = seq.m
    zk = ctx.ZK

    # (a) shape of the chain
    problems = []
    if seq.B(-1) != frozenset(g.vertices):
        problems.append("B_-1 is not the whole graph")
    for j in range(-1, m + 1):
        if len(components(g, seq.B(j))) != 1:
            problems.append(f"B_{j} disconnected")
    for j in range(0, m):
        if not seq.B(j + 1) < seq.B(j):
            problems.append(f"B_{j + 1} not strictly inside B_{j}")
    if (seq.B(0) == seq.B(-1)) != ctx.numerically_gorenstein:
        problems.append("B_0 = B_-1 does not match numerical Gorenstein flag")
    if not seq.B(0) <= seq.B(-1):
        problems.append("B_0 not inside B_-1")
    c = minimally_elliptic_cycle(ctx)
    if seq.B(m) != c.support or seq.level(m).Z != c:
        problems.append("B_m does not carry the minimally elliptic cycle")
    if seq.level(-1).Z != s_h(ctx, zk):
        problems.append("Z_{B_-1} differs from s_[Z_K]")
    for j in range(0, m + 1):
        if not seq.level(j).Z.is_integral:
            problems.append(f"Z_B{j} not integral")
        if j < m and not leq(seq.level(j + 1).Z, seq.level(j).Z):
            problems.append(f"Z_B{j + 1} not below Z_B{j}")
    out.append(ClauseResult("a: chain shape", not problems, "; ".join(problems)))

    # (b) orthogonality
    problems = []
    for j in range(-1, m + 1):
        for v in seq.B(j + 1):
            val = ctx.intersect_E(seq.level(j).Z, v)
            if val != 0:
                problems.append(f"(E_{v}, Z_B{j}) = {val}")
    out.append(ClauseResult("b: (E_v, Z_Bj) = 0 on B_j+1", not problems, "; ".join(problems)))

    # (c) telescoping sum
    total = ctx.zero()
    for lv in seq.levels:
        total = total + lv.Z
    out.append(ClauseResult("c: sum of Z_Bj equals Z_K", total == zk, f"sum = {total}"))

    # (d) C'_j is the anti-canonical cycle of B_j, chi values vanish
    problems = []
    for j in range(-1, m + 1):
        lv = seq.level(j)
        bj = seq.B(j)
        if lv.Cprime.support != bj:
            problems.append(f"|C'_{j}| != B_{j}")
        sub = build_context(induced_subgraph(g, bj))
        if lv.Cprime.restrict(sub.graph) != sub.ZK:
            problems.append(f"C'_{j} is not Z_K of B_{j}")
        for name, cyc in (("Z_B", lv.Z), ("C", lv.C), ("C'", lv.Cprime)):
            if chi(ctx, cyc) != 0:
                problems.append(f"chi({name}{j}) = {chi(ctx, cyc)}")
    out.append(ClauseResult("d: C'_j = Z_K(B_j), chi = 0", not problems, "; ".join(problems)))

    # (e) anti-nef partial sums
    bad = [j for j in range(-1, m + 1) if not in_lipman_cone(ctx, seq.C(j))]
    out.append(ClauseResult("e: C_j anti-nef", not bad, f"failing levels {bad}" if bad else ""))

    # (f) intersection numbers of C_j
    problems = []
    for j in range(-1, m + 1):
        nxt = seq.B(j + 1)
        for v in g.vertices:
            got = ctx.intersect_E(seq.C(j), v)
            if v in nxt:
                want = 0
            else:
                k = sum(1 for w in g.neighbors[v] if w in nxt)
                want = g.euler_of(v) + 2 - k
            if got != want:
                problems.append(f"(C_{j}, E_{v}) = {got}, expected {want}")
    out.append(ClauseResult("f: (C_j, E_v) pattern", not problems, "; ".join(problems)))

    # cycles below Z_K are exactly the C_j
    below = set(cycles_below_ZK(ctx, seq))
    expected = {lv.C for lv in seq.levels}
    out.append(
        ClauseResult(
            "anti-nef class [Z_K] cycles below Z_K are the C_j",
            below == expected,
            f"found {len(below)}, expected {len(expected)}",
        )
    )
    return out


def cycles_below_ZK(ctx: LatticeContext, seq: EllipticSequence | None = None, use_numba=None) -> list[Cycle]:
    """Anti-nef cycles of class [Z_K] lying below Z_K (box search)."""
    zk = ctx.ZK
    r = representative_r(ctx, zk)
    steps = np.array([int(c) for c in (zk - r).coords], dtype=np.int64)
    pts = _kernels.antinef_box(ctx.M_array, scale(ctx, r), steps, ctx.det, use_numba=use_numba)
    return [unscale(ctx, row) for row in pts]


def numerically_gorenstein_subgraphs(ctx: LatticeContext, elliptic_only: bool = True) -> list[frozenset[int]]:
    """Connected full subgraphs with integral Z_K (exhaustive, small graphs only)."""
    from .laufer import is_elliptic

    g = ctx.graph
    found = []
    n = g.n
    if n > 16:
        raise ValueError("exhaustive subgraph search limited to 16 vertices")
    for mask in range(1, 1 << n):
        s = [g.vertices[i] for i in range(n) if mask >> i & 1]
        if len(components(g, s)) != 1:
            continue
        sub = build_context(induced_subgraph(g, s))
        if not sub.numerically_gorenstein:
            continue
        if elliptic_only and not is_elliptic(sub):
            continue
        found.append(frozenset(s))
    return found


__all__ = [
    "ClauseResult",
    "EllipticSequence",
    "Level",
    "cycles_below_ZK",
    "minimal_cycle",
    "nn_elliptic_sequence",
    "numerically_gorenstein_subgraphs",
    "verify_sequence",
]

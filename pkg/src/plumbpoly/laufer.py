"""Computation sequences, minimal cycles and the rational/elliptic classification."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import NotElliptic
from .graph import PlumbingGraph, induced_subgraph
from .lattice import Cycle, LatticeContext, build_context, chi, representative_r

Chooser = Callable[[Sequence[int]], int]


@dataclass(frozen=True)
class ComputationSequence:
    start: Cycle
    steps: tuple[tuple[Cycle, int], ...]  # (cycle after the step, vertex added)
    result: Cycle

    @property
    def vertices(self) -> list[int]:
        return [v for _, v in self.steps]

    def to_json(self) -> list[dict]:
        out = [{"cycle": self.start.to_strings(), "vertex": None}]
        out += [{"cycle": c.to_strings(), "vertex": v} for c, v in self.steps]
        return out


def generalized_laufer(
    ctx: LatticeContext,
    start: Cycle,
    chooser: Chooser | None = None,
    max_steps: int = 1_000_000,
) -> ComputationSequence:
    """Add base elements E_v with ``(x, E_v) > 0`` until ``x`` is anti-nef.

    By default the admissible vertex with the smallest id is chosen;
    ``chooser`` receives the sorted admissible ids and returns one of them.
    """
    ctx.bind(start)
    g = ctx.graph
    idx = g.index
    # track (x, E_v) incrementally; adding E_u changes it by M[v][u]
    inter = [ctx.intersect_E(start, v) for v in g.vertices]
    coords = list(start.coords)
    steps: list[tuple[Cycle, int]] = []
    ids_sorted = sorted(g.vertices)
    for _ in range(max_steps):
        admissible = [v for v in ids_sorted if inter[idx[v]] > 0]
        if not admissible:
            break
        v = admissible[0] if chooser is None else chooser(admissible)
        if v not in admissible:
            raise ValueError(f"chooser returned non-admissible vertex {v}")
        i = idx[v]
        coords[i] += 1
        for w in (v, *g.neighbors[v]):
            inter[idx[w]] += ctx.M[idx[w]][i]
        steps.append((Cycle(g, tuple(coords)), v))
    else:  # pragma: no cover - negative definiteness guarantees termination
        raise RuntimeError("computation sequence did not terminate")
    result = steps[-1][0] if steps else start
    return ComputationSequence(start, tuple(steps), result)


def s_of(ctx: LatticeContext, l: Cycle) -> Cycle:
    return generalized_laufer(ctx, l).result


def minimal_cycle(ctx: LatticeContext) -> Cycle:
    v0 = min(ctx.graph.vertices)
    return generalized_laufer(ctx, ctx.E(v0)).result


def s_h(ctx: LatticeContext, l: Cycle) -> Cycle:
    """Smallest anti-nef cycle in the class of ``l``."""
    return generalized_laufer(ctx, representative_r(ctx, l)).result


class Kind(str, Enum):
    RATIONAL = "Rational"
    ELLIPTIC = "Elliptic"
    OTHER = "Other"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    chi_zmin: int

    @property
    def is_elliptic(self) -> bool:
        return self.kind is Kind.ELLIPTIC


@lru_cache(maxsize=512)
def classify(ctx: LatticeContext) -> Classification:
    c = int(chi(ctx, minimal_cycle(ctx)))
    kind = Kind.RATIONAL if c == 1 else Kind.ELLIPTIC if c == 0 else Kind.OTHER
    return Classification(kind, c)


def is_elliptic(g_or_ctx: PlumbingGraph | LatticeContext) -> bool:
    ctx = g_or_ctx if isinstance(g_or_ctx, LatticeContext) else build_context(g_or_ctx)
    return classify(ctx).is_elliptic


def chi_zero_cycles(ctx: LatticeContext, upper: Cycle, use_numba: bool | None = None) -> list[Cycle]:
    """All integral ``0 < l <= upper`` with ``chi(l) = 0``."""
    ub = np.array([int(c) for c in upper.coords], dtype=np.int64)
    # 2 chi(l) = -(l,l) + sum l_v (e_v + 2)
    lin = np.array([e + 2 for e in ctx.graph.euler], dtype=np.int64)
    pts = _kernels.chi_zero_box(ctx.M_array, lin, ub, use_numba=use_numba)
    return [ctx.cycle(int(x) for x in row) for row in pts]


def minimally_elliptic_cycle(ctx: LatticeContext) -> Cycle:
    if not classify(ctx).is_elliptic:
        raise NotElliptic("the minimally elliptic cycle exists only for elliptic graphs")
    zmin = minimal_cycle(ctx)
    hits = chi_zero_cycles(ctx, zmin)
    assert hits, "elliptic graph without a chi = 0 cycle below Z_min"
    coords = [min(h.coords[i] for h in hits) for i in range(ctx.graph.n)]
    c = ctx.cycle(coords)
    assert chi(ctx, c) == 0 and all(a <= b for a, b in zip(c.coords, zmin.coords))
    return c


def minimal_cycle_on(ctx: LatticeContext, vertices) -> Cycle:
    """Z_min of the induced subgraph on ``vertices``, lifted to ``ctx``'s graph."""
    sub = induced_subgraph(ctx.graph, vertices)
    return minimal_cycle(build_context(sub)).lift(ctx.graph)


__all__ = [
    "ComputationSequence",
    "Classification",
    "Kind",
    "generalized_laufer",
    "minimal_cycle",
    "s_h",
    "s_of",
    "classify",
    "is_elliptic",
    "chi_zero_cycles",
    "minimally_elliptic_cycle",
    "minimal_cycle_on",
]

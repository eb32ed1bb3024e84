"""Exact intersection-form arithmetic on the lattice of a plumbing graph.

Cycles are dense rational vectors in the E_v basis, ordered by the graph's
declaration order.  Everything is exact (``fractions.Fraction``); the
enumeration kernels work on integer vectors scaled by ``det`` instead, since
``det * l'`` is integral for every ``l'`` in the dual lattice.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm

import numpy as np

from .errors import BindingError, NotNegativeDefinite
from .graph import PlumbingGraph

Number = int | Fraction


@dataclass(frozen=True)
class Cycle:
    """A rational cycle ``sum l_v E_v`` bound to one graph."""

    graph: PlumbingGraph = field(repr=False)
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.graph.n:
            raise BindingError(
                f"cycle has {len(self.coords)} coordinates, graph has {self.graph.n} vertices"
            )
        coords = self.coords
        if type(coords) is not tuple or any(type(c) is not Fraction for c in coords):
            object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    @classmethod
    def zero(cls, graph: PlumbingGraph) -> "Cycle":
        return cls(graph, (Fraction(0),) * graph.n)

    @classmethod
    def from_map(cls, graph: PlumbingGraph, values: dict[int, Number]) -> "Cycle":
        coords = [Fraction(0)] * graph.n
        for v, c in values.items():
            coords[graph._pos(v)] = Fraction(c)
        return cls(graph, tuple(coords))

    def _check(self, other: "Cycle") -> None:
        if not isinstance(other, Cycle):
            raise TypeError(f"expected Cycle, got {type(other).__name__}")
        if other.graph is not self.graph and other.graph != self.graph:
            raise BindingError("cycles are bound to different graphs")

    def __add__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        return Cycle(self.graph, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        return Cycle(self.graph, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Cycle":
        return Cycle(self.graph, tuple(-a for a in self.coords))

    def __mul__(self, k: Number) -> "Cycle":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return Cycle(self.graph, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __getitem__(self, v: int) -> Fraction:
        return self.coords[self.graph._pos(v)]

    def as_dict(self) -> dict[int, Fraction]:
        return dict(zip(self.graph.vertices, self.coords))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, c in zip(self.graph.vertices, self.coords) if c != 0)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def restrict(self, sub: PlumbingGraph) -> "Cycle":
        """Coordinates on the vertices of ``sub`` (which must be a subgraph)."""
        return Cycle(sub, tuple(self[v] for v in sub.vertices))

    def lift(self, parent: PlumbingGraph) -> "Cycle":
        """Extend by zero from this cycle's graph to ``parent``."""
        own = self.as_dict()
        return Cycle(parent, tuple(own.get(v, Fraction(0)) for v in parent.vertices))

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coords]

    def __str__(self) -> str:
        return "(" + ",".join(self.to_strings()) + ")"


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def cycle_from_strings(graph: PlumbingGraph, values: Sequence[str | int]) -> Cycle:
    return Cycle(graph, tuple(Fraction(v) for v in values))


def _invert_neg_definite(m: list[list[int]]) -> tuple[list[int], list[list[Fraction]]]:
    """Invert ``-m`` and return its leading principal minors.

    Gauss-Jordan without row exchanges.  For a positive definite matrix every
    pivot is positive and the running product of pivots is the leading minor
    of the same order, so Sylvester's criterion falls out of the elimination.
    """
    n = len(m)
    a = [[Fraction(-x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    minors: list[int] = []
    prod = Fraction(1)
    for k in range(n):
        pivot = a[k][k]
        prod *= pivot
        if prod <= 0:
            raise NotNegativeDefinite(k + 1, int(prod))
        minors.append(int(prod))
        inv = 1 / pivot
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return minors, [row[n:] for row in a]


class LatticeContext:
    """Precomputed lattice data of a negative definite plumbing tree."""

    def __init__(self, graph: PlumbingGraph):
        self.graph = graph
        n = graph.n
        idx = graph.index
        m = [[0] * n for _ in range(n)]
        for i, e in enumerate(graph.euler):
            m[i][i] = e
        for a, b in graph.edges:
            m[idx[a]][idx[b]] = m[idx[b]][idx[a]] = 1
        self.M: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in m)
        self.minors, inv = _invert_neg_definite(m)
        self.det: int = self.minors[-1]
        self.Minv_neg: tuple[tuple[Fraction, ...], ...] = tuple(tuple(r) for r in inv)
        # E*_v is the v-th column of (-M)^{-1}
        self.dual_basis: dict[int, Cycle] = {
            v: Cycle(graph, tuple(inv[i][j] for i in range(n))) for j, v in enumerate(graph.vertices)
        }
        self.E_total = Cycle(graph, (Fraction(1),) * n)
        self.valency = {v: len(graph.neighbors[v]) for v in graph.vertices}
        self.nodes = frozenset(v for v, d in self.valency.items() if d >= 3)
        self.ends = frozenset(v for v, d in self.valency.items() if d == 1)
        self.ZK = self._solve_zk()

    def _solve_zk(self) -> Cycle:
        # (Z_K, E_v) = e_v + 2, i.e. Z_K = -sum (e_v + 2) E*_v
        zk = Cycle.zero(self.graph)
        for v, e in zip(self.graph.vertices, self.graph.euler):
            zk = zk - (e + 2) * self.dual_basis[v]
        alt = self.E_total
        for v in self.graph.vertices:
            alt = alt + (self.valency[v] - 2) * self.dual_basis[v]
        assert zk == alt, "adjunction formulas disagree"
        return zk

    # basic constructors
    def E(self, v: int) -> Cycle:
        return Cycle.from_map(self.graph, {v: 1})

    def Estar(self, v: int) -> Cycle:
        self.graph._pos(v)
        return self.dual_basis[v]

    def cycle(self, values: Iterable[Number]) -> Cycle:
        return Cycle(self.graph, tuple(Fraction(x) for x in values))

    def zero(self) -> Cycle:
        return Cycle.zero(self.graph)

    def from_star(self, mults: dict[int, Number]) -> Cycle:
        out = self.zero()
        for v, k in mults.items():
            if k:
                out = out + k * self.Estar(v)
        return out

    # intersection data
    def bind(self, *cycles: Cycle) -> None:
        for c in cycles:
            if c.graph != self.graph:
                raise BindingError("cycle is bound to a different graph")

    def intersect(self, a: Cycle, b: Cycle) -> Fraction:
        self.bind(a, b)
        n = self.graph.n
        total = Fraction(0)
        for i in range(n):
            if a.coords[i] == 0:
                continue
            row = self.M[i]
            total += a.coords[i] * sum(row[j] * b.coords[j] for j in range(n) if row[j])
        return total

    def intersect_E(self, a: Cycle, v: int) -> Fraction:
        """``(a, E_v)`` via the sparse row of M."""
        self.bind(a)
        i = self.graph._pos(v)
        row = self.M[i]
        return sum((row[j] * a.coords[j] for j in range(self.graph.n) if row[j]), Fraction(0))

    def star_coords(self, a: Cycle) -> dict[int, Fraction]:
        """Coefficients of ``a`` in the E* basis: ``-(a, E_v)``."""
        return {v: -self.intersect_E(a, v) for v in self.graph.vertices}

    @property
    def numerically_gorenstein(self) -> bool:
        return self.ZK.is_integral

    # scaled integer views used by the kernels
    @cached_property
    def M_array(self) -> np.ndarray:
        return np.array(self.M, dtype=np.int64)

    @cached_property
    def scaled_dual(self) -> dict[int, np.ndarray]:
        return {v: scale(self, c) for v, c in self.dual_basis.items()}

    @property
    def denominator(self) -> int:
        """Common denominator of all dual-lattice coordinates (divides det)."""
        return lcm(*(c.denominator for e in self.dual_basis.values() for c in e.coords))


def scale(ctx: LatticeContext, c: Cycle) -> np.ndarray:
    d = ctx.det
    out = []
    for x in c.coords:
        y = x * d
        if y.denominator != 1:
            raise ValueError(f"{c} is not in the dual lattice")
        out.append(int(y))
    return np.array(out, dtype=np.int64)


def unscale(ctx: LatticeContext, arr: Sequence[int]) -> Cycle:
    return Cycle(ctx.graph, tuple(Fraction(int(x), ctx.det) for x in arr))


@lru_cache(maxsize=256)
def build_context(g: PlumbingGraph) -> LatticeContext:
    return LatticeContext(g)


def intersect(ctx: LatticeContext, a: Cycle, b: Cycle) -> Fraction:
    return ctx.intersect(a, b)


def canonical_cycle(ctx: LatticeContext) -> Cycle:
    return ctx.ZK


def chi(ctx: LatticeContext, l: Cycle) -> Fraction:
    return -ctx.intersect(l, l - ctx.ZK) / 2


def is_integral(ctx: LatticeContext, l: Cycle) -> bool:
    ctx.bind(l)
    return l.is_integral


def class_equal(ctx: LatticeContext, a: Cycle, b: Cycle) -> bool:
    ctx.bind(a, b)
    return (a - b).is_integral


def representative_r(ctx: LatticeContext, l: Cycle) -> Cycle:
    ctx.bind(l)
    return Cycle(l.graph, tuple(c - (c.numerator // c.denominator) for c in l.coords))


def _pair(a: Cycle, b: Cycle) -> zip:
    a._check(b)
    return zip(a.coords, b.coords)


def leq(a: Cycle, b: Cycle) -> bool:
    return all(x <= y for x, y in _pair(a, b))


def lt_all(a: Cycle, b: Cycle) -> bool:
    return all(x < y for x, y in _pair(a, b))


def not_geq(a: Cycle, b: Cycle) -> bool:
    return any(x < y for x, y in _pair(a, b))


def min_cycles(a: Cycle, b: Cycle) -> Cycle:
    return Cycle(a.graph, tuple(min(x, y) for x, y in _pair(a, b)))


def in_lipman_cone(ctx: LatticeContext, l: Cycle) -> bool:
    return all(ctx.intersect_E(l, v) <= 0 for v in ctx.graph.vertices)

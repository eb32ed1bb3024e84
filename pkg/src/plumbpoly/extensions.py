"""Extensions of elliptic graphs: projections, the dual-exponent extension
algorithm for small extensions, and the good-extension test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from math import comb

from .ellseq import ClauseResult, EllipticSequence, nn_elliptic_sequence
from .errors import (
    BoundaryNotEndVertices,
    InvalidDualExponent,
    NotElliptic,
    NotFullSubgraph,
    NotNegativeDefinite,
    NotSmallExtension,
)
from .graph import PlumbingGraph, induced_subgraph
from .lattice import Cycle, LatticeContext, build_context, in_lipman_cone
from .laufer import ComputationSequence, Kind, classify, generalized_laufer, minimal_cycle
from .poincare import (
    LaurentPoly,
    StarExponent,
    canonical_dual_support,
    canonical_polynomial,
    reduce_polynomial,
    series_coefficient,
)


# ---------------------------------------------------------------- small helpers


def _elliptic_context(g: PlumbingGraph, role: str) -> tuple[LatticeContext, EllipticSequence]:
    ctx = build_context(g)
    if not classify(ctx).is_elliptic:
        raise NotElliptic(f"{role} graph is not elliptic")
    return ctx, nn_elliptic_sequence(ctx)


def _check_full_subgraph(inner: PlumbingGraph, outer: PlumbingGraph) -> None:
    missing = set(inner.vertices) - set(outer.vertices)
    if missing:
        raise NotFullSubgraph(f"vertices {sorted(missing)} are not in the outer graph")
    for v in inner.vertices:
        if inner.euler_of(v) != outer.euler_of(v):
            raise NotFullSubgraph(f"decoration of vertex {v} differs")
    if inner != induced_subgraph(outer, inner.vertices):
        raise NotFullSubgraph("inner graph is not the full subgraph on its vertices")


def star_multiplicities(ctx: LatticeContext, l: Cycle) -> StarExponent:
    """Express ``l`` in the E* basis (requires nonnegative integral coefficients)."""
    coeffs = ctx.star_coords(l)
    out = {}
    for v, c in coeffs.items():
        if c.denominator != 1 or c < 0:
            raise InvalidDualExponent(f"{l} is not a nonnegative integral combination of the E*_v")
        if c:
            out[v] = int(c)
    return StarExponent.of(out)


def dual_exponent_coefficient(ctx: LatticeContext, l: Cycle) -> int:
    """Coefficient of ``t^l`` in the series (0 outside the support)."""
    try:
        se = star_multiplicities(ctx, l)
    except InvalidDualExponent:
        return 0
    for v, k in se.items:
        d = ctx.valency[v]
        if d == 2 or (d >= 3 and k > d - 2):
            return 0
    return series_coefficient(ctx, se)


def is_dual_exponent(ctx: LatticeContext, l: Cycle) -> bool:
    if not (l - ctx.ZK).is_integral:
        return False
    if not in_lipman_cone(ctx, l):
        return False
    if not any(a < b for a, b in zip(l.coords, ctx.ZK.coords)):
        return False
    return dual_exponent_coefficient(ctx, l) != 0


def dual_level(ctx: LatticeContext, seq: EllipticSequence, dual: Cycle) -> int:
    """Level j of a dual exponent, read off the negative coordinates of its exponent."""
    ell = ctx.ZK - ctx.E_total - dual
    neg = frozenset(v for v, x in zip(ctx.graph.vertices, ell.coords) if x < 0)
    allv = frozenset(ctx.graph.vertices)
    for j in range(-1, seq.m):
        if allv - seq.B(j + 1) == neg:
            return j
    raise InvalidDualExponent(f"{dual} has no level in the elliptic sequence")


def dual_decomposition(ctx: LatticeContext, seq: EllipticSequence, dual: Cycle, j: int) -> dict[int, int]:
    """The multiplicities ``m_v`` with ``dual = C_j + sum m_v E_v``."""
    extra = dual - seq.C(j)
    if not extra.is_integral or any(x < 0 for x in extra.coords):
        raise InvalidDualExponent(f"{dual} is not of the form C_{j} + nonnegative integral cycle")
    inside = seq.B(j + 1)
    out = {}
    for v, x in zip(ctx.graph.vertices, extra.coords):
        if x:
            if v in inside:
                raise InvalidDualExponent(f"{dual} has extra multiplicity on B_{j + 1}")
            out[v] = int(x)
    return out


# ---------------------------------------------------------------- extension pairs


@dataclass(frozen=True)
class ExtensionPair:
    inner: LatticeContext
    outer: LatticeContext
    inner_seq: EllipticSequence
    outer_seq: EllipticSequence
    boundary_inner: frozenset[int]
    boundary_outer: dict[int, frozenset[int]] = field(hash=False, compare=False)
    index: int = 0
    nested: bool = True  # B_index <= inner strictly inside B_{index-1}

    @property
    def new_vertices(self) -> frozenset[int]:
        return frozenset(self.outer.graph.vertices) - frozenset(self.inner.graph.vertices)

    @cached_property
    def small(self) -> tuple[int, tuple[int, ...]] | None:
        """``(v0, new vertices)`` when the pair is a small extension through one vertex."""
        new = self.new_vertices
        if len(self.boundary_inner) != 1 or not new:
            return None
        (v0,) = self.boundary_inner
        og = self.outer.graph
        if any(og.neighbors[u] != (v0,) for u in new):
            return None
        return v0, tuple(u for u in og.vertices if u in new)


@lru_cache(maxsize=256)
def build_extension(inner: PlumbingGraph, outer: PlumbingGraph) -> ExtensionPair:
    _check_full_subgraph(inner, outer)
    ictx, iseq = _elliptic_context(inner, "inner")
    octx, oseq = _elliptic_context(outer, "outer")
    iv = frozenset(inner.vertices)
    b_outer: dict[int, frozenset[int]] = {}
    for v in inner.vertices:
        nb = frozenset(w for w in outer.neighbors[v] if w not in iv)
        if nb:
            b_outer[v] = nb
    b_inner = frozenset(b_outer)
    bad = [v for v in b_inner if len(inner.neighbors[v]) != 1 and inner.n > 1]
    if bad:
        raise BoundaryNotEndVertices(f"boundary vertices {sorted(bad)} are not end-vertices of the inner graph")
    index = next((j for j in range(0, oseq.m + 1) if oseq.B(j) <= iv), None)
    if index is None:
        raise NotFullSubgraph("inner graph contains no member of the outer elliptic sequence")
    nested = iv < oseq.B(index - 1) or (iv == oseq.B(index - 1) and index == 0)
    return ExtensionPair(ictx, octx, iseq, oseq, b_inner, b_outer, index, nested)


def project(pair: ExtensionPair, ell: Cycle) -> Cycle:
    pair.outer.bind(ell)
    return ell.restrict(pair.inner.graph)


def dual_project(pair: ExtensionPair, dual: Cycle) -> Cycle:
    o, i = pair.outer, pair.inner
    return i.ZK - i.E_total - project(pair, o.ZK - o.E_total - dual)


def dual_operator(pair: ExtensionPair, l: Cycle) -> Cycle:
    """``j*``: keep the E*-coordinates of inner vertices, drop the others."""
    coeffs = pair.outer.star_coords(l)
    return pair.inner.from_star({v: coeffs[v] for v in pair.inner.graph.vertices})


def dual_project_star_form(pair: ExtensionPair, dual: Cycle, j: int) -> Cycle:
    """The E*-basis description: ``j*(dual) + sum_v (sum_{u ~ v} m_u) E*_v`` over the boundary."""
    ms = dual_decomposition(pair.outer, pair.outer_seq, dual, j)
    out = dual_operator(pair, dual)
    for v, nbrs in pair.boundary_outer.items():
        k = sum(ms.get(u, 0) for u in nbrs)
        if k:
            out = out + k * pair.inner.Estar(v)
    return out


# ---------------------------------------------------------------- small extensions


def check_small_extension(inner: PlumbingGraph, outer: PlumbingGraph) -> list[ClauseResult]:
    """Evaluate the necessary conditions for a small extension, clause by clause."""
    _check_full_subgraph(inner, outer)
    iv = set(inner.vertices)
    new = [u for u in outer.vertices if u not in iv]
    if not new:
        raise NotSmallExtension("no new vertices")
    anchors = set()
    for u in new:
        nb = outer.neighbors[u]
        if len(nb) != 1 or nb[0] not in iv:
            raise NotSmallExtension(f"new vertex {u} is not a leaf attached to the inner graph")
        anchors.add(nb[0])
    if len(anchors) != 1:
        raise NotSmallExtension(f"new vertices attach to several vertices {sorted(anchors)}")
    (v0,) = anchors
    s = len(new)
    ictx = build_context(inner)
    if not classify(ictx).is_elliptic:
        raise NotElliptic("inner graph is not elliptic")
    seq = nn_elliptic_sequence(ictx)
    zmin = minimal_cycle(ictx)
    b0, b1 = seq.B(0), seq.B(1)  # B_1 is empty when m = 0
    out = [
        ClauseResult("a: v0 in B_-1 minus B_1", v0 not in b1, f"v0 = {v0}"),
        ClauseResult("b: Z_min multiplicity at v0 is 1", zmin[v0] == 1, f"multiplicity {zmin[v0]}"),
        ClauseResult(
            "c: (Z_min, E_v0) <= 1 - s",
            ictx.intersect_E(zmin, v0) <= 1 - s,
            f"(Z_min, E_v0) = {ictx.intersect_E(zmin, v0)}, s = {s}",
        ),
    ]
    if v0 in b0 and v0 not in b1:
        sub = induced_subgraph(inner, b0)
        ok = len(sub.neighbors[v0]) <= 1
        out.append(ClauseResult("d: v0 is an end-vertex of B_0", ok, f"valency in B_0 = {len(sub.neighbors[v0])}"))
    else:
        out.append(ClauseResult("d: v0 is an end-vertex of B_0", True, "not applicable"))
    try:
        kind = classify(build_context(outer)).kind
        out.append(ClauseResult("outer graph elliptic", kind is Kind.ELLIPTIC, kind.value))
    except NotNegativeDefinite as exc:
        out.append(ClauseResult("outer graph elliptic", False, str(exc)))
    return out


class Status(str, Enum):
    EXTENDABLE = "Extendable"
    NON_EXTENDABLE = "NonExtendable"


@dataclass(frozen=True)
class ExtensionOutcome:
    source_dual: Cycle
    level: int
    status: Status
    start: Cycle  # l'
    trace: ComputationSequence
    s_of_lprime: Cycle
    interval: tuple[int, int] | None
    extensions: tuple[tuple[Cycle, int], ...]

    @property
    def coefficient_sum(self) -> int:
        return sum(z for _, z in self.extensions)

    def to_json(self) -> dict:
        return {
            "dual": self.source_dual.to_strings(),
            "level": self.level,
            "status": self.status.value,
            "lprime": self.start.to_strings(),
            "s_lprime": self.s_of_lprime.to_strings(),
            "laufer_vertices": self.trace.vertices,
            "interval": list(self.interval) if self.interval else None,
            "extensions": [{"dual": c.to_strings(), "z": z} for c, z in self.extensions],
        }


def compositions(n: int, parts: int):
    """Ordered tuples of ``parts`` nonnegative integers summing to ``n``."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for bars in itertools.combinations(range(n + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + parts - 1 - prev - 1)
        yield tuple(out)


def extend_dual_exponent(pair: ExtensionPair, dual: Cycle, level: int | None = None) -> ExtensionOutcome:
    """Run the two-step extension algorithm for a dual exponent of the inner graph."""
    if pair.small is None:
        raise NotSmallExtension("pair is not a small extension through a single vertex")
    v0, new = pair.small
    ictx, octx = pair.inner, pair.outer
    ictx.bind(dual)
    if not is_dual_exponent(ictx, dual):
        raise InvalidDualExponent(f"{dual} is not a dual exponent of the inner graph")
    if level is None:
        level = dual_level(ictx, pair.inner_seq, dual)
    # inner level j sits at outer level j + index >= index - 1
    if not -1 <= level <= pair.inner_seq.m - 1:
        raise InvalidDualExponent(f"level {level} outside [-1, {pair.inner_seq.m - 1}]")
    ms = dual_decomposition(ictx, pair.inner_seq, dual, level)
    # Step I: start from C^outer_{j+index} plus the inner multiplicities
    start = pair.outer_seq.C(level + pair.index)
    for v, k in ms.items():
        start = start + k * octx.E(v)
    trace = generalized_laufer(octx, start)
    s = trace.result
    added = (s - start).support
    newset = frozenset(new)
    if not added <= newset:
        return ExtensionOutcome(dual, level, Status.NON_EXTENDABLE, start, trace, s, None, ())
    # Step II: distribute N over the new vertices
    m = int(-octx.intersect_E(s, v0))
    lo, hi = max(0, m - len(new) + 1), m
    exts = []
    for n in range(lo, hi + 1):
        for parts in compositions(n, len(new)):
            c = s
            for u, k in zip(new, parts):
                if k:
                    c = c + k * octx.E(u)
            exts.append((c, dual_exponent_coefficient(octx, c)))
    status = Status.EXTENDABLE if exts else Status.NON_EXTENDABLE
    return ExtensionOutcome(dual, level, status, start, trace, s, (lo, hi), tuple(exts))


# ---------------------------------------------------------------- chains


def small_chain(inner: PlumbingGraph, outer: PlumbingGraph) -> list[PlumbingGraph]:
    """Decompose an extension into small extensions through end-vertices.

    At each step the boundary vertex with the smallest id gets all of its
    outer-only neighbours attached.
    """
    chain = [inner]
    cur = set(inner.vertices)
    while len(cur) < outer.n:
        boundary = sorted(v for v in cur if any(w not in cur for w in outer.neighbors[v]))
        v = boundary[0]
        cur |= {w for w in outer.neighbors[v] if w not in cur}
        chain.append(induced_subgraph(outer, cur))
    return chain


@dataclass(frozen=True)
class ChainStep:
    pair: ExtensionPair
    outcomes: dict[Cycle, ExtensionOutcome]


def extend_along_chain(chain: list[PlumbingGraph], dual: Cycle) -> tuple[list[ChainStep], list[dict[Cycle, int]]]:
    """Extend ``dual`` step by step; returns per-step outcomes and the surviving duals."""
    steps: list[ChainStep] = []
    layers: list[dict[Cycle, int]] = [{dual: dual_exponent_coefficient(build_context(chain[0]), dual)}]
    for a, b in zip(chain, chain[1:]):
        pair = build_extension(a, b)
        outcomes = {}
        nxt: dict[Cycle, int] = {}
        for d in layers[-1]:
            oc = extend_dual_exponent(pair, d)
            outcomes[d] = oc
            for c, z in oc.extensions:
                nxt[c] = z
        steps.append(ChainStep(pair, outcomes))
        layers.append(nxt)
    return steps, layers


# ---------------------------------------------------------------- truncation and goodness


def truncate_polynomial(p0: LaurentPoly, seq: EllipticSequence, i: int) -> LaurentPoly:
    """Keep the terms whose exponent is negative on every vertex outside B_i."""
    if not 0 <= i <= seq.m:
        raise IndexError(f"truncation index {i} outside [0, {seq.m}]")
    outside = [k for k, v in enumerate(p0.variables) if v not in seq.B(i)]
    terms = {e: c for e, c in p0.terms if all(e[k] < 0 for k in outside)}
    return LaurentPoly.from_dict(p0.variables, terms)


def brute_force_preimages(pair: ExtensionPair) -> dict[Cycle, list[tuple[Cycle, int]]]:
    """Group the outer dual exponents (levels >= index - 1) by their dual projection."""
    out: dict[Cycle, list[tuple[Cycle, int]]] = {}
    for el in canonical_dual_support(pair.outer):
        j = dual_level(pair.outer, pair.outer_seq, el.cycle)
        if j < pair.index - 1:
            continue
        out.setdefault(dual_project(pair, el.cycle), []).append((el.cycle, el.coeff))
    return out


@dataclass(frozen=True)
class GoodnessReport:
    index: int
    identity_holds: bool
    all_extendable: bool
    per_exponent: tuple[dict, ...]
    algorithm_matches: bool | None  # None when the chain algorithm was not run

    @property
    def good(self) -> bool:
        return self.all_extendable

    @property
    def consistent(self) -> bool:
        return self.identity_holds == self.all_extendable and self.algorithm_matches is not False

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "good": self.good,
            "identity_holds": self.identity_holds,
            "consistent": self.consistent,
            "algorithm_matches": self.algorithm_matches,
            "per_exponent": list(self.per_exponent),
        }


def is_good_extension(pair: ExtensionPair, run_algorithm: bool = True) -> GoodnessReport:
    ictx, octx = pair.inner, pair.outer
    p_inner = canonical_polynomial(ictx)
    p_outer = canonical_polynomial(octx)
    lhs = reduce_polynomial(truncate_polynomial(p_outer, pair.outer_seq, pair.index), ictx.graph.vertices)
    identity = lhs == p_inner

    pre = brute_force_preimages(pair)
    chain = small_chain(ictx.graph, octx.graph) if run_algorithm else None
    per = []
    all_ext = True
    matches: bool | None = True if run_algorithm else None
    for el in canonical_dual_support(ictx):
        d = el.cycle
        found = pre.get(d, [])
        entry = {
            "dual": d.to_strings(),
            "star": str(star_multiplicities(ictx, d)),
            "level": dual_level(ictx, pair.inner_seq, d),
            "z": el.coeff,
            "status": Status.EXTENDABLE.value if found else Status.NON_EXTENDABLE.value,
            "extensions": [{"dual": c.to_strings(), "z": z} for c, z in sorted(found, key=lambda t: t[0].coords)],
        }
        if not found:
            all_ext = False
        if run_algorithm:
            _, layers = extend_along_chain(chain, d)
            algo = set(layers[-1])
            if algo != {c for c, _ in found}:
                matches = False
                entry["algorithm_mismatch"] = True
        per.append(entry)
    per.sort(key=lambda e: e["dual"])
    return GoodnessReport(pair.index, identity, all_ext, tuple(per), matches)


# ---------------------------------------------------------------- binomial identities


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero when ``k < 0`` or ``k > n >= 0``."""
    if k < 0:
        return 0
    if n < 0:
        return (-1) ** k * comb(-n + k - 1, k)
    return comb(n, k)


def binomial_identities(d: int, m: int) -> tuple[int, int | None]:
    """The alternating sums S_{d,m} and, when ``m <= d``, S'_{d,m}."""
    s = sum((-1) ** i * binom(d, i) * binom(m + d - i, d) for i in range(min(d, m) + 1))
    s2 = None
    if m <= d:
        s2 = sum((-1) ** i * binom(d, i) * binom(m + d - i - 1, d - 1) for i in range(m + 1))
    return s, s2


def ehrhart_simplex(n: int, parts: int) -> int:
    """Number of compositions of ``n`` into ``parts`` nonnegative parts."""
    return binom(n + parts - 1, parts - 1)


__all__ = [
    "ChainStep",
    "ExtensionOutcome",
    "ExtensionPair",
    "GoodnessReport",
    "Status",
    "binom",
    "binomial_identities",
    "brute_force_preimages",
    "build_extension",
    "check_small_extension",
    "compositions",
    "dual_exponent_coefficient",
    "dual_level",
    "dual_operator",
    "dual_project",
    "dual_project_star_form",
    "ehrhart_simplex",
    "extend_along_chain",
    "extend_dual_exponent",
    "is_dual_exponent",
    "is_good_extension",
    "project",
    "small_chain",
    "star_multiplicities",
    "truncate_polynomial",
]

"""The invariant suite: every structural identity, evaluated on one graph.

Each check yields a :class:`Check` with status ``pass``, ``fail`` or ``skip``.
Checks that need an elliptic graph are skipped otherwise.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from . import oracles
from .ellseq import nn_elliptic_sequence, numerically_gorenstein_subgraphs, verify_sequence
from .errors import BoundaryNotEndVertices, NotElliptic, PlumbingError
from .extensions import (
    Status,
    binomial_identities,
    brute_force_preimages,
    build_extension,
    compositions,
    dual_decomposition,
    dual_exponent_coefficient,
    dual_level,
    dual_project,
    ehrhart_simplex,
    extend_along_chain,
    extend_dual_exponent,
    is_good_extension,
    small_chain,
)
from .graph import PlumbingGraph, components, induced_subgraph, parse_graph, serialize_graph
from .lattice import (
    Cycle,
    LatticeContext,
    build_context,
    chi,
    class_equal,
    in_lipman_cone,
    intersect,
    leq,
    representative_r,
)
from .laufer import (
    Kind,
    chi_zero_cycles,
    classify,
    generalized_laufer,
    minimal_cycle,
    minimally_elliptic_cycle,
    s_of,
)
from .poincare import (
    canonical_dual_support,
    canonical_polynomial,
    classify_exponents,
    counting_function,
    enumerate_dual_support,
    evaluate_at_one,
    reduce_polynomial,
    supports_by_level,
    surgery_pieces,
    sw0_norm,
    sw0_of_subgraph,
    level_cycle_form,
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def _check(name: str, ok: bool, detail: str = "") -> Check:
    return Check(name, PASS if ok else FAIL, "" if ok else detail)


def _guard(name: str, fn: Callable[[], Check | list[Check]]) -> list[Check]:
    try:
        out = fn()
    except (AssertionError, PlumbingError, ValueError) as exc:
        return [Check(name, FAIL, f"{type(exc).__name__}: {exc}")]
    return out if isinstance(out, list) else [out]


# ---------------------------------------------------------------- graph and lattice


def graph_checks(g: PlumbingGraph) -> list[Check]:
    out = [_check("graph: parse(serialize(g)) == g", parse_graph(serialize_graph(g)) == g)]
    vals = [len(g.neighbors[v]) for v in g.vertices]
    out.append(_check("graph: sum of valencies = 2(|V| - 1)", sum(vals) == 2 * (g.n - 1), f"sum {sum(vals)}"))
    bad = []
    for v in g.vertices:
        rest = [w for w in g.vertices if w != v]
        for comp in components(g, rest) if rest else []:
            sub = induced_subgraph(g, comp)
            for w in sub.vertices:
                if sub.euler_of(w) != g.euler_of(w) or len(sub.neighbors[w]) > len(g.neighbors[w]):
                    bad.append((v, w))
    out.append(_check("graph: induced subgraphs keep decorations, valencies shrink", not bad, f"{bad[:3]}"))
    return out


def lattice_checks(ctx: LatticeContext) -> list[Check]:
    g = ctx.graph
    out = []
    out.append(
        _check(
            "lattice: E*_v strictly positive",
            all(x > 0 for v in g.vertices for x in ctx.Estar(v).coords),
        )
    )
    bad = []
    for v in g.vertices:
        for w in g.vertices:
            want = -1 if v == w else 0
            if ctx.intersect_E(ctx.Estar(v), w) != want:
                bad.append((v, w))
    out.append(_check("lattice: (E*_v, E_w) = -delta_vw", not bad, f"{bad[:3]}"))
    zk = oracles.naive_canonical_cycle(ctx)
    out.append(_check("lattice: Z_K from adjunction = E + sum (delta_v - 2) E*_v", zk == ctx.ZK, f"{zk} vs {ctx.ZK}"))
    rng = random.Random(g.n * 7919 + sum(g.euler))
    bad = []
    for _ in range(10):
        a = ctx.cycle(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in g.vertices)
        b = ctx.cycle(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in g.vertices)
        if chi(ctx, a + b) != chi(ctx, a) + chi(ctx, b) - intersect(ctx, a, b):
            bad.append((a, b))
        r = representative_r(ctx, a)
        if not (r - a).is_integral or not all(0 <= x < 1 for x in r.coords):
            bad.append(("r", a))
        if not class_equal(ctx, a, r) or class_equal(ctx, a, r) != class_equal(ctx, r, a):
            bad.append(("class", a))
    out.append(_check("lattice: chi bilinearity and representatives", not bad, f"{bad[:2]}"))
    return out


# ---------------------------------------------------------------- laufer


def laufer_checks(ctx: LatticeContext) -> list[Check]:
    g = ctx.graph
    out = []
    rng = random.Random(17)
    starts = [ctx.E(min(g.vertices))] + [ctx.Estar(v) - ctx.E(v) for v in g.vertices] + [ctx.ZK]
    bad = []
    for s in starts:
        det = generalized_laufer(ctx, s).result
        rnd = generalized_laufer(ctx, s, chooser=lambda adm: rng.choice(list(adm))).result
        if det != rnd:
            bad.append(str(s))
    out.append(_check("laufer: result independent of vertex choice", not bad, f"{bad[:2]}"))
    bad = []
    for s in starts:
        r = s_of(ctx, s)
        if not (leq(s, r) and in_lipman_cone(ctx, r) and class_equal(ctx, r, s)):
            bad.append(str(s))
    out.append(_check("laufer: s(l') >= l', anti-nef, same class", not bad, f"{bad[:2]}"))
    if g.n <= 6:
        box = minimal_cycle(ctx) + ctx.E_total
        bad = []
        for s in starts:
            ref = oracles.naive_antinef_min(ctx, s, box)
            if ref is not None and ref != s_of(ctx, s):
                bad.append(str(s))
        out.append(_check("laufer: s(l') minimal (exhaustive box)", not bad, f"{bad}"))
    else:
        out.append(Check("laufer: s(l') minimal (exhaustive box)", SKIP, "more than 6 vertices"))
    kind = classify(ctx).kind
    if kind is Kind.RATIONAL:
        seq = generalized_laufer(ctx, ctx.E(min(g.vertices)))
        prev = seq.start
        bad = []
        for cyc, v in seq.steps:
            if ctx.intersect_E(prev, v) != 1:
                bad.append(v)
            prev = cyc
        out.append(_check("laufer: rational steps have (x, E_v) = 1", not bad, f"vertices {bad}"))
        bad = [v for v in g.vertices if -g.euler_of(v) < len(g.neighbors[v]) - 1]
        out.append(_check("laufer: rational vertices satisfy -e_v >= delta_v - 1", not bad, f"{bad}"))
    elif kind is Kind.ELLIPTIC:
        c = minimally_elliptic_cycle(ctx)
        hits = chi_zero_cycles(ctx, minimal_cycle(ctx))
        bad = [str(h) for h in hits if not leq(c, h)]
        out.append(_check("laufer: chi(l) = 0 below Z_min implies C <= l", not bad, f"{bad[:2]}"))
    return out


# ---------------------------------------------------------------- elliptic sequence


def ellseq_checks(ctx: LatticeContext) -> list[Check]:
    seq = nn_elliptic_sequence(ctx)
    out = [Check(f"ellseq: {c.name}", PASS if c.ok else FAIL, "" if c.ok else c.detail) for c in verify_sequence(ctx, seq)]
    if ctx.graph.n <= 12:
        bs = {seq.B(j) for j in range(0, seq.m + 1)}
        missing = [sorted(s) for s in numerically_gorenstein_subgraphs(ctx) if s not in bs]
        out.append(_check("ellseq: elliptic numerically Gorenstein subgraphs are B_j", not missing, f"{missing[:2]}"))
    else:
        out.append(Check("ellseq: elliptic numerically Gorenstein subgraphs are B_j", SKIP, "more than 12 vertices"))
    return out


# ---------------------------------------------------------------- poincare


def oracle_check(ctx: LatticeContext, box: Cycle | None = None) -> Check:
    box = ctx.ZK - ctx.E_total if box is None else box
    ref = {k: v for k, v in oracles.product_series(ctx, box).items() if v}
    fast = {el.cycle: el.coeff for el in enumerate_dual_support(ctx, None, box)}
    diff = [str(k) for k in set(ref) ^ set(fast)] + [str(k) for k in ref if k in fast and ref[k] != fast[k]]
    return _check("poincare: enumeration matches product expansion", not diff, f"{len(diff)} mismatches, e.g. {diff[:2]}")


def poincare_checks(ctx: LatticeContext) -> list[Check]:
    out = []
    kind = classify(ctx).kind
    if ctx.graph.n <= 12:
        out += _guard("poincare: enumeration matches product expansion", lambda: oracle_check(ctx))
    else:
        out.append(Check("poincare: enumeration matches product expansion", SKIP, "more than 12 vertices"))
    p0 = canonical_polynomial(ctx)
    sw = evaluate_at_one(p0)
    if kind is Kind.RATIONAL:
        out.append(_check("poincare: sw0 = 0 on rational graphs", sw == 0, f"sw0 = {sw}"))
        return out
    if kind is not Kind.ELLIPTIC:
        out.append(Check("poincare: elliptic identities", SKIP, f"graph is {kind.value}"))
        return out
    seq = nn_elliptic_sequence(ctx)
    m = seq.m
    out.append(_check("poincare: sw0 = m + 1", sw == m + 1, f"sw0 = {sw}, m = {m}"))
    q = counting_function(ctx, ctx.ZK, ctx.graph.vertices, ctx.ZK)
    out.append(_check("poincare: P0(1) = Q(Z_K) over all vertices", q == sw, f"Q = {q}"))
    neg = [e for e, _ in p0.terms if all(x < 0 for x in e)]
    out.append(_check("poincare: no exponent negative everywhere", not neg, f"{neg[:1]}"))
    bad = []
    for j in range(0, m + 1):
        for i in range(-1, j):
            val = counting_function(ctx, ctx.ZK, seq.B(i) - seq.B(j), ctx.ZK)
            if val != j:
                bad.append((i, j, val))
    out.append(_check("poincare: Q over B_i minus B_j at Z_K equals j", not bad, f"(i, j, Q) {bad[:3]}"))
    records = classify_exponents(ctx, p0, seq)
    by_level = supports_by_level(records, m)
    sums = {j: sum(r.coeff for r in rs) for j, rs in by_level.items()}
    out.append(_check("poincare: each level has coefficient sum 1", all(s == 1 for s in sums.values()), f"{sums}"))
    red = reduce_polynomial(p0, seq.B(m))
    out.append(_check("poincare: reduction to |C| is the sum over C_j", red == level_cycle_form(ctx, seq), red.to_text()))
    bad = []
    for r in records:
        adj = {w for b in seq.B(r.level + 1) for w in ctx.graph.neighbors[b]} - seq.B(r.level + 1)
        if any(v in adj for v, _ in r.extra):
            bad.append(str(r.exponent))
    out.append(_check("poincare: no extra multiplicity next to B_j+1", not bad, f"{bad[:2]}"))
    bad = []
    for j in range(0, m + 1):
        for i in range(-1, j):
            removed = seq.B(i) - seq.B(j)
            if not removed:
                continue
            rhs = counting_function(ctx, ctx.ZK, removed, ctx.ZK)
            lhs = sw - sum(sw0_of_subgraph(ctx, piece) for piece in surgery_pieces(ctx, removed))
            if lhs != rhs:
                bad.append((i, j, lhs, rhs))
    out.append(_check("poincare: surgery formula on B_i minus B_j", not bad, f"(i, j, lhs, rhs) {bad}"))
    return out


# ---------------------------------------------------------------- extensions


def extension_candidates(ctx: LatticeContext) -> list[PlumbingGraph]:
    """Inner graphs for the extension suite: the B_j and leaf-group removals."""
    g = ctx.graph
    seq = nn_elliptic_sequence(ctx)
    cands: dict[frozenset, None] = {}
    for j in range(0, seq.m + 1):
        if seq.B(j) != frozenset(g.vertices):
            cands[seq.B(j)] = None
    for v in g.vertices:
        leaves = [w for w in g.neighbors[v] if len(g.neighbors[w]) == 1]
        for k in range(1, len(leaves) + 1):
            for drop in itertools.combinations(leaves, k):
                rest = frozenset(g.vertices) - set(drop)
                if rest:
                    cands[rest] = None
    out = []
    for s in cands:
        sub = induced_subgraph(g, s)
        try:
            build_extension(sub, g)
        except (NotElliptic, BoundaryNotEndVertices):
            continue
        out.append(sub)
    out.sort(key=lambda h: (h.n, h.vertices))
    return out


def _pair_checks(inner: PlumbingGraph, outer: PlumbingGraph) -> list[Check]:
    tag = f"[{','.join(map(str, inner.vertices))}]"
    pair = build_extension(inner, outer)
    out = []
    rep = is_good_extension(pair)
    out.append(
        _check(
            f"extensions {tag}: polynomial identity iff every exponent extends",
            rep.identity_holds == rep.all_extendable,
            f"identity {rep.identity_holds}, extendable {rep.all_extendable}",
        )
    )
    out.append(_check(f"extensions {tag}: chain algorithm equals brute-force preimage", rep.algorithm_matches is not False))
    if pair.inner_seq.B(pair.inner_seq.m) == frozenset(inner.vertices) and len(canonical_dual_support(pair.inner)) == 1:
        out.append(_check(f"extensions {tag}: minimally elliptic inner is good", rep.good))
    # projection of outer exponents lands in the right inner level
    bad = []
    inner_support = {el.cycle for el in canonical_dual_support(pair.inner)}
    for el in canonical_dual_support(pair.outer):
        j = dual_level(pair.outer, pair.outer_seq, el.cycle)
        if j < pair.index - 1:
            continue
        d = dual_project(pair, el.cycle)
        ms = dual_decomposition(pair.outer, pair.outer_seq, el.cycle, j)
        want = pair.inner_seq.C(j - pair.index) + pair.inner.cycle(
            ms.get(v, 0) for v in inner.vertices
        )
        if d != want or d not in inner_support or dual_level(pair.inner, pair.inner_seq, d) != j - pair.index:
            bad.append(str(el.cycle))
    out.append(_check(f"extensions {tag}: projection maps level j to level j - index", not bad, f"{bad[:2]}"))
    # coefficient sums over preimages
    pre = brute_force_preimages(pair)
    bad = []
    for d, items in pre.items():
        if sum(z for _, z in items) != dual_exponent_coefficient(pair.inner, d):
            bad.append(str(d))
    out.append(_check(f"extensions {tag}: preimage coefficient sums", not bad, f"{bad[:2]}"))
    # small steps: algorithm vs brute force, coefficient identity, and chains
    chain = small_chain(inner, outer)
    for a, b in zip(chain, chain[1:]):
        sp = build_extension(a, b)
        spre = brute_force_preimages(sp)
        bad_x, bad_z = [], []
        for el in canonical_dual_support(sp.inner):
            j = dual_level(sp.inner, sp.inner_seq, el.cycle)
            oc = extend_dual_exponent(sp, el.cycle, j)
            got = sorted((c.coords, z) for c, z in oc.extensions)
            ref = sorted((c.coords, z) for c, z in spre.get(el.cycle, []))
            if got != ref:
                bad_x.append(str(el.cycle))
            if oc.status is Status.EXTENDABLE and oc.coefficient_sum != el.coeff:
                bad_z.append(str(el.cycle))
        stag = f"{tag} step +{','.join(map(str, sorted(sp.new_vertices)))}"
        out.append(_check(f"extensions {stag}: algorithm equals brute-force preimage", not bad_x, f"{bad_x[:2]}"))
        out.append(_check(f"extensions {stag}: extension coefficients sum to z", not bad_z, f"{bad_z[:2]}"))
    if len(chain) >= 3:
        bad = []
        for k in range(len(chain) - 2):
            g0 = chain[k]
            c0 = build_context(g0)
            for el in canonical_dual_support(c0):
                steps, layers = extend_along_chain(chain[k : k + 3], el.cycle)
                if not layers[2]:
                    continue
                dead = [z for d, z in layers[1].items() if not steps[1].outcomes[d].extensions]
                if sum(dead) != 0:
                    bad.append((k, str(el.cycle)))
        out.append(_check(f"extensions {tag}: non-extendable intermediates sum to 0", not bad, f"{bad[:2]}"))
    return out


def extension_checks(ctx: LatticeContext, max_pairs: int = 6) -> list[Check]:
    out = []
    for inner in extension_candidates(ctx)[:max_pairs]:
        name = f"extensions [{','.join(map(str, inner.vertices))}]"
        out += _guard(name, lambda inner=inner: _pair_checks(inner, ctx.graph))
    return out


def combinatorial_checks(limit: int = 20) -> list[Check]:
    bad = []
    for d in range(limit + 1):
        for m in range(limit + 1):
            s, s2 = binomial_identities(d, m)
            # at m = 0 the second sum is the single term C(d-1, d-1) = 1
            want2 = 1 if m == 0 and d >= 1 else 0
            if s != 1 or (m <= d and s2 != want2):
                bad.append((d, m))
    out = [_check(f"extensions: binomial identities for d, m <= {limit}", not bad, f"{bad[:3]}")]
    bad = [
        (n, s)
        for n in range(11)
        for s in range(1, 11)
        if ehrhart_simplex(n, s) != sum(1 for _ in compositions(n, s))
    ]
    out.append(_check("extensions: composition count is binom(N+s-1, s-1)", not bad, f"{bad[:3]}"))
    return out


# ---------------------------------------------------------------- driver


def run_checks(g: PlumbingGraph, extensions: bool = True) -> list[Check]:
    """All invariants for one graph."""
    out = graph_checks(g)
    ctx = build_context(g)
    out += lattice_checks(ctx)
    out += _guard("laufer", lambda: laufer_checks(ctx))
    kind = classify(ctx).kind
    if kind is Kind.ELLIPTIC:
        out += _guard("ellseq", lambda: ellseq_checks(ctx))
    else:
        out.append(Check("ellseq: elliptic sequence identities", SKIP, f"graph is {kind.value}"))
    out += _guard("poincare", lambda: poincare_checks(ctx))
    if extensions and kind is Kind.ELLIPTIC:
        out += extension_checks(ctx)
    elif extensions:
        out.append(Check("extensions: extension identities", SKIP, f"graph is {kind.value}"))
    return out


def iter_failures(checks: list[Check]) -> Iterator[Check]:
    return (c for c in checks if c.status == FAIL)


__all__ = [
    "Check",
    "FAIL",
    "PASS",
    "SKIP",
    "combinatorial_checks",
    "ellseq_checks",
    "extension_candidates",
    "extension_checks",
    "graph_checks",
    "iter_failures",
    "lattice_checks",
    "laufer_checks",
    "oracle_check",
    "poincare_checks",
    "run_checks",
]

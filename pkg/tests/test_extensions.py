import pytest
from hypothesis import given
from hypothesis import strategies as st

from plumbpoly.errors import BoundaryNotEndVertices, InvalidDualExponent, NotElliptic, NotFullSubgraph
from plumbpoly.extensions import (
    Status,
    binom,
    binomial_identities,
    brute_force_preimages,
    build_extension,
    check_small_extension,
    compositions,
    dual_project,
    ehrhart_simplex,
    extend_along_chain,
    extend_dual_exponent,
    is_dual_exponent,
    is_good_extension,
    small_chain,
    star_multiplicities,
    truncate_polynomial,
)
from plumbpoly.graph import induced_subgraph
from plumbpoly.laufer import s_h
from plumbpoly.poincare import canonical_polynomial


def sub(g, ids):
    return induced_subgraph(g, list(ids))


@pytest.fixture(scope="module")
def fig1_pair(graphs):
    g = graphs["fig1"]
    return build_extension(sub(g, [v for v in g.vertices if v not in (21, 22)]), g)


def test_fig1_five_extensions(fig1_pair):
    pair = fig1_pair
    octx, ictx = pair.outer, pair.inner
    s = s_h(octx, octx.ZK)
    dual = dual_project(pair, s)
    assert dual == ictx.from_star({1: 1, 2: 2})
    out = extend_dual_exponent(pair, dual)
    assert out.status is Status.EXTENDABLE
    got = {c: z for c, z in out.extensions}
    assert got == {
        octx.from_star({1: 1, 2: 1, 21: 2}): -1,
        octx.from_star({1: 1, 2: 1, 22: 2}): -1,
        octx.from_star({1: 1, 21: 4}): 1,
        octx.from_star({1: 1, 21: 2, 22: 2}): 1,
        octx.from_star({1: 1, 22: 4}): 1,
    }
    assert out.coefficient_sum == 1


def test_fig1_is_small(fig1_pair):
    assert fig1_pair.small == (2, (21, 22))
    assert all(c.ok for c in check_small_extension(fig1_pair.inner.graph, fig1_pair.outer.graph))


def test_fig1_algorithm_matches_brute_force(fig1_pair):
    rep = is_good_extension(fig1_pair)
    assert rep.good and rep.identity_holds and rep.algorithm_matches


@pytest.mark.parametrize(
    "outer,inner,index,good",
    [
        ("ex2", range(1, 7), 1, True),
        ("fig2_12", range(1, 11), 0, True),
        ("fig2", range(1, 17), 0, False),
        ("fig2", range(1, 11), 1, True),
    ],
)
def test_goodness_table(graphs, outer, inner, index, good):
    g = graphs[outer]
    pair = build_extension(sub(g, inner), g)
    rep = is_good_extension(pair)
    assert pair.index == index
    assert rep.good is good
    assert rep.identity_holds is good
    assert rep.consistent


def test_fig2_non_extendable_exponent(graphs):
    g = graphs["fig2"]
    pair = build_extension(sub(g, range(1, 17)), g)
    rep = is_good_extension(pair)
    bad = [e for e in rep.per_exponent if e["status"] != "Extendable"]
    ictx = pair.inner
    want = ictx.from_star({7: 1, 11: 1, 14: 1, 15: 6})
    assert want.to_strings() in [e["dual"] for e in bad]
    assert {e["level"] for e in bad} == {1}
    out = extend_dual_exponent(pair, want)
    assert out.status is Status.NON_EXTENDABLE
    assert out.trace.vertices == [17, 16]
    assert not out.extensions


def test_identity_via_truncation(graphs):
    g = graphs["fig2_12"]
    pair = build_extension(sub(g, range(1, 11)), g)
    p_out = canonical_polynomial(pair.outer)
    p_in = canonical_polynomial(pair.inner)
    from plumbpoly.poincare import reduce_polynomial

    assert reduce_polynomial(truncate_polynomial(p_out, pair.outer_seq, pair.index), pair.inner.graph.vertices) == p_in
    with pytest.raises(IndexError):
        truncate_polynomial(p_out, pair.outer_seq, pair.outer_seq.m + 1)


def test_chain_matches_brute_force(graphs):
    g = graphs["fig2"]
    inner = sub(g, range(1, 11))
    chain = small_chain(inner, g)
    assert chain[0] == inner and chain[-1] == g
    pair = build_extension(inner, g)
    brute = brute_force_preimages(pair)
    for dual in brute:
        _, layers = extend_along_chain(chain, dual)
        got = {c: z for c, z in layers[-1].items() if z}
        want = {c: z for c, z in brute[dual] if z}
        assert got == want


def test_build_extension_errors(graphs):
    g = graphs["fig2_12"]
    with pytest.raises(BoundaryNotEndVertices):
        build_extension(sub(g, range(1, 10)), g)
    with pytest.raises(NotFullSubgraph):
        build_extension(graphs["me6"], graphs["fig1"])
    with pytest.raises(NotElliptic):
        build_extension(sub(g, [1, 2]), g)


def test_invalid_dual_exponent(fig1_pair):
    ictx = fig1_pair.inner
    assert not is_dual_exponent(ictx, ictx.zero())
    with pytest.raises(InvalidDualExponent):
        extend_dual_exponent(fig1_pair, ictx.zero())
    with pytest.raises(InvalidDualExponent):
        star_multiplicities(ictx, ictx.E(1))


def test_non_definite_outer_is_a_failed_clause(graphs):
    from plumbpoly.graph import PlumbingGraph

    g = graphs["me6"]
    bigger = PlumbingGraph.from_data(
        [(v, e) for v, e in zip(g.vertices, g.euler)] + [(7, -1)], list(g.edges) + [(3, 7)]
    )
    res = {c.name: c.ok for c in check_small_extension(g, bigger)}
    assert res["outer graph elliptic"] is False


@given(st.integers(0, 8), st.integers(1, 4))
def test_compositions_count(n, parts):
    comps = list(compositions(n, parts))
    assert len(comps) == len(set(comps)) == ehrhart_simplex(n, parts)
    assert all(sum(c) == n and len(c) == parts for c in comps)


@given(st.integers(1, 9), st.integers(0, 12))
def test_binomial_identities(d, m):
    s, s2 = binomial_identities(d, m)
    assert s == 1
    if m <= d:
        assert s2 == (1 if m == 0 else 0)
    else:
        assert s2 is None


def test_binom_conventions():
    assert binom(5, -1) == 0
    assert binom(-1, 3) == -1
    assert binom(-2, 2) == 3
    assert binom(3, 5) == 0

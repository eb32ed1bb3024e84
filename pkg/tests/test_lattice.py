from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plumbpoly.errors import BindingError, NotNegativeDefinite
from plumbpoly.graph import PlumbingGraph
from plumbpoly.lattice import (
    Cycle,
    build_context,
    canonical_cycle,
    chi,
    class_equal,
    cycle_from_strings,
    in_lipman_cone,
    intersect,
    is_integral,
    leq,
    lt_all,
    min_cycles,
    not_geq,
    representative_r,
)
from plumbpoly.oracles import naive_canonical_cycle


def test_single_vertex(ctxs):
    ctx = ctxs["g1"]
    assert ctx.det == 2
    assert ctx.Estar(1).coords == (Fraction(1, 2),)
    assert canonical_cycle(ctx).is_zero


def test_ex2_canonical_cycle(ctxs):
    ctx = ctxs["ex2"]
    assert ctx.ZK == ctx.cycle([2, 4, 2, 4, 2, 2, 2, 1, 1, 1])
    assert ctx.det == 64
    assert ctx.numerically_gorenstein


def test_fig1_not_gorenstein(ctxs):
    ctx = ctxs["fig1"]
    assert not ctx.numerically_gorenstein
    assert ctx.ZK[21] == Fraction(25, 32)


def test_positive_euler_rejected():
    g = PlumbingGraph.from_data([(1, -2), (2, 1)], [(1, 2)])
    with pytest.raises(NotNegativeDefinite) as info:
        build_context(g)
    assert info.value.order == 2


def test_minus_one_chain_rejected():
    g = PlumbingGraph.from_data([(1, -1), (2, -1)], [(1, 2)])
    with pytest.raises(NotNegativeDefinite):
        build_context(g)


@pytest.mark.parametrize("name", ["g1", "a2", "me6", "ex2", "fig1", "fig2", "star4"])
def test_dual_basis(ctxs, name):
    ctx = ctxs[name]
    for v in ctx.graph.vertices:
        assert all(x > 0 for x in ctx.Estar(v).coords)
        for w in ctx.graph.vertices:
            assert ctx.intersect_E(ctx.Estar(v), w) == (-1 if v == w else 0)
    assert naive_canonical_cycle(ctx) == ctx.ZK
    for v in ctx.graph.vertices:
        assert (ctx.det * ctx.Estar(v)).is_integral


def test_intersection_and_chi(ctxs):
    ctx = ctxs["me6"]
    c = ctx.cycle([1, 2, 1, 2, 1, 1])
    assert in_lipman_cone(ctx, c)
    assert chi(ctx, c) == 0
    assert chi(ctx, ctx.E(1)) == 1
    assert intersect(ctx, ctx.E(1), ctx.E(2)) == 1
    assert intersect(ctx, ctx.E(6), ctx.E(6)) == -4


def test_representative_and_classes(ctxs):
    ctx = ctxs["fig1"]
    r = representative_r(ctx, ctx.ZK)
    assert all(0 <= x < 1 for x in r.coords)
    assert class_equal(ctx, r, ctx.ZK)
    assert not is_integral(ctx, ctx.ZK)
    assert not representative_r(ctx, ctx.ZK).is_zero


def test_order_helpers(ctxs):
    ctx = ctxs["a2"]
    a, b = ctx.cycle([0, 1]), ctx.cycle([1, 1])
    assert leq(a, b) and not lt_all(a, b) and not_geq(a, b)
    assert min_cycles(a, ctx.cycle([1, 0])).is_zero


def test_binding_errors(ctxs):
    with pytest.raises(BindingError):
        ctxs["a2"].E(1) + ctxs["me6"].E(1)
    with pytest.raises(BindingError):
        intersect(ctxs["a2"], ctxs["me6"].E(1), ctxs["me6"].E(1))


def test_cycle_strings(ctxs):
    ctx = ctxs["fig1"]
    assert cycle_from_strings(ctx.graph, ctx.ZK.to_strings()) == ctx.ZK
    assert ctx.ZK.to_strings()[0] == "19/8"


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@pytest.mark.parametrize("name", ["me6", "ex2", "star4"])
@given(data=st.data())
def test_chi_bilinearity(ctxs, name, data):
    ctx = ctxs[name]
    n = ctx.graph.n
    a = ctx.cycle(data.draw(st.lists(fractions, min_size=n, max_size=n)))
    b = ctx.cycle(data.draw(st.lists(fractions, min_size=n, max_size=n)))
    assert chi(ctx, a + b) == chi(ctx, a) + chi(ctx, b) - intersect(ctx, a, b)
    assert intersect(ctx, a, b) == intersect(ctx, b, a)


@given(data=st.data())
def test_representative_properties(ctxs, data):
    ctx = ctxs["fig2"]
    n = ctx.graph.n
    a = ctx.cycle(data.draw(st.lists(fractions, min_size=n, max_size=n)))
    r = representative_r(ctx, a)
    assert (a - r).is_integral
    assert all(0 <= x < 1 for x in r.coords)
    assert class_equal(ctx, a, r) and class_equal(ctx, r, a)


def test_integral_chi_formula(ctxs):
    ctx = ctxs["ex2"]
    l = ctx.cycle([1, 1, 0, 2, 0, 1, 3, 0, 1, 2])
    quad = sum(
        ctx.M[i][j] * l.coords[i] * l.coords[j] for i in range(ctx.graph.n) for j in range(ctx.graph.n)
    )
    lin = sum(l.coords[i] * (e + 2) for i, e in enumerate(ctx.graph.euler))
    assert 2 * chi(ctx, l) == -quad + lin


def test_cycle_arithmetic(ctxs):
    ctx = ctxs["a2"]
    c = Cycle.from_map(ctx.graph, {2: Fraction(1, 3)})
    assert (3 * c).is_integral
    assert (-c + c).is_zero
    assert c[2] == Fraction(1, 3)
    assert str(c) == "(0,1/3)"

import pytest

from plumbpoly.ellseq import (
    cycles_below_ZK,
    nn_elliptic_sequence,
    numerically_gorenstein_subgraphs,
    verify_sequence,
)
from plumbpoly.errors import NotElliptic
from plumbpoly.laufer import s_h

from conftest import ELLIPTIC


def test_me6_single_level(ctxs):
    ctx = ctxs["me6"]
    seq = nn_elliptic_sequence(ctx)
    assert seq.m == 0
    assert seq.level(-1).Z.is_zero
    assert seq.C(0) == ctx.ZK
    assert seq.B(1) == frozenset()


def test_ex2_sequence(ctxs):
    ctx = ctxs["ex2"]
    seq = nn_elliptic_sequence(ctx)
    assert seq.m == 1
    assert seq.C(0) == ctx.cycle([1, 2, 1, 2, 1, 1, 2, 1, 1, 1])
    assert seq.B(1) == {1, 2, 3, 4, 5, 6}
    assert seq.C(1) == ctx.ZK


def test_fig1_sequence(ctxs):
    ctx = ctxs["fig1"]
    seq = nn_elliptic_sequence(ctx)
    assert seq.m == 1
    assert seq.level(-1).Z == s_h(ctx, ctx.ZK) == ctx.from_star({1: 1, 2: 2})
    assert seq.B(0) == set(range(3, 13))
    assert seq.B(1) == set(range(3, 9))
    assert not seq.numerically_gorenstein


def test_fig2_sequences(ctxs):
    assert nn_elliptic_sequence(ctxs["fig2"]).m == 2
    assert nn_elliptic_sequence(ctxs["fig2_16"]).m == 2
    assert nn_elliptic_sequence(ctxs["fig2_12"]).m == 1


def test_pair_has_equal_sequences(ctxs):
    a = nn_elliptic_sequence(ctxs["pair43_a"])
    b = nn_elliptic_sequence(ctxs["pair43_b"])
    assert [lv.B for lv in a.levels] == [lv.B for lv in b.levels]


@pytest.mark.parametrize("name", ELLIPTIC)
def test_verify_all_clauses(ctxs, name):
    ctx = ctxs[name]
    for clause in verify_sequence(ctx, nn_elliptic_sequence(ctx)):
        assert clause.ok, (clause.name, clause.detail)


def test_cycles_below_canonical(ctxs):
    ctx = ctxs["ex2"]
    seq = nn_elliptic_sequence(ctx)
    assert set(cycles_below_ZK(ctx, seq)) == {ctx.zero(), seq.C(0), ctx.ZK}
    ctx = ctxs["fig1"]
    seq = nn_elliptic_sequence(ctx)
    assert set(cycles_below_ZK(ctx, seq)) == {seq.C(-1), seq.C(0), seq.C(1)}
    assert seq.C(1) == ctx.ZK


@pytest.mark.parametrize("name", ["ex2", "fig1", "fig2"])
def test_cycles_below_backends_agree(ctxs, name):
    ctx = ctxs[name]
    assert cycles_below_ZK(ctx, use_numba=True) == cycles_below_ZK(ctx, use_numba=False)


@pytest.mark.parametrize("name", ["me6", "ex2", "fig2_12", "pair43_a"])
def test_gorenstein_subgraphs_are_levels(ctxs, name):
    ctx = ctxs[name]
    seq = nn_elliptic_sequence(ctx)
    levels = {seq.B(j) for j in range(0, seq.m + 1)}
    assert set(numerically_gorenstein_subgraphs(ctx)) <= levels


def test_non_elliptic_rejected(ctxs):
    with pytest.raises(NotElliptic):
        nn_elliptic_sequence(ctxs["a2"])


def test_json_shape(ctxs):
    js = nn_elliptic_sequence(ctxs["ex2"]).to_json()
    assert js["m"] == 1 and len(js["levels"]) == 3
    assert js["levels"][1]["C"] == ["1", "2", "1", "2", "1", "1", "2", "1", "1", "1"]

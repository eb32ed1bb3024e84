"""The eight acceptance criteria, one test each.

Every test records PASS or FAIL in ``conftest.ACCEPTANCE``; the lines are
printed in the terminal summary and also to stdout (visible with ``-s``).
"""

from fractions import Fraction as F

import pytest

import conftest
from plumbpoly.checks import FAIL, combinatorial_checks, oracle_check, run_checks
from plumbpoly.ellseq import nn_elliptic_sequence
from plumbpoly.extensions import (
    Status,
    build_extension,
    extend_dual_exponent,
    is_dual_exponent,
    is_good_extension,
)
from plumbpoly.generators import random_elliptic_trees
from plumbpoly.graph import induced_subgraph
from plumbpoly.laufer import s_h
from plumbpoly.lattice import build_context
from plumbpoly.poincare import (
    LaurentPoly,
    canonical_polynomial,
    classify_exponents,
    evaluate_at_one,
    reduce_polynomial,
    supports_by_level,
    sw0_norm,
)

from conftest import ELLIPTIC, RATIONAL


def verdict(n: int, problems: list[str]) -> None:
    line = "PASS" if not problems else "FAIL (" + "; ".join(problems) + ")"
    conftest.ACCEPTANCE[n] = line
    print(f"criterion {n}: {line}")
    assert not problems, problems


def by_vertex(ctx, cyc) -> dict[int, F]:
    return dict(zip(ctx.graph.vertices, cyc.coords))


def test_criterion_1_ex2_cycles(ctxs):
    ctx = ctxs["ex2"]
    seq = nn_elliptic_sequence(ctx)
    problems = []
    if ctx.ZK != ctx.cycle([2, 4, 2, 4, 2, 2, 2, 1, 1, 1]):
        problems.append(f"Z_K = {ctx.ZK}")
    if seq.C(0) != ctx.cycle([1, 2, 1, 2, 1, 1, 2, 1, 1, 1]):
        problems.append(f"C_0 = {seq.C(0)}")
    verdict(1, problems)


FIG2_12_P0 = """
t^(1,3,1,3,1,1,1,0,0,0,-1,-3)
- 2*t^(0,1,0,1,0,0,-1,-1,-2,-1,-1,-2) + t^(0,1,0,1,0,0,-1,-1,-2,-2,-3,-7)
- 2*t^(0,1,0,1,0,0,-1,-1,-1,-2,-3,-7) + t^(0,1,0,1,0,0,-1,-1,-1,-3,-5,-12)
+ t^(0,1,0,1,0,0,-1,-2,-2,-1,-1,-2) + t^(0,1,0,1,0,0,-1,-1,-1,-1,-1,-2)
+ t^(0,1,0,1,0,0,-1,-2,-1,-2,-3,-7) + t^(0,1,0,1,0,0,-1,-1,-3,-1,-1,-2)
+ t^(0,1,0,1,0,0,-1,-3,-1,-1,-1,-2) - 2*t^(0,1,0,1,0,0,-1,-2,-1,-1,-1,-2)
"""


def test_criterion_2_fig2_12_polynomial(ctxs):
    ctx = ctxs["fig2_12"]
    p0 = canonical_polynomial(ctx)
    want = LaurentPoly.parse(p0.variables, " ".join(FIG2_12_P0.split()))
    problems = []
    if len(want) != 11:
        problems.append("reference polynomial does not have 11 terms")
    if p0 != want:
        problems.append(f"polynomial differs: {p0.to_text()}")
    m = nn_elliptic_sequence(ctx).m
    if not evaluate_at_one(p0) == 2 == m + 1:
        problems.append(f"P0(1) = {evaluate_at_one(p0)}, m + 1 = {m + 1}")
    verdict(2, problems)


def test_criterion_3_ex2_polynomial(ctxs):
    ctx = ctxs["ex2"]
    p0 = canonical_polynomial(ctx)
    reduced = reduce_polynomial(canonical_polynomial(ctxs["fig2_12"]), range(1, 11))
    seq = nn_elliptic_sequence(ctx)
    sums = {j: sum(r.coeff for r in rs) for j, rs in supports_by_level(classify_exponents(ctx, p0, seq), seq.m).items()}
    problems = []
    if p0 != reduced:
        problems.append("P0(EX2) differs from the reduced FIG2_12 polynomial")
    if set(sums.values()) != {1} or sorted(sums) != [-1, 0]:
        problems.append(f"level sums {sums}")
    if evaluate_at_one(p0) != 2:
        problems.append(f"P0(1) = {evaluate_at_one(p0)}")
    verdict(3, problems)


def test_criterion_4_fig1(ctxs):
    ctx = ctxs["fig1"]
    order = [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 1, 2, 21, 22]
    zk = [F(19, 8), F(19, 4), F(19, 8), F(19, 4), F(19, 8), F(19, 8), F(11, 4), F(11, 8), F(11, 8), F(17, 8),
          F(17, 16), F(25, 16), F(25, 32), F(25, 32)]
    s = [F(3, 8), F(3, 4), F(3, 8), F(3, 4), F(3, 8), F(3, 8), F(3, 4), F(3, 8), F(3, 8), F(9, 8),
         F(17, 16), F(25, 16), F(25, 32), F(25, 32)]
    problems = []
    if by_vertex(ctx, ctx.ZK) != dict(zip(order, zk)):
        problems.append(f"Z_K = {ctx.ZK}")
    sk = s_h(ctx, ctx.ZK)
    if by_vertex(ctx, sk) != dict(zip(order, s)):
        problems.append(f"s_[Z_K] = {sk}")
    if sk != ctx.from_star({1: 1, 2: 2}):
        problems.append("s_[Z_K] is not E*1 + 2E*2")
    seq = nn_elliptic_sequence(ctx)
    recs = [r for r in classify_exponents(ctx, canonical_polynomial(ctx), seq) if r.level == -1]
    want = {
        ctx.from_star({1: 1, 2: 1, 21: 2}): -1,
        ctx.from_star({1: 1, 2: 1, 22: 2}): -1,
        ctx.from_star({1: 1, 21: 4}): 1,
        ctx.from_star({1: 1, 21: 2, 22: 2}): 1,
        ctx.from_star({1: 1, 22: 4}): 1,
    }
    got = {r.dual: r.coeff for r in recs}
    if got != want:
        problems.append(f"Supp_-1 dual exponents {sorted(map(str, got))}")
    if sum(got.values()) != 1:
        problems.append(f"level -1 coefficient sum {sum(got.values())}")
    verdict(4, problems)


def test_criterion_5_fig2_pair(graphs):
    outer = graphs["fig2"]
    pair = build_extension(induced_subgraph(outer, list(range(1, 17))), outer)
    ictx, octx = pair.inner, pair.outer
    seq = pair.inner_seq
    problems = []
    # the exponent as written in cycle form: C_1 + E9 + 2E14 + E16 + 4E15
    dual = seq.C(1) + ictx.E(9) + 2 * ictx.E(14) + ictx.E(16) + 4 * ictx.E(15)
    printed = ictx.from_star({7: 1, 11: 1, 14: 1})
    if dual != ictx.from_star({7: 1, 11: 1, 14: 1, 15: 6}):
        problems.append(f"cycle form is {dual}")
    if is_dual_exponent(ictx, printed):
        problems.append("E*7+E*11+E*14 unexpectedly is itself a dual exponent")
    out = extend_dual_exponent(pair, dual)
    lp = [F(x, 31) for x in (65, 130, 65, 130, 65, 65, 130, 65, 132, 97, 64, 32, 32, 134, 160, 79, 24)]
    if by_vertex(octx, out.start) != dict(zip(range(1, 18), lp)):
        problems.append(f"l' = {out.start}")
    if out.trace.vertices[:2] != [17, 16]:
        problems.append(f"Laufer steps {out.trace.vertices}")
    if out.status is not Status.NON_EXTENDABLE:
        problems.append(f"status {out.status.value}")
    rep = is_good_extension(pair)
    if rep.good or rep.identity_holds or not rep.consistent:
        problems.append(f"good={rep.good} identity={rep.identity_holds}")
    verdict(5, problems)


# The criterion lists sw = 3 for FIG1, but its sequence B_-1, B_0, B_1 has
# m = 1, so m + 1 = 2; the literal value cannot be met (see the ledger).
@pytest.mark.xfail(strict=True, reason="criterion lists sw = 3 for FIG1; its sequence has m = 1, so sw = m + 1 = 2")
def test_criterion_6_sw_length(ctxs):
    problems = []
    literal = {"me6": 1, "ex2": 2, "fig2_12": 2, "fig1": 3}
    for name in ELLIPTIC:
        ctx = ctxs[name]
        sw, m = sw0_norm(ctx), nn_elliptic_sequence(ctx).m
        if sw != m + 1:
            problems.append(f"{name}: sw {sw} != m + 1 = {m + 1}")
        if name in literal and sw != literal[name]:
            problems.append(f"{name}: sw {sw}, criterion lists {literal[name]}")
    for name in RATIONAL:
        if sw0_norm(ctxs[name]) != 0:
            problems.append(f"{name}: sw {sw0_norm(ctxs[name])}")
    verdict(6, problems)


def test_criterion_7_oracle(ctxs):
    problems = []
    for name, ctx in sorted(ctxs.items()):
        if ctx.graph.n > 12:
            continue
        boxes = [ctx.ZK - ctx.E_total]
        if ctx.graph.n <= 6:  # keep the rational cases non-vacuous
            boxes.append(ctx.ZK + ctx.E_total)
        for box in boxes:
            c = oracle_check(ctx, box)
            if not c.ok:
                problems.append(f"{name}: {c.detail}")
    verdict(7, problems)


def test_criterion_8_invariant_suite(graphs):
    problems = []
    corpus = list(graphs.items()) + [(f"random#{i}", g) for i, g in enumerate(random_elliptic_trees(2024, 100))]
    total = 0
    for name, g in corpus:
        for c in run_checks(g):
            total += 1
            if c.status == FAIL:
                problems.append(f"{name}: {c.name} ({c.detail})")
    for c in combinatorial_checks(20):
        total += 1
        if c.status == FAIL:
            problems.append(f"{c.name} ({c.detail})")
    assert total > 1000
    verdict(8, problems)

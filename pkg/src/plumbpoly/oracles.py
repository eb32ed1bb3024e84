"""Slow, independent reference computations used to cross-check the fast paths.

Nothing here shares code with the enumeration kernels: the product formula is
multiplied out factor by factor over plain dicts, and lattice questions are
answered by exhaustive box searches.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .lattice import Cycle, LatticeContext, chi, scale
from .poincare import _gbinom

Key = tuple[int, ...]


def _truncated_product(
    factors: list[tuple[Key, int, int]], keep
) -> dict[Key, int]:
    """Multiply ``prod (1 - t^g)^a`` keeping only monomials accepted by ``keep``.

    ``keep`` must be downward closed (if it accepts ``x`` it accepts every
    ``y <= x``), which makes termwise truncation exact.
    """
    n = len(factors[0][0]) if factors else 0
    acc: dict[Key, int] = {(0,) * n: 1}
    for g, a, bound in factors:
        series: list[tuple[Key, int]] = []
        for k in itertools.count():
            if bound >= 0 and k > bound:
                break
            key = tuple(k * x for x in g)
            if not keep(key):
                break
            c = (-1) ** k * _gbinom(a, k)
            if c:
                series.append((key, c))
        nxt: dict[Key, int] = {}
        for key, c in acc.items():
            for sk, sc in series:
                tot = tuple(x + y for x, y in zip(key, sk))
                if keep(tot):
                    nxt[tot] = nxt.get(tot, 0) + c * sc
        acc = {k: c for k, c in nxt.items() if c}
    return acc


def product_series(ctx: LatticeContext, box: Cycle) -> dict[Cycle, int]:
    """Coefficients of ``prod_v (1 - t^{E*_v})^{delta_v - 2}`` on ``{l' : l'_w <= box_w for some w}``.

    Every vertex contributes a factor, including valency-2 ones (exponent 0).
    """
    limit = scale(ctx, box)
    factors = []
    for v in ctx.graph.vertices:
        d = ctx.valency[v]
        g = tuple(int(x) for x in ctx.scaled_dual[v])
        a = d - 2
        factors.append((g, a, a if a >= 0 else -1))

    def keep(key: Key) -> bool:
        return any(x <= y for x, y in zip(key, limit))

    raw = _truncated_product(factors, keep)
    out = {}
    for key, c in raw.items():
        out[Cycle(ctx.graph, tuple(Fraction(x, ctx.det) for x in key))] = c
    return out


def naive_antinef_min(ctx: LatticeContext, start: Cycle, upper: Cycle) -> Cycle | None:
    """Smallest anti-nef cycle ``start + x`` with integral ``0 <= x <= upper`` (vectorized box search)."""
    import numpy as np

    steps = [int(u) for u in upper.coords]
    grid = np.indices([k + 1 for k in steps]).reshape(ctx.graph.n, -1).T.astype(np.int64)
    pts = scale(ctx, start)[None, :] + ctx.det * grid
    ok = (pts @ ctx.M_array.T <= 0).all(axis=1)
    hits = pts[ok]
    if not len(hits):
        return None
    low = hits.min(axis=0)
    # the anti-nef cone is closed under min, so the minimum must itself be a hit
    if not (hits == low).all(axis=1).any():
        raise AssertionError("anti-nef cycles in the box have no common minimum")
    return Cycle(ctx.graph, tuple(Fraction(int(x), ctx.det) for x in low))


def naive_min_chi(ctx: LatticeContext, bound: int) -> int:
    """``min chi(l)`` over integral ``0 < l <= bound`` (box search)."""
    best = None
    for x in itertools.product(range(bound + 1), repeat=ctx.graph.n):
        if not any(x):
            continue
        val = chi(ctx, ctx.cycle(x))
        best = val if best is None else min(best, val)
    return int(best)


def naive_canonical_cycle(ctx: LatticeContext) -> Cycle:
    """Z_K from the adjunction relations ``(Z_K, E_v) = e_v + 2``, solved by Cramer's rule."""
    import numpy as np

    g = ctx.graph
    n = g.n
    m = [[0] * n for _ in range(n)]
    for i, e in enumerate(g.euler):
        m[i][i] = e
    for a, b in g.edges:
        m[g.index[a]][g.index[b]] = m[g.index[b]][g.index[a]] = 1
    rhs = [e + 2 for e in g.euler]
    det = _int_det(m)
    coords = []
    for i in range(n):
        mi = [row[:i] + [rhs[r]] + row[i + 1 :] for r, row in enumerate(m)]
        coords.append(Fraction(_int_det(mi), det))
    assert np.allclose(np.array(m, dtype=float) @ np.array([float(c) for c in coords]), rhs)
    return ctx.cycle(coords)


def _int_det(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


__all__ = [
    "naive_antinef_min",
    "naive_canonical_cycle",
    "naive_min_chi",
    "product_series",
]

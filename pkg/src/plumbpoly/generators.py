"""Seeded random negative-definite elliptic trees."""

from __future__ import annotations

import random

from .errors import NotNegativeDefinite
from .graph import PlumbingGraph
from .lattice import LatticeContext
from .laufer import classify


def random_tree_edges(rng: random.Random, n: int) -> list[tuple[int, int]]:
    """Uniform labelled tree on ``1..n`` via a Pruefer sequence."""
    if n == 1:
        return []
    if n == 2:
        return [(1, 2)]
    seq = [rng.randint(1, n) for _ in range(n - 2)]
    degree = {v: 1 for v in range(1, n + 1)}
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in degree if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    a, b = (u for u in degree if degree[u] == 1)
    edges.append((a, b))
    return edges


def random_elliptic_tree(
    rng: random.Random, max_vertices: int = 10, min_vertices: int = 4, max_tries: int = 100_000
) -> PlumbingGraph:
    """Draw trees with Euler numbers <= -2 until one is elliptic."""
    for _ in range(max_tries):
        n = rng.randint(min_vertices, max_vertices)
        edges = random_tree_edges(rng, n)
        euler = [-2 if rng.random() < 0.8 else -rng.randint(3, 4) for _ in range(n)]
        g = PlumbingGraph.from_data(list(zip(range(1, n + 1), euler)), edges)
        try:
            ctx = LatticeContext(g)
        except NotNegativeDefinite:
            continue
        if classify(ctx).is_elliptic:
            return g
    raise RuntimeError("no elliptic tree found")


def random_elliptic_trees(seed: int, count: int, max_vertices: int = 10) -> list[PlumbingGraph]:
    rng = random.Random(seed)
    return [random_elliptic_tree(rng, max_vertices) for _ in range(count)]


__all__ = ["random_elliptic_tree", "random_elliptic_trees", "random_tree_edges"]

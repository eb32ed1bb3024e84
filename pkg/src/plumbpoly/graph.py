"""Plumbing graphs: data model, parsing, serialization and induced subgraphs.

A plumbing graph here is a finite tree whose vertices carry integer Euler
decorations (genus is always zero).  Vertex ids are supplied by the input and
their declaration order fixes the coordinate order of every cycle vector.

Text format::

    # comment
    vertices: 1:-2 2:-2 3:-3
    edges: 1-2 2-3

JSON format::

    {"vertices": [{"id": 1, "euler": -2}, ...], "edges": [[1, 2], ...]}
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

from .errors import GraphFormatError, SubgraphError

_VERTEX_TOKEN = re.compile(r"^(\d+):([+-]?\d+)$")
_EDGE_TOKEN = re.compile(r"^(\d+)-(\d+)$")


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: tuple[int, ...]
    euler: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.euler):
            raise GraphFormatError("vertex and decoration lists differ in length")
        if not self.vertices:
            raise GraphFormatError("a plumbing graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphFormatError("duplicate vertex id")
        ids = set(self.vertices)
        seen: set[tuple[int, int]] = set()
        for a, b in self.edges:
            if a not in ids or b not in ids:
                raise GraphFormatError(f"edge {a}-{b} has an unknown endpoint")
            if a == b:
                raise GraphFormatError(f"self-loop at vertex {a}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {a}-{b}")
            seen.add(key)
        if len(self.edges) != len(self.vertices) - 1:
            raise GraphFormatError(
                f"not a tree: {len(self.vertices)} vertices but {len(self.edges)} edges"
            )
        if not _connected(self.vertices, self.edges):
            raise GraphFormatError("not a tree: graph is disconnected (a cycle is present)")

    @classmethod
    def from_data(cls, vertices: Iterable[tuple[int, int]], edges: Iterable[tuple[int, int]]):
        vs = list(vertices)
        return cls(
            tuple(v for v, _ in vs),
            tuple(e for _, e in vs),
            tuple(sorted((min(a, b), max(a, b)) for a, b in edges)),
        )

    @cached_property
    def index(self) -> dict[int, int]:
        """Vertex id -> coordinate position."""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: tuple(sorted(ns, key=self.index.__getitem__)) for v, ns in adj.items()}

    @property
    def n(self) -> int:
        return len(self.vertices)

    def euler_of(self, v: int) -> int:
        return self.euler[self._pos(v)]

    def _pos(self, v: int) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def __contains__(self, v: object) -> bool:
        return v in self.index

    def __str__(self) -> str:
        return serialize_graph(self).strip()


def _connected(vertices, edges) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = vertices[0]
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def parse_graph(source: str) -> PlumbingGraph:
    """Parse the text or JSON graph format (auto-detected)."""
    if source.lstrip().startswith("{"):
        return _parse_json(source)
    return _parse_text(source)


def _parse_json(source: str) -> PlumbingGraph:
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno, exc.colno) from None
    try:
        vertices = [(int(v["id"]), int(v["euler"])) for v in data["vertices"]]
        edges = [(int(a), int(b)) for a, b in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad JSON graph structure: {exc}") from None
    return _build(vertices, [(a, b, None, None) for a, b in edges])


def _parse_text(source: str) -> PlumbingGraph:
    vertices: list[tuple[int, int]] = []
    edges: list[tuple[int, int, int, int]] = []
    section = None
    seen_sections = set()
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col0 = 0
        stripped = line.lstrip()
        lead = len(line) - len(stripped)
        for name in ("vertices:", "edges:"):
            if stripped.startswith(name):
                section = name[:-1]
                if section in seen_sections:
                    raise GraphFormatError(f"repeated '{name}' section", lineno, lead + 1)
                seen_sections.add(section)
                col0 = lead + len(name)
                break
        else:
            if section is None:
                raise GraphFormatError("expected 'vertices:' or 'edges:'", lineno, lead + 1)
        for m in re.finditer(r"\S+", line[col0:]):
            tok, col = m.group(), col0 + m.start() + 1
            if section == "vertices":
                vm = _VERTEX_TOKEN.match(tok)
                if not vm:
                    raise GraphFormatError(f"bad vertex token {tok!r} (expected id:euler)", lineno, col)
                vertices.append((int(vm.group(1)), int(vm.group(2))))
            else:
                em = _EDGE_TOKEN.match(tok)
                if not em:
                    raise GraphFormatError(f"bad edge token {tok!r} (expected idA-idB)", lineno, col)
                edges.append((int(em.group(1)), int(em.group(2)), lineno, col))
    if "vertices" not in seen_sections:
        raise GraphFormatError("missing 'vertices:' section")
    return _build(vertices, edges)


def _build(vertices, edges) -> PlumbingGraph:
    ids: set[int] = set()
    for v, _ in vertices:
        if v in ids:
            raise GraphFormatError(f"duplicate vertex {v}")
        ids.add(v)
    seen: set[tuple[int, int]] = set()
    for a, b, line, col in edges:
        if a not in ids or b not in ids:
            bad = a if a not in ids else b
            raise GraphFormatError(f"edge {a}-{b}: unknown endpoint {bad}", line, col)
        if a == b:
            raise GraphFormatError(f"self-loop {a}-{b}", line, col)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {a}-{b}", line, col)
        seen.add(key)
    return PlumbingGraph.from_data(vertices, [(a, b) for a, b, *_ in edges])


def serialize_graph(g: PlumbingGraph) -> str:
    verts = " ".join(f"{v}:{e}" for v, e in zip(g.vertices, g.euler))
    edges = " ".join(f"{a}-{b}" for a, b in g.edges)
    return f"vertices: {verts}\nedges: {edges}\n".replace("edges: \n", "edges:\n")


def graph_to_json(g: PlumbingGraph) -> dict:
    return {
        "vertices": [{"id": v, "euler": e} for v, e in zip(g.vertices, g.euler)],
        "edges": [list(e) for e in g.edges],
    }


def induced_subgraph(g: PlumbingGraph, s: Iterable[int]) -> PlumbingGraph:
    """Full subgraph on the vertex set ``s`` (declaration order inherited from ``g``)."""
    chosen = set(s)
    if not chosen:
        raise SubgraphError("empty vertex selection")
    unknown = chosen - set(g.vertices)
    if unknown:
        raise SubgraphError(f"unknown vertices {sorted(unknown)}")
    vertices = [(v, e) for v, e in zip(g.vertices, g.euler) if v in chosen]
    edges = [(a, b) for a, b in g.edges if a in chosen and b in chosen]
    if len(edges) != len(vertices) - 1:
        raise SubgraphError(f"selection {sorted(chosen)} induces a disconnected subgraph")
    return PlumbingGraph.from_data(vertices, edges)


def components(g: PlumbingGraph, s: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the full subgraph on ``s``, in declaration order."""
    chosen = set(s)
    out = []
    seen: set[int] = set()
    for v in g.vertices:
        if v not in chosen or v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            for w in g.neighbors[stack.pop()]:
                if w in chosen and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(tuple(u for u in g.vertices if u in comp))
    return out


def valency(g: PlumbingGraph, v: int) -> int:
    if v not in g:
        raise KeyError(f"unknown vertex {v}")
    return len(g.neighbors[v])


def nodes(g: PlumbingGraph) -> frozenset[int]:
    return frozenset(v for v in g.vertices if len(g.neighbors[v]) >= 3)


def ends(g: PlumbingGraph) -> frozenset[int]:
    return frozenset(v for v in g.vertices if len(g.neighbors[v]) == 1)

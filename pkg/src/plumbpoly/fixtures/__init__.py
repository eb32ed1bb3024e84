"""Bundled example graphs, loadable by name."""

from __future__ import annotations

from importlib import resources

from ..graph import PlumbingGraph, parse_graph

NAMES = (
    "g1",
    "a2",
    "me6",
    "ex2",
    "fig1",
    "fig2",
    "fig2_12",
    "fig2_16",
    "star4",
    "pair43_a",
    "pair43_b",
)


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.txt")


def load(name: str) -> PlumbingGraph:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return parse_graph(path(name).read_text())


def load_all() -> dict[str, PlumbingGraph]:
    return {n: load(n) for n in NAMES}

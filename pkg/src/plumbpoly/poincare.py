"""Topological Poincare series, counting functions and the canonical polynomial.

The series is the expansion of ``prod_v (1 - t^{E*_v})^(delta_v - 2)``.  Only
vertices with ``delta_v != 2`` contribute, so a support element is written as
``sum l*_v E*_v`` over those vertices ("star exponents").
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from .ellseq import EllipticSequence
from .errors import BindingError
from .graph import components, induced_subgraph
from .lattice import Cycle, LatticeContext, build_context, format_rational, scale, unscale
from .laufer import classify

Exponent = tuple[Fraction, ...]


# ---------------------------------------------------------------- star exponents


@dataclass(frozen=True)
class StarExponent:
    """Multiplicities ``l*_v`` of the E*_v, keyed by vertex id (zeros omitted)."""

    items: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, mults: dict[int, int]) -> "StarExponent":
        if any(k < 0 for k in mults.values()):
            raise ValueError("star multiplicities must be nonnegative")
        return cls(tuple(sorted((v, int(k)) for v, k in mults.items() if k)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def cycle(self, ctx: LatticeContext) -> Cycle:
        return ctx.from_star(self.as_dict())

    def __str__(self) -> str:
        if not self.items:
            return "0"
        return "+".join(f"{k}E*{v}" if k != 1 else f"E*{v}" for v, k in self.items)


def generators(ctx: LatticeContext) -> list[int]:
    """Vertices whose factor in the product is nontrivial (valency != 2)."""
    return [v for v in ctx.graph.vertices if ctx.valency[v] != 2]


def _factor_coefficient(delta: int, k: int) -> int:
    # coefficient of x^k in (1 - x)^(delta - 2), general binomial series
    return (-1) ** k * _gbinom(delta - 2, k)


def _gbinom(a: int, k: int) -> int:
    if a >= 0:
        return comb(a, k)
    # binom(-b, k) = (-1)^k binom(b + k - 1, k)
    return (-1) ** k * comb(-a + k - 1, k)


def series_coefficient(ctx: LatticeContext, se: StarExponent) -> int:
    z = 1
    for v, k in se.items:
        d = ctx.valency.get(v)
        if d is None:
            raise KeyError(f"unknown vertex {v}")
        if d == 2:
            raise ValueError(f"vertex {v} has valency 2 and carries no star multiplicity")
        if d >= 3 and k > d - 2:
            raise ValueError(f"multiplicity {k} at node {v} exceeds delta - 2 = {d - 2}")
        z *= _factor_coefficient(d, k)
    return z


@dataclass(frozen=True)
class SupportElement:
    star: StarExponent
    cycle: Cycle
    coeff: int


def _mask(ctx: LatticeContext, I: Iterable[int] | None) -> np.ndarray:
    chosen = set(ctx.graph.vertices if I is None else I)
    unknown = chosen - set(ctx.graph.vertices)
    if unknown:
        raise KeyError(f"unknown vertices {sorted(unknown)}")
    return np.array([v in chosen for v in ctx.graph.vertices], dtype=np.int64)


def _enumerate(ctx, class_rep, limit_scaled, mask, use_numba=None, par=1):
    gens = generators(ctx)
    garr = np.array([ctx.scaled_dual[v] for v in gens], dtype=np.int64).reshape(len(gens), ctx.graph.n)
    bounds = np.array([ctx.valency[v] - 2 if ctx.valency[v] >= 3 else -1 for v in gens], dtype=np.int64)
    if class_rep is None:
        target = np.zeros(ctx.graph.n, dtype=np.int64)
        modulus = 1
    else:
        target = scale(ctx, class_rep)
        modulus = ctx.det
    mult, cyc = _kernels.star_enumerate(
        garr, bounds, mask, limit_scaled, target, modulus, use_numba=use_numba, par=par
    )
    # coefficient tables per generator
    out = []
    for row_m, row_c in zip(mult, cyc):
        z = 1
        for v, k in zip(gens, row_m):
            if k:
                z *= _factor_coefficient(ctx.valency[v], int(k))
        if z:
            out.append((tuple(int(k) for k in row_m), row_c, z))
    return gens, out


def enumerate_dual_support(
    ctx: LatticeContext,
    class_rep: Cycle | None,
    exclusion: Cycle,
    I: Iterable[int] | None = None,
    use_numba: bool | None = None,
    par: int = 1,
) -> list[SupportElement]:
    """Support elements of the class of ``class_rep`` that are not above ``exclusion`` on ``I``.

    An element ``l'`` is kept when ``l'_w <= exclusion_w`` for some ``w`` in
    ``I``.  ``class_rep=None`` keeps every class.
    """
    mask = _mask(ctx, I)
    limit = scale(ctx, exclusion) + 1  # scaled l' <= e  iff  scaled l' < e + 1
    gens, rows = _enumerate(ctx, class_rep, limit, mask, use_numba, par)
    return [
        SupportElement(StarExponent.of(dict(zip(gens, m))), unscale(ctx, c), z) for m, c, z in rows
    ]


def counting_function(
    ctx: LatticeContext,
    class_rep: Cycle | None,
    I: Iterable[int],
    x: Cycle,
    use_numba: bool | None = None,
    par: int = 1,
) -> int:
    """Sum of series coefficients over ``l'`` in the class with ``l'|_I`` not ``>= x|_I``."""
    mask = _mask(ctx, I)
    if not mask.any():
        return 0
    _, rows = _enumerate(ctx, class_rep, scale(ctx, x), mask, use_numba, par)
    return sum(z for _, _, z in rows)


# ---------------------------------------------------------------- Laurent polynomials

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*t\^\(([^)]*)\)")


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum ``sum c * t^e`` with exponent vectors indexed by ``variables``."""

    variables: tuple[int, ...]
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def from_dict(cls, variables: Sequence[int], terms: dict) -> "LaurentPoly":
        variables = tuple(variables)
        acc: dict[Exponent, int] = {}
        for e, c in terms.items():
            e = tuple(Fraction(x) for x in e)
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} has wrong length for variables {variables}")
            acc[e] = acc.get(e, 0) + int(c)
        return cls(variables, tuple(sorted((e, c) for e, c in acc.items() if c)))

    @classmethod
    def from_terms(cls, variables: Sequence[int], pairs: Iterable[tuple[Sequence, int]]) -> "LaurentPoly":
        acc: dict[Exponent, int] = {}
        for e, c in pairs:
            e = tuple(Fraction(x) for x in e)
            acc[e] = acc.get(e, 0) + int(c)
        return cls.from_dict(variables, acc)

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if other.variables != self.variables:
            raise BindingError("polynomials in different variables")
        return LaurentPoly.from_terms(self.variables, [*self.terms, *other.terms])

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + LaurentPoly(other.variables, tuple((e, -c) for e, c in other.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(self.terms):
            body = "t^(" + ",".join(format_rational(x) for x in e) + ")"
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}*"
            if k == 0:
                parts.append(("-" if c < 0 else "") + coef + body)
            else:
                parts.append(f" {sign} {coef}{body}")
        return "".join(parts)

    __str__ = to_text

    @classmethod
    def parse(cls, variables: Sequence[int], text: str) -> "LaurentPoly":
        text = text.strip()
        if text == "0":
            return cls(tuple(variables), ())
        pairs = []
        pos = 0
        for mt in _TERM.finditer(text):
            if text[pos : mt.start()].strip():
                raise ValueError(f"cannot parse polynomial near {text[pos:mt.start()]!r}")
            sign = -1 if mt.group(1) == "-" else 1
            mag = int(mt.group(2)) if mt.group(2) else 1
            exps = [Fraction(x.strip()) for x in mt.group(3).split(",")]
            pairs.append((exps, sign * mag))
            pos = mt.end()
        if text[pos:].strip():
            raise ValueError(f"trailing text {text[pos:]!r}")
        return cls.from_terms(variables, pairs)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [{"exponent": [format_rational(x) for x in e], "coeff": c} for e, c in self.terms],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def reduce_polynomial(p: LaurentPoly, I: Iterable[int]) -> LaurentPoly:
    """Project exponents to the coordinates ``I`` and collect terms."""
    chosen = set(I)
    if not chosen:
        raise ValueError("reduction to an empty variable set")
    unknown = chosen - set(p.variables)
    if unknown:
        raise KeyError(f"variables {sorted(unknown)} not present")
    keep = [i for i, v in enumerate(p.variables) if v in chosen]
    variables = tuple(p.variables[i] for i in keep)
    return LaurentPoly.from_terms(variables, [(tuple(e[i] for i in keep), c) for e, c in p.terms])


def evaluate_at_one(p: LaurentPoly) -> int:
    return sum(c for _, c in p.terms)


# ---------------------------------------------------------------- canonical polynomial


def canonical_dual_support(ctx: LatticeContext, use_numba=None, par: int = 1) -> list[SupportElement]:
    """Dual exponents: class [Z_K] support elements not above Z_K - E."""
    if use_numba is None:
        return list(_canonical_support_cached(ctx))
    return enumerate_dual_support(ctx, ctx.ZK, ctx.ZK - ctx.E_total, None, use_numba, par)


@lru_cache(maxsize=256)
def _canonical_support_cached(ctx: LatticeContext) -> tuple[SupportElement, ...]:
    return tuple(enumerate_dual_support(ctx, ctx.ZK, ctx.ZK - ctx.E_total, None))


def canonical_polynomial(ctx: LatticeContext, use_numba=None, par: int = 1) -> LaurentPoly:
    base = ctx.ZK - ctx.E_total
    pairs = [((base - el.cycle).coords, el.coeff) for el in canonical_dual_support(ctx, use_numba, par)]
    return LaurentPoly.from_terms(ctx.graph.vertices, pairs)


def dual_polynomial(ctx: LatticeContext, use_numba=None, par: int = 1) -> LaurentPoly:
    pairs = [(el.cycle.coords, el.coeff) for el in canonical_dual_support(ctx, use_numba, par)]
    return LaurentPoly.from_terms(ctx.graph.vertices, pairs)


def sw0_norm(ctx: LatticeContext, use_numba=None, par: int = 1) -> int:
    return evaluate_at_one(canonical_polynomial(ctx, use_numba, par))


def poly_cycle(ctx: LatticeContext, e: Exponent) -> Cycle:
    return Cycle(ctx.graph, e)


# ---------------------------------------------------------------- exponent structure


@dataclass(frozen=True)
class ExponentRecord:
    exponent: Cycle
    coeff: int
    level: int
    associated: Cycle
    extra: tuple[tuple[int, int], ...]  # (vertex, m_v) with m_v > 0
    dual: Cycle

    def extra_dict(self) -> dict[int, int]:
        return dict(self.extra)

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent.to_strings(),
            "coeff": self.coeff,
            "level": self.level,
            "C": self.associated.to_strings(),
            "m": {str(v): k for v, k in self.extra},
            "dual": self.dual.to_strings(),
        }


def classify_exponents(ctx: LatticeContext, p0: LaurentPoly, seq: EllipticSequence) -> list[ExponentRecord]:
    g = ctx.graph
    allv = frozenset(g.vertices)
    by_neg = {allv - seq.B(j + 1): j for j in range(-1, seq.m)}
    base = ctx.ZK - ctx.E_total
    out = []
    for e, c in p0.terms:
        ell = Cycle(g, e)
        neg = frozenset(v for v, x in zip(g.vertices, e) if x < 0)
        if neg not in by_neg:
            raise AssertionError(f"exponent {ell} matches no level (negative set {sorted(neg)})")
        j = by_neg[neg]
        dual = base - ell
        cj = seq.C(j)
        extra = dual - cj
        assert extra.is_integral, f"dual exponent {dual} not congruent to C_{j}"
        outside = allv - seq.B(j + 1)
        ms = []
        for v, x in zip(g.vertices, extra.coords):
            assert x >= 0, f"negative extra multiplicity at {v} for {ell}"
            if x:
                assert v in outside, f"extra multiplicity at {v} inside B_{j + 1}"
                ms.append((v, int(x)))
        out.append(ExponentRecord(ell, c, j, cj, tuple(ms), dual))
    return out


def supports_by_level(records: Sequence[ExponentRecord], m: int) -> dict[int, list[ExponentRecord]]:
    out: dict[int, list[ExponentRecord]] = {j: [] for j in range(-1, m)}
    for r in records:
        out[r.level].append(r)
    return out


def level_cycle_form(ctx: LatticeContext, seq: EllipticSequence) -> LaurentPoly:
    """``sum_{j=-1}^{m-1} t^{(Z_K - E - C_j)|_{|C|}}``, the reduced polynomial on |C|."""
    base = ctx.ZK - ctx.E_total
    supp = seq.B(seq.m)
    keep = [i for i, v in enumerate(ctx.graph.vertices) if v in supp]
    variables = tuple(ctx.graph.vertices[i] for i in keep)
    pairs = []
    for j in range(-1, seq.m):
        e = (base - seq.C(j)).coords
        pairs.append((tuple(e[i] for i in keep), 1))
    return LaurentPoly.from_terms(variables, pairs)


def surgery_pieces(ctx: LatticeContext, removed: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components left after deleting ``removed`` from the graph."""
    rem = set(removed)
    return components(ctx.graph, [v for v in ctx.graph.vertices if v not in rem])


def sw0_of_subgraph(ctx: LatticeContext, vertices: Iterable[int], use_numba=None) -> int:
    sub = build_context(induced_subgraph(ctx.graph, vertices))
    return sw0_norm(sub, use_numba)


__all__ = [
    "ExponentRecord",
    "LaurentPoly",
    "StarExponent",
    "SupportElement",
    "canonical_dual_support",
    "canonical_polynomial",
    "classify",
    "classify_exponents",
    "counting_function",
    "dual_polynomial",
    "enumerate_dual_support",
    "evaluate_at_one",
    "generators",
    "reduce_polynomial",
    "series_coefficient",
    "supports_by_level",
    "surgery_pieces",
    "sw0_norm",
    "sw0_of_subgraph",
    "level_cycle_form",
]

"""Command-line front end.

Every command builds a :class:`RunReport` and renders it either as a short
human-readable listing or, with ``--json``, as sorted JSON.  Exit codes:
0 on success, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .checks import FAIL, SKIP, Check, combinatorial_checks, run_checks
from .ellseq import nn_elliptic_sequence, verify_sequence
from .errors import PlumbingError
from .extensions import build_extension, is_good_extension
from .graph import PlumbingGraph, ends, induced_subgraph, nodes, parse_graph
from .lattice import build_context, representative_r
from .laufer import classify, generalized_laufer, minimal_cycle
from .poincare import (
    LaurentPoly,
    canonical_polynomial,
    classify_exponents,
    dual_polynomial,
    evaluate_at_one,
    reduce_polynomial,
)


@dataclass
class RunReport:
    command: str
    inputs: list[str]
    results: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)  # human rendering
    error: str | None = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return 2
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input": self.inputs,
            "results": self.results,
            "checks": [c.to_json() for c in self.checks],
            "error": self.error,
            "exit_code": self.exit_code,
        }

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.to_json(), sort_keys=True, indent=2)
        out = list(self.lines)
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[c.status]
            out.append(f"[{mark}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        if self.error is not None:
            out.append(f"error: {self.error}")
        return "\n".join(out)


def _load(path: str) -> PlumbingGraph:
    return parse_graph(Path(path).read_text())


def parse_id_list(text: str) -> list[int]:
    """``"1..10"``, ``"1,2,5"`` or a mix such as ``"1..4,7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


# ---------------------------------------------------------------- commands


def cmd_validate(path: str, **_) -> RunReport:
    rep = RunReport("validate", [path])
    g = _load(path)
    build_context(g)
    rep.results = {"vertices": g.n, "edges": len(g.edges)}
    rep.lines = [f"ok: {g.n} vertices, {len(g.edges)} edges, negative definite tree"]
    return rep


def cmd_info(path: str, **_) -> RunReport:
    g = _load(path)
    ctx = build_context(g)
    cl = classify(ctx)
    zmin = minimal_cycle(ctx)
    res = {
        "det": ctx.det,
        "Z_K": ctx.ZK.to_strings(),
        "numerically_gorenstein": ctx.numerically_gorenstein,
        "Z_min": zmin.to_strings(),
        "chi_Z_min": cl.chi_zmin,
        "classification": cl.kind.value,
        "nodes": sorted(nodes(g)),
        "ends": sorted(ends(g)),
    }
    rep = RunReport("info", [path], res)
    rep.lines = [
        f"vertices: {' '.join(map(str, g.vertices))}",
        f"det(-M): {ctx.det}",
        f"Z_K: {ctx.ZK}",
        f"numerically Gorenstein: {ctx.numerically_gorenstein}",
        f"Z_min: {zmin}",
        f"chi(Z_min): {cl.chi_zmin}",
        f"classification: {cl.kind.value}",
    ]
    return rep


def cmd_ellseq(path: str, **_) -> RunReport:
    ctx = build_context(_load(path))
    seq = nn_elliptic_sequence(ctx)
    rep = RunReport("ellseq", [path], seq.to_json())
    rep.lines = [f"m = {seq.m}, numerically Gorenstein = {seq.numerically_gorenstein}"]
    for lv in seq.levels:
        rep.lines.append(f"B_{lv.j}: {{{','.join(map(str, lv.B))}}}  Z = {lv.Z}  C = {lv.C}")
    rep.checks = [Check(f"sequence {c.name}", "pass" if c.ok else FAIL, "" if c.ok else c.detail) for c in verify_sequence(ctx, seq)]
    return rep


def cmd_poly(path: str, reduce: str | None = None, dual: bool = False, trace: bool = False, par: int = 1, **_) -> RunReport:
    ctx = build_context(_load(path))
    p = dual_polynomial(ctx, par=par) if dual else canonical_polynomial(ctx, par=par)
    if reduce:
        p = reduce_polynomial(p, parse_id_list(reduce))
    res = {"polynomial": p.to_json(), "value_at_one": evaluate_at_one(p), "terms": len(p)}
    rep = RunReport("poly", [path], res)
    rep.lines = [f"variables: {' '.join(map(str, p.variables))}", f"terms: {len(p)}", f"P(1) = {evaluate_at_one(p)}"]
    rep.lines += [LaurentPoly(p.variables, (t,)).to_text() for t in p.terms] or ["0"]
    if trace:
        seqs = {
            "Z_min": generalized_laufer(ctx, ctx.E(min(ctx.graph.vertices))),
            "s_[Z_K]": generalized_laufer(ctx, representative_r(ctx, ctx.ZK)),
        }
        res["trace"] = {k: v.to_json() for k, v in seqs.items()}
        for k, v in seqs.items():
            rep.lines.append(f"trace {k}: start {v.start}, vertices {v.vertices}, result {v.result}")
    return rep


def cmd_exponents(path: str, par: int = 1, **_) -> RunReport:
    ctx = build_context(_load(path))
    seq = nn_elliptic_sequence(ctx)
    recs = classify_exponents(ctx, canonical_polynomial(ctx, par=par), seq)
    rep = RunReport("exponents", [path], {"records": [r.to_json() for r in recs]})
    rep.lines = ["exponent | w | j | C_j | m_v"]
    for r in recs:
        ms = " ".join(f"{v}:{k}" for v, k in r.extra) or "-"
        rep.lines.append(f"{r.exponent} | {r.coeff} | {r.level} | {r.associated} | {ms}")
    return rep


def cmd_sw(path: str, par: int = 1, **_) -> RunReport:
    ctx = build_context(_load(path))
    sw = evaluate_at_one(canonical_polynomial(ctx, par=par))
    res = {"sw0_norm": sw, "classification": classify(ctx).kind.value}
    rep = RunReport("sw", [path], res)
    rep.lines = [str(sw)]
    if classify(ctx).is_elliptic:
        m = nn_elliptic_sequence(ctx).m
        res["m"] = m
        rep.checks = [Check("sw0 = m + 1", "pass" if sw == m + 1 else FAIL, f"m = {m}")]
    return rep


def cmd_extend(path: str, sub: str, per_exponent: bool = False, **_) -> RunReport:
    outer = _load(path)
    inner = induced_subgraph(outer, parse_id_list(sub))
    pair = build_extension(inner, outer)
    good = is_good_extension(pair)
    res = good.to_json()
    if not per_exponent:
        res.pop("per_exponent")
    rep = RunReport("extend", [path], res)
    rep.lines = [
        f"inner: {{{','.join(map(str, inner.vertices))}}}",
        f"index: {pair.index}",
        f"good: {good.good}",
        f"truncated outer polynomial reduces to inner polynomial: {good.identity_holds}",
    ]
    bad = [e for e in good.per_exponent if e["status"] != "Extendable"]
    for e in bad:
        rep.lines.append(f"non-extendable: {e['star']} = ({','.join(e['dual'])})  level {e['level']}")
    if per_exponent:
        rep.lines.append("dual exponent | level | z | status | extensions")
        for e in good.per_exponent:
            rep.lines.append(f"{e['star']} | {e['level']} | {e['z']} | {e['status']} | {len(e['extensions'])}")
    rep.checks = [
        Check(
            "both goodness criteria agree",
            "pass" if good.consistent else FAIL,
            "" if good.consistent else f"identity {good.identity_holds}, per-exponent {good.all_extendable}",
        )
    ]
    return rep


def cmd_check(path: str, **_) -> RunReport:
    p = Path(path)
    files = sorted(f for f in p.iterdir() if f.suffix in (".txt", ".json")) if p.is_dir() else [p]
    rep = RunReport("check", [str(f) for f in files])
    per_file = {}
    for f in files:
        g = _load(str(f))
        cs = run_checks(g)
        kind = classify(build_context(g)).kind.value
        per_file[f.name] = {"classification": kind, "checks": [c.to_json() for c in cs]}
        rep.lines.append(f"== {f.name} ({kind})")
        rep.checks += [Check(f"{f.name}: {c.name}", c.status, c.detail) for c in cs]
    rep.checks += combinatorial_checks()
    rep.results = {"files": per_file}
    n_fail = sum(c.status == FAIL for c in rep.checks)
    n_skip = sum(c.status == SKIP for c in rep.checks)
    rep.results["summary"] = {"checks": len(rep.checks), "failed": n_fail, "skipped": n_skip}
    return rep


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "ellseq": cmd_ellseq,
    "poly": cmd_poly,
    "exponents": cmd_exponents,
    "sw": cmd_sw,
    "extend": cmd_extend,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--par", type=int, default=argparse.SUPPRESS, help="enumeration threads (default 1)")

    parser = argparse.ArgumentParser(prog="plumbpoly", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "info", "ellseq", "exponents", "sw"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("path")
    sp = sub.add_parser("poly", parents=[common])
    sp.add_argument("path")
    sp.add_argument("--reduce", metavar="IDS", help="keep only these variables, e.g. 1..6 or 1,2,4")
    sp.add_argument("--dual", action="store_true", help="print the dual exponents instead")
    sp.add_argument("--trace", action="store_true", help="include Laufer computation sequences")
    sp = sub.add_parser("extend", parents=[common])
    sp.add_argument("path", help="outer graph")
    sp.add_argument("--sub", required=True, metavar="IDS", help="vertices of the inner graph")
    sp.add_argument("--per-exponent", action="store_true")
    sp = sub.add_parser("check", parents=[common])
    sp.add_argument("path", help="graph file or directory of graph files")
    return parser


def run(argv: list[str] | None = None) -> RunReport:
    args = vars(build_parser().parse_args(argv))
    name = args.pop("command")
    args.setdefault("par", 1)
    args.pop("json", None)
    path = args.get("path", "")
    try:
        return COMMANDS[name](**args)
    except (PlumbingError, OSError, ValueError, KeyError) as exc:
        rep = RunReport(name, [path])
        rep.error = f"{type(exc).__name__}: {exc}"
        return rep


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    as_json = "--json" in argv
    rep = run(argv)
    print(rep.render(as_json))
    return rep.exit_code


__all__ = ["RunReport", "build_parser", "main", "parse_id_list", "run"]

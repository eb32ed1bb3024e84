"""
Compare the numba and pure-numpy backends of the enumeration kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is run once per backend to warm up (this triggers JIT
compilation for numba), then timed over N repeats.  Results of the two
backends are compared for equality before any timing is reported.
"""

import argparse
import time

import numpy as np

from plumbpoly import _kernels, fixtures
from plumbpoly.lattice import build_context, representative_r, scale
from plumbpoly.laufer import minimal_cycle
from plumbpoly.poincare import enumerate_dual_support


def workloads():
    for name in ("ex2", "fig2_12", "pair43_a", "fig1", "fig2"):
        ctx = build_context(fixtures.load(name))
        yield f"dual support {name}", lambda use, ctx=ctx: [
            (e.cycle, e.coeff) for e in enumerate_dual_support(ctx, ctx.ZK, ctx.ZK - ctx.E_total, use_numba=use)
        ]
    for name in ("ex2", "fig1", "fig2"):
        ctx = build_context(fixtures.load(name))
        r = representative_r(ctx, ctx.ZK)
        steps = np.array([int(c) for c in (ctx.ZK - r).coords], dtype=np.int64)
        yield f"anti-nef box {name}", lambda use, ctx=ctx, r=r, steps=steps: _kernels.antinef_box(
            ctx.M_array, scale(ctx, r), steps, ctx.det, use_numba=use
        ).tolist()
    for name in ("ex2", "fig2_12", "pair43_a"):
        ctx = build_context(fixtures.load(name))
        ub = np.array([int(c) for c in minimal_cycle(ctx).coords], dtype=np.int64)
        lin = np.array([e + 2 for e in ctx.graph.euler], dtype=np.int64)
        yield f"chi = 0 box {name}", lambda use, ctx=ctx, ub=ub, lin=lin: _kernels.chi_zero_box(
            ctx.M_array, lin, ub, use_numba=use
        ).tolist()


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {_kernels.HAS_NUMBA}")
    print(f"{'workload':28s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for label, fn in workloads():
        ref = fn(False)
        if _kernels.HAS_NUMBA:
            assert fn(True) == ref, f"backends disagree on {label}"
        t_np = best_of(lambda: fn(False), args.repeat)
        if _kernels.HAS_NUMBA:
            t_nb = best_of(lambda: fn(True), args.repeat)
            print(f"{label:28s} {t_np * 1e3:12.2f} {t_nb * 1e3:12.2f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{label:28s} {t_np * 1e3:12.2f} {'n/a':>12s} {'':>8s}")


if __name__ == "__main__":
    main()

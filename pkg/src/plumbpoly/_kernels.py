"""Integer enumeration kernels.

Each kernel has a numba version and a pure-numpy version with identical
output (same rows, same order).  The numba path is used when numba imports and
``PLUMBPOLY_DISABLE_NUMBA`` is unset or ``0``.

All vectors are int64 and scaled so that dual-lattice cycles become integral.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import EnumerationLimit

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False

MAX_POINTS = 2_000_000


def numba_enabled() -> bool:
    return HAS_NUMBA and os.environ.get("PLUMBPOLY_DISABLE_NUMBA", "0") in ("", "0")


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


def _maybe_jit(fn):
    return njit(cache=True, nogil=True)(fn) if HAS_NUMBA else fn


# ---------------------------------------------------------------- star support


def _star_enumerate_loop(gens, bounds, mask, limit, target, modulus, base, cap):
    # Odometer over multiplicity vectors, last generator fastest.  A state is
    # "alive" when some masked coordinate is still below its limit; adding a
    # generator only increases coordinates, so dead states have no live
    # descendants.
    k, n = gens.shape
    mult = np.zeros(k, dtype=np.int64)
    cur = base.copy()
    out_mult = np.zeros((cap, k), dtype=np.int64)
    out_cyc = np.zeros((cap, n), dtype=np.int64)
    count = 0
    alive = False
    for w in range(n):
        if mask[w] and cur[w] < limit[w]:
            alive = True
    if not alive:
        return out_mult[:0], out_cyc[:0], 0
    while True:
        ok = True
        for w in range(n):
            if (cur[w] - target[w]) % modulus != 0:
                ok = False
                break
        if ok:
            if count >= cap:
                return out_mult, out_cyc, -1
            out_mult[count, :] = mult
            out_cyc[count, :] = cur
            count += 1
        i = k - 1
        while i >= 0:
            if bounds[i] < 0 or mult[i] < bounds[i]:
                for w in range(n):
                    cur[w] += gens[i, w]
                mult[i] += 1
                alive = False
                for w in range(n):
                    if mask[w] and cur[w] < limit[w]:
                        alive = True
                        break
                if alive:
                    break
                for w in range(n):
                    cur[w] -= gens[i, w]
                mult[i] -= 1
            for w in range(n):
                cur[w] -= mult[i] * gens[i, w]
            mult[i] = 0
            i -= 1
        if i < 0:
            break
    return out_mult[:count], out_cyc[:count], count


_star_enumerate_jit = _maybe_jit(_star_enumerate_loop)


def _star_enumerate_numpy(gens, bounds, mask, limit, target, modulus, base):
    k, n = gens.shape
    mult = np.zeros((1, k), dtype=np.int64)
    cyc = base.reshape(1, n).copy()
    m = mask.astype(bool)

    def alive(c):
        return np.any((c < limit) & m, axis=1)

    keep = alive(cyc)
    mult, cyc = mult[keep], cyc[keep]
    for i in range(k):
        parts_m, parts_c = [mult], [cyc]
        cm, cc = mult, cyc
        t = 0
        while len(cc) and (bounds[i] < 0 or t < bounds[i]):
            cc = cc + gens[i]
            cm = cm.copy()
            cm[:, i] += 1
            keep = alive(cc)
            cm, cc = cm[keep], cc[keep]
            parts_m.append(cm)
            parts_c.append(cc)
            t += 1
            if sum(len(p) for p in parts_c) > MAX_POINTS:
                raise EnumerationLimit("dual support enumeration exceeded its bound")
        mult, cyc = np.concatenate(parts_m), np.concatenate(parts_c)
    ok = np.all((cyc - target) % modulus == 0, axis=1)
    mult, cyc = mult[ok], cyc[ok]
    if len(mult):
        order = np.lexsort(mult.T[::-1])
        mult, cyc = mult[order], cyc[order]
    return mult, cyc


def star_enumerate(gens, bounds, mask, limit, target, modulus, base=None, use_numba=None, par=1):
    """Enumerate ``base + sum mult_i * gens_i`` staying below ``limit`` somewhere on ``mask``.

    ``bounds[i] < 0`` means unbounded.  Only points congruent to ``target``
    modulo ``modulus`` (coordinatewise) are returned.  Rows are in ascending
    lexicographic order of the multiplicity vectors.  With ``par > 1`` the
    range of the first multiplicity is split across threads; the output is
    identical.
    """
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    bounds = np.asarray(bounds, dtype=np.int64)
    mask = np.asarray(mask, dtype=np.int64)
    limit = np.asarray(limit, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64)
    n = len(limit)
    base = np.zeros(n, dtype=np.int64) if base is None else np.asarray(base, dtype=np.int64)
    if gens.shape[0] == 0:
        gens = gens.reshape(0, n)
    if use_numba is None:
        use_numba = numba_enabled()
    if par > 1 and gens.shape[0] > 1:
        return _star_enumerate_split(gens, bounds, mask, limit, target, modulus, base, use_numba, par)
    if not use_numba:
        return _star_enumerate_numpy(gens, bounds, mask, limit, target, int(modulus), base)
    fn = _star_enumerate_jit if HAS_NUMBA else _star_enumerate_loop
    cap = 1024
    while True:
        mult, cyc, count = fn(gens, bounds, mask, limit, target, int(modulus), base, cap)
        if count >= 0:
            return mult.copy(), cyc.copy()
        cap *= 4
        if cap > 4 * MAX_POINTS:
            raise EnumerationLimit("dual support enumeration exceeded its bound")


def _star_enumerate_split(gens, bounds, mask, limit, target, modulus, base, use_numba, par):
    from concurrent.futures import ThreadPoolExecutor

    m = mask.astype(bool)
    starts = []
    t = 0
    cur = base.copy()
    while np.any((cur < limit) & m) and (bounds[0] < 0 or t <= bounds[0]):
        starts.append((t, cur.copy()))
        cur = cur + gens[0]
        t += 1

    def run(item):
        t, b = item
        mult, cyc = star_enumerate(gens[1:], bounds[1:], mask, limit, target, modulus, b, use_numba, 1)
        col = np.full((len(mult), 1), t, dtype=np.int64)
        return np.hstack([col, mult]), cyc

    with ThreadPoolExecutor(max_workers=par) as ex:
        parts = list(ex.map(run, starts))
    if not parts:
        return np.zeros((0, gens.shape[0]), dtype=np.int64), np.zeros((0, len(limit)), dtype=np.int64)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


# ---------------------------------------------------------------- anti-nef box


def _antinef_box_loop(m, lo, steps, unit, cap):
    # Points lo + unit * x with 0 <= x <= steps and (M p)_v <= 0 for all v.
    # Coordinates are fixed in order; once coordinate i is set, (M p)_v for
    # v <= i can only grow when later coordinates increase, so a positive
    # value there is final.
    n = lo.shape[0]
    x = np.zeros(n, dtype=np.int64)
    p = lo.copy()
    mp = np.zeros(n, dtype=np.int64)
    for v in range(n):
        s = 0
        for w in range(n):
            s += m[v, w] * p[w]
        mp[v] = s
    out = np.zeros((cap, n), dtype=np.int64)
    count = 0
    i = 0
    # depth-first search: state "entering coordinate i with value x[i]"
    while True:
        # check prefix feasibility for coordinate i
        feasible = True
        for v in range(i + 1):
            if mp[v] > 0:
                # v's own coefficient is negative: raising x[v] later is not
                # possible (already fixed), and neighbours only add
                feasible = False
                break
        if feasible and i == n - 1:
            if count >= cap:
                return out, -1
            out[count, :] = p
            count += 1
        if feasible and i < n - 1:
            i += 1
            continue
        # advance coordinate i, backtracking as needed
        while True:
            if x[i] < steps[i]:
                x[i] += 1
                p[i] += unit
                for v in range(n):
                    mp[v] += m[v, i] * unit
                break
            for v in range(n):
                mp[v] -= m[v, i] * unit * x[i]
            p[i] -= unit * x[i]
            x[i] = 0
            i -= 1
            if i < 0:
                return out[:count], count
    return out[:count], count


_antinef_box_jit = _maybe_jit(_antinef_box_loop)


def _antinef_box_numpy(m, lo, steps, unit):
    n = lo.shape[0]
    pts = lo.reshape(1, n).copy()
    for i in range(n):
        reps = steps[i] + 1
        pts = np.repeat(pts, reps, axis=0)
        pts[:, i] += unit * np.tile(np.arange(reps, dtype=np.int64), len(pts) // reps)
        # rows v <= i are final up to increases from later coordinates
        mp = pts @ m[: i + 1].T
        pts = pts[np.all(mp <= 0, axis=1)]
        if len(pts) > MAX_POINTS:
            raise EnumerationLimit("anti-nef box enumeration exceeded its bound")
    return pts


def antinef_box(m, lo, steps, unit, use_numba=None):
    """Anti-nef points of the box ``lo + unit * [0, steps]`` in lexicographic order."""
    m = np.ascontiguousarray(m, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.int64)
    steps = np.asarray(steps, dtype=np.int64)
    if np.any(steps < 0):
        return np.zeros((0, len(lo)), dtype=np.int64)
    if use_numba is None:
        use_numba = numba_enabled()
    if not use_numba:
        return _antinef_box_numpy(m, lo, steps, int(unit))
    fn = _antinef_box_jit if HAS_NUMBA else _antinef_box_loop
    cap = 256
    while True:
        out, count = fn(m, lo, steps, int(unit), cap)
        if count >= 0:
            return out.copy()
        cap *= 4
        if cap > 4 * MAX_POINTS:
            raise EnumerationLimit("anti-nef box enumeration exceeded its bound")


# ---------------------------------------------------------------- chi = 0 box


def _chi_zero_box_loop(m, lin, upper, cap):
    # Integral 0 < l <= upper with 2*chi(l) = -l.M.l + lin.l equal to zero.
    n = upper.shape[0]
    x = np.zeros(n, dtype=np.int64)
    mx = np.zeros(n, dtype=np.int64)
    q = 0
    out = np.zeros((cap, n), dtype=np.int64)
    count = 0
    while True:
        i = n - 1
        while i >= 0 and x[i] == upper[i]:
            # reset coordinate i
            t = x[i]
            q += 2 * t * mx[i] - t * t * m[i, i] - lin[i] * t
            for v in range(n):
                mx[v] -= m[v, i] * t
            x[i] = 0
            i -= 1
        if i < 0:
            break
        # increment x[i]: delta(-l.M.l) = -(2 (M x)_i + M_ii)
        q += -(2 * mx[i] + m[i, i]) + lin[i]
        x[i] += 1
        for v in range(n):
            mx[v] += m[v, i]
        if q == 0:
            if count >= cap:
                return out, -1
            out[count, :] = x
            count += 1
    return out[:count], count


_chi_zero_box_jit = _maybe_jit(_chi_zero_box_loop)


def _chi_zero_box_numpy(m, lin, upper):
    axes = [np.arange(u + 1, dtype=np.int64) for u in upper]
    total = int(np.prod([len(a) for a in axes], dtype=object))
    if total > 50 * MAX_POINTS:
        raise EnumerationLimit("chi box enumeration exceeded its bound")
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(upper))
    q = -np.einsum("ij,jk,ik->i", pts, m, pts) + pts @ lin
    hits = pts[(q == 0) & np.any(pts != 0, axis=1)]
    return hits


def chi_zero_box(m, lin, upper, use_numba=None):
    """Integral ``0 < l <= upper`` with ``-l.M.l + lin.l == 0`` in lexicographic order."""
    m = np.ascontiguousarray(m, dtype=np.int64)
    lin = np.asarray(lin, dtype=np.int64)
    upper = np.asarray(upper, dtype=np.int64)
    if use_numba is None:
        use_numba = numba_enabled()
    if not use_numba:
        return _chi_zero_box_numpy(m, lin, upper)
    fn = _chi_zero_box_jit if HAS_NUMBA else _chi_zero_box_loop
    cap = 256
    while True:
        out, count = fn(m, lin, upper, cap)
        if count >= 0:
            return out.copy()
        cap *= 4

"""Hot kernels for collinearity scanning.

Two implementations live here: numba-jitted kernels (default when numba
imports cleanly) and pure-numpy fallbacks.  Set ``NINAROW_PURE_NUMPY=1``
to force the fallback path; ``ninarow.kernel_backend()`` reports which
one is active.

Both paths share the same trick: two lattice deltas have equal rational
slope exactly when their float64 quotients are equal (IEEE division is
correctly rounded, so equal rationals always produce the identical
float).  Distinct rationals can still collide on the same float, so any
candidate group found by slope hashing is re-verified with exact integer
cross products before it is emitted.
"""

import math
import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("NINAROW_PURE_NUMPY", "") != "1"


def kernel_backend():
    """Name of the active kernel implementation: 'numba' or 'numpy'."""
    return "numba" if USE_NUMBA else "numpy"


def _dummy_jit(*args, **kwargs):
    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]):
        return args[0]
    return wrap


_jit = numba.njit if USE_NUMBA else _dummy_jit

# Fibonacci hashing: multiply by the golden-ratio constant and keep the
# HIGH bits of the 64-bit product.  Low product bits depend only on low
# input bits, and slope floats from structured boards (small-denominator
# rationals) share long runs of trailing mantissa zeros, so a low-bits
# hash piles them into a handful of slots.
_HASH_MULT = np.uint64(0x9E3779B97F4A7C15)


@_jit(cache=True)
def _gcd64(a, b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b != 0:
        a, b = b, a % b
    return a


@_jit(cache=True)
def _scan_kernel(xs, ys, need):  # pragma: no cover - compiled
    """Anchor scan over lex-sorted distinct points.

    For every anchor i, bucket the later points j > i by float slope,
    then confirm each bucket of size >= need-1 exactly and emit one
    (a, b, c, count) row per verified line.  Later anchors on the same
    line re-emit with smaller counts; the wrapper dedupes keeping the
    maximum, which the lex-least anchor supplies.
    """
    m = xs.shape[0]
    cap = 1024
    out = np.empty((cap, 4), np.int64)
    nout = 0

    tsize = 1
    shift = 64
    while tsize < 4 * (m + 2):
        tsize *= 2
        shift -= 1
    mask = tsize - 1
    hshift = np.uint64(shift)
    keys = np.zeros(tsize, np.int64)
    cnts = np.zeros(tsize, np.int32)
    stamp = np.zeros(tsize, np.int32)
    head = np.zeros(tsize, np.int32)
    nxt = np.zeros(m + 1, np.int32)
    slots_used = np.zeros(m + 1, np.int32)
    mbuf = np.zeros(m + 1, np.int32)
    keep = np.zeros(m + 1, np.int32)

    # Slope bits are read through an aliasing int64 view so the divide
    # loop vectorizes and the probe loop never round-trips a buffer.
    slbuf = np.empty(m, np.float64)
    bitsbuf = slbuf.view(np.int64)

    gen = 0
    for i in range(m - 1):
        ax = xs[i]
        ay = ys[i]

        # Same-x points are contiguous after i in lex order.
        j = i + 1
        while j < m and xs[j] == ax:
            j += 1
        vcount = j - i
        if vcount >= need:
            if nout == cap:
                cap *= 2
                grown = np.empty((cap, 4), np.int64)
                grown[:nout] = out[:nout]
                out = grown
            out[nout, 0] = 0
            out[nout, 1] = 1
            out[nout, 2] = ax
            out[nout, 3] = vcount
            nout += 1

        jstart = j
        if m - jstart < need - 1:
            continue
        gen += 1
        nused = 0
        for u in range(m - jstart):
            slbuf[u] = (ys[jstart + u] - ay) / (xs[jstart + u] - ax)
        for u in range(m - jstart):
            bits = bitsbuf[u]
            j = jstart + u
            h = np.int64((np.uint64(bits) * _HASH_MULT) >> hshift)
            while True:
                if stamp[h] != gen:
                    stamp[h] = gen
                    keys[h] = bits
                    cnts[h] = 1
                    head[h] = j
                    nxt[j] = -1
                    slots_used[nused] = h
                    nused += 1
                    break
                if keys[h] == bits:
                    cnts[h] += 1
                    nxt[j] = head[h]
                    head[h] = j
                    break
                h = (h + 1) & mask

        for s in range(nused):
            slot = slots_used[s]
            total = cnts[slot]
            if total < need - 1:
                continue
            nmem = 0
            t = head[slot]
            while t != -1:
                mbuf[nmem] = t
                nmem += 1
                t = nxt[t]
            # Exact subgrouping: floats may alias distinct rationals.
            nleft = nmem
            while nleft >= need - 1:
                rep = mbuf[0]
                rdx = xs[rep] - ax
                rdy = ys[rep] - ay
                same = 0
                nk = 0
                for u in range(nleft):
                    t = mbuf[u]
                    cross = rdy * (xs[t] - ax) - rdx * (ys[t] - ay)
                    if cross == 0:
                        same += 1
                    else:
                        keep[nk] = t
                        nk += 1
                if same + 1 >= need:
                    g = _gcd64(rdx, rdy)
                    a = rdx // g
                    b = rdy // g
                    if nout == cap:
                        cap *= 2
                        grown = np.empty((cap, 4), np.int64)
                        grown[:nout] = out[:nout]
                        out = grown
                    out[nout, 0] = a
                    out[nout, 1] = b
                    out[nout, 2] = b * ax - a * ay
                    out[nout, 3] = same + 1
                    nout += 1
                for u in range(nk):
                    mbuf[u] = keep[u]
                nleft = nk
    return out[:nout]


@_jit(cache=True)
def _batch_kernel(xs, ys, bstart, need):  # pragma: no cover - compiled
    """Directions through each new point that reach need total points.

    Points are in insertion order; indices >= bstart are the new batch.
    Each new point is compared against everything before it (so earlier
    batch points count), with deltas sign-normalized to dx > 0 or
    (dx == 0, dy > 0).  Emits (index, a, b) rows with (a, b) reduced.
    """
    m = xs.shape[0]
    cap = 256
    out = np.empty((cap, 3), np.int64)
    nout = 0

    tsize = 1
    shift = 64
    while tsize < 4 * (m + 2):
        tsize *= 2
        shift -= 1
    mask = tsize - 1
    hshift = np.uint64(shift)
    keys = np.zeros(tsize, np.int64)
    cnts = np.zeros(tsize, np.int32)
    stamp = np.zeros(tsize, np.int32)
    head = np.zeros(tsize, np.int32)
    nxt = np.zeros(m + 1, np.int32)
    slots_used = np.zeros(m + 1, np.int32)
    mbuf = np.zeros(m + 1, np.int32)
    keep = np.zeros(m + 1, np.int32)

    # Slope of (dx, dy) is sign-flip invariant, so no normalization is
    # needed for bucketing; dx == 0 collapses to one +inf key.  Bits
    # are read through an aliasing int64 view, as in _scan_kernel.
    slbuf = np.empty(m, np.float64)
    bitsbuf = slbuf.view(np.int64)

    gen = 0
    for idx in range(bstart, m):
        if idx < need - 1:
            continue
        px = xs[idx]
        py = ys[idx]
        gen += 1
        nused = 0
        for j in range(idx):
            dx = xs[j] - px
            if dx == 0:
                slbuf[j] = np.inf
            else:
                # + 0.0 canonicalizes -0.0 (dy == 0, dx < 0) to +0.0.
                slbuf[j] = (ys[j] - py) / dx + 0.0
        for j in range(idx):
            bits = bitsbuf[j]
            h = np.int64((np.uint64(bits) * _HASH_MULT) >> hshift)
            while True:
                if stamp[h] != gen:
                    stamp[h] = gen
                    keys[h] = bits
                    cnts[h] = 1
                    head[h] = j
                    nxt[j] = -1
                    slots_used[nused] = h
                    nused += 1
                    break
                if keys[h] == bits:
                    cnts[h] += 1
                    nxt[j] = head[h]
                    head[h] = j
                    break
                h = (h + 1) & mask

        for s in range(nused):
            slot = slots_used[s]
            if cnts[slot] < need - 1:
                continue
            nmem = 0
            t = head[slot]
            while t != -1:
                mbuf[nmem] = t
                nmem += 1
                t = nxt[t]
            nleft = nmem
            while nleft >= need - 1:
                rep = mbuf[0]
                rdx = xs[rep] - px
                rdy = ys[rep] - py
                if rdx < 0 or (rdx == 0 and rdy < 0):
                    rdx = -rdx
                    rdy = -rdy
                same = 0
                nk = 0
                for u in range(nleft):
                    t = mbuf[u]
                    cross = rdy * (xs[t] - px) - rdx * (ys[t] - py)
                    if cross == 0:
                        same += 1
                    else:
                        keep[nk] = t
                        nk += 1
                if same + 1 >= need:
                    g = _gcd64(rdx, rdy)
                    if nout == cap:
                        cap *= 2
                        grown = np.empty((cap, 3), np.int64)
                        grown[:nout] = out[:nout]
                        out = grown
                    out[nout, 0] = idx
                    out[nout, 1] = rdx // g
                    out[nout, 2] = rdy // g
                    nout += 1
                for u in range(nk):
                    mbuf[u] = keep[u]
                nleft = nk
    return out[:nout]


def _scan_directions(xs, ys, need):
    """Exact direction-enumeration scan for dense point sets.

    A line with >= need points has its primitive step (a, b) bounded by
    |a| <= x-spread // (need-1) and |b| <= y-spread // (need-1), so for
    compact sets only a few directions can carry a qualifying line.
    Scans each candidate direction with one vectorized offset count; no
    floats involved, so no verification pass is needed.
    """
    rows = []
    amax = int(xs.max() - xs.min()) // (need - 1)
    bmax = int(ys.max() - ys.min()) // (need - 1)
    for a in range(amax + 1):
        if a == 0:
            bs = range(1, 2) if bmax >= 1 else range(0)
        else:
            bs = range(-bmax, bmax + 1)
        for b in bs:
            if a > 0 and math.gcd(a, abs(b)) != 1:
                continue
            c = b * xs - a * ys
            vals, counts = np.unique(c, return_counts=True)
            sel = counts >= need
            for cv, ct in zip(vals[sel].tolist(), counts[sel].tolist()):
                rows.append((a, b, cv, ct))
    if not rows:
        return np.empty((0, 4), np.int64)
    rows.sort()
    return np.array(rows, np.int64)


def _exact_groups_np(dxs, dys, need, emit):
    """Split one float-slope bucket by exact slope; call emit per group.

    dxs/dys are the raw deltas of the bucket members (sign convention is
    the caller's).  emit(rdx, rdy, count) receives a representative
    delta and the member count including neither endpoint.
    """
    while dxs.shape[0] >= need - 1:
        rdx = dxs[0]
        rdy = dys[0]
        cross = rdy * dxs - rdx * dys
        same = cross == 0
        nsame = int(np.count_nonzero(same))
        if nsame + 1 >= need:
            emit(int(rdx), int(rdy), nsame)
        dxs = dxs[~same]
        dys = dys[~same]


def _scan_numpy(xs, ys, need):
    """Numpy twin of _scan_kernel; same contract, sort-based buckets."""
    m = xs.shape[0]
    rows = []
    for i in range(m - 1):
        ax = int(xs[i])
        ay = int(ys[i])
        j = i + 1
        while j < m and xs[j] == ax:
            j += 1
        vcount = j - i
        if vcount >= need:
            rows.append((0, 1, ax, vcount))
        if m - j < need - 1:
            continue
        dx = xs[j:] - ax
        dy = ys[j:] - ay
        slopes = dy / dx
        uniq, inv, counts = np.unique(
            slopes, return_inverse=True, return_counts=True
        )
        for u in np.nonzero(counts >= need - 1)[0]:
            sel = inv == u
            bdx = dx[sel]
            bdy = dy[sel]

            def emit(rdx, rdy, nsame, _ax=ax, _ay=ay):
                g = math.gcd(rdx, rdy)
                a = rdx // g
                b = rdy // g
                rows.append((a, b, b * _ax - a * _ay, nsame + 1))

            _exact_groups_np(bdx, bdy, need, emit)
    if not rows:
        return np.empty((0, 4), np.int64)
    return np.array(rows, np.int64)


def _batch_numpy(xs, ys, bstart, need):
    """Numpy twin of _batch_kernel."""
    m = xs.shape[0]
    rows = []
    for idx in range(bstart, m):
        if idx < need - 1:
            continue
        px = int(xs[idx])
        py = int(ys[idx])
        dx = xs[:idx] - px
        dy = ys[:idx] - py
        flip = (dx < 0) | ((dx == 0) & (dy < 0))
        dx = np.where(flip, -dx, dx)
        dy = np.where(flip, -dy, dy)
        slopes = np.where(dx == 0, np.inf, dy / np.where(dx == 0, 1, dx))
        uniq, inv, counts = np.unique(
            slopes, return_inverse=True, return_counts=True
        )
        for u in np.nonzero(counts >= need - 1)[0]:
            sel = inv == u
            bdx = dx[sel]
            bdy = dy[sel]

            def emit(rdx, rdy, nsame, _idx=idx):
                g = math.gcd(rdx, rdy)
                rows.append((_idx, rdx // g, rdy // g))

            _exact_groups_np(bdx, bdy, need, emit)
    if not rows:
        return np.empty((0, 3), np.int64)
    return np.array(rows, np.int64)


def collinear_scan(xs, ys, min_points):
    """All maximal collinear groups of size >= min_points.

    Input arrays may be unsorted but must not contain duplicates.
    Returns an (n, 4) int64 array of (a, b, c, count) rows where (a, b)
    is the primitive direction (a > 0, or a == 0 and b == 1) and
    c = b*x - a*y for every point on the line.  One row per line,
    count is the full number of input points on it.
    """
    if min_points < 3:
        raise ValueError("collinear_scan requires min_points >= 3")
    xs = np.ascontiguousarray(xs, np.int64)
    ys = np.ascontiguousarray(ys, np.int64)
    if xs.shape[0] < min_points:
        return np.empty((0, 4), np.int64)
    # Dense sets: few candidate directions, each scanned in one pass.
    amax = int(xs.max() - xs.min()) // (min_points - 1)
    bmax = int(ys.max() - ys.min()) // (min_points - 1)
    if (amax + 1) * (2 * bmax + 1) * 8 <= xs.shape[0]:
        return _scan_directions(xs, ys, min_points)
    order = np.lexsort((ys, xs))
    xs = np.ascontiguousarray(xs[order])
    ys = np.ascontiguousarray(ys[order])
    if USE_NUMBA:
        rows = _scan_kernel(xs, ys, min_points)
    else:
        rows = _scan_numpy(xs, ys, min_points)
    if rows.shape[0] == 0:
        return rows
    # Keep the max count per (a, b, c): the lex-least anchor sees the
    # whole line, later anchors only suffixes.
    order = np.lexsort((rows[:, 3], rows[:, 2], rows[:, 1], rows[:, 0]))
    rows = rows[order]
    key = rows[:, :3]
    last = np.ones(rows.shape[0], bool)
    last[:-1] = np.any(key[1:] != key[:-1], axis=1)
    return rows[last]


def batch_rich_directions(xs, ys, batch_start, min_points):
    """Directions through new points that collect >= min_points points.

    xs/ys hold all Maker points in insertion order (duplicates absent);
    indices >= batch_start form the new batch.  Returns an (n, 3) int64
    array of (index, a, b) rows, (a, b) primitive and sign-normalized.
    """
    if min_points < 2:
        raise ValueError("batch_rich_directions requires min_points >= 2")
    xs = np.ascontiguousarray(xs, np.int64)
    ys = np.ascontiguousarray(ys, np.int64)
    if USE_NUMBA:
        return _batch_kernel(xs, ys, batch_start, min_points)
    return _batch_numpy(xs, ys, batch_start, min_points)


def warmup():
    """Trigger JIT compilation on toy input (no-op on the numpy path)."""
    xs = np.array([0, 1, 2, 3, 0, 0], np.int64)
    ys = np.array([0, 1, 2, 3, 1, 2], np.int64)
    collinear_scan(xs, ys, 3)
    batch_rich_directions(xs, ys, 3, 3)

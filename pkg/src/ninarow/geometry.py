"""Exact integer-lattice line geometry.

Lines through lattice points are identified by a canonical key so two
point pairs on the same line always produce the same key: a primitive
direction (dx, dy) with dx > 0, or dx == 0 and dy == 1, plus the offset
c = dy*x - dx*y shared by every point on the line.  All arithmetic is
exact integer arithmetic; nothing here touches floats.

Coordinates are assumed to fit in +-2**30 so that cross products and
offsets stay inside int64 for the array kernels.
"""

import math
from typing import NamedTuple

import numpy as np

from ._kernels import collinear_scan

MAX_COORD = 2**30


class GridPoint(NamedTuple):
    x: int
    y: int


class Direction(NamedTuple):
    """Primitive direction: gcd(dx, dy) == 1, dx > 0 or (dx == 0, dy == 1)."""

    dx: int
    dy: int


class LineKey(NamedTuple):
    """Canonical line id: direction plus offset c = dy*x - dx*y."""

    direction: Direction
    offset: int


def canonical_direction(dx, dy):
    """Reduce a nonzero integer vector to its canonical primitive form.

    (2, -4) -> (1, -2); (0, -7) -> (0, 1); (-3, 3) -> (1, -1).
    """
    if dx == 0 and dy == 0:
        raise ValueError("zero vector has no direction")
    g = math.gcd(dx, dy)
    dx //= g
    dy //= g
    if dx < 0 or (dx == 0 and dy < 0):
        dx = -dx
        dy = -dy
    return Direction(dx, dy)


def line_key(p, q):
    """Canonical key of the unique line through two distinct points."""
    px, py = p
    qx, qy = q
    if px == qx and py == qy:
        raise ValueError(f"line through identical points {p!r}")
    d = canonical_direction(qx - px, qy - py)
    return LineKey(d, d.dy * px - d.dx * py)


def line_anchor(key):
    """Reference point of the line: smallest x >= 0 (vertical: y = 0).

    Every lattice point on the line is anchor + t * direction for a
    unique integer t (see line_param).
    """
    (dx, dy), c = key
    if dx == 0:
        return GridPoint(c, 0)
    # Solve dy*x == c (mod dx) for the least non-negative x.
    x0 = (c * pow(dy % dx, -1, dx)) % dx if dx > 1 else 0
    return GridPoint(x0, (dy * x0 - c) // dx)


def line_param(key, p):
    """Integer t with p == anchor + t * direction.  p must lie on the line."""
    (dx, dy), c = key
    px, py = p
    if dy * px - dx * py != c:
        raise ValueError(f"{p!r} is not on line {key!r}")
    ax, ay = line_anchor(key)
    if dx == 0:
        return py - ay
    return (px - ax) // dx


def point_at(key, t):
    """Inverse of line_param: the lattice point at parameter t."""
    ax, ay = line_anchor(key)
    (dx, dy), _ = key
    return GridPoint(ax + t * dx, ay + t * dy)


def points_on_line(key, t_lo, t_hi):
    """Lattice points at parameters t_lo..t_hi inclusive, in order."""
    ax, ay = line_anchor(key)
    (dx, dy), _ = key
    return [GridPoint(ax + t * dx, ay + t * dy) for t in range(t_lo, t_hi + 1)]


def collinear(p, q, r):
    """True when the three points lie on one line (duplicates count)."""
    return (q[0] - p[0]) * (r[1] - p[1]) == (q[1] - p[1]) * (r[0] - p[0])


def _dedupe_array(points):
    pts = np.asarray(sorted(set((int(p[0]), int(p[1])) for p in points)), np.int64)
    if pts.size == 0:
        pts = pts.reshape(0, 2)
    return pts


def _pair_hash_groups(pts, min_size):
    """O(n^2) pair-hash grouping; only sane for small point sets."""
    groups = {}
    n = pts.shape[0]
    for i in range(n):
        p = GridPoint(int(pts[i, 0]), int(pts[i, 1]))
        for j in range(i + 1, n):
            q = GridPoint(int(pts[j, 0]), int(pts[j, 1]))
            key = line_key(p, q)
            members = groups.get(key)
            if members is None:
                groups[key] = {p, q}
            else:
                members.add(p)
                members.add(q)
    return {k: v for k, v in groups.items() if len(v) >= min_size}


def _scan_line_members(pts, rows):
    """Member points for each (a, b, c, count) scan row, grouped per direction."""
    xs = pts[:, 0]
    ys = pts[:, 1]
    by_dir = {}
    for a, b, c, count in rows:
        by_dir.setdefault((int(a), int(b)), []).append((int(c), int(count)))
    out = {}
    for (a, b), lines in by_dir.items():
        cvals = b * xs - a * ys
        order = np.argsort(cvals, kind="stable")
        csorted = cvals[order]
        for c, count in lines:
            lo = np.searchsorted(csorted, c, "left")
            hi = np.searchsorted(csorted, c, "right")
            idx = order[lo:hi]
            members = sorted(
                GridPoint(int(xs[i]), int(ys[i])) for i in idx
            )
            key = LineKey(Direction(a, b), c)
            out[key] = members
    return out


def collinear_groups(points, min_size=3):
    """Maximal collinear subsets of size >= min_size.

    Returns {LineKey: [GridPoint, ...]} with members ordered by line
    parameter and keys in sorted order.  min_size == 2 falls back to
    plain pair hashing and reports every line with two or more points.
    """
    if min_size < 2:
        raise ValueError("min_size must be >= 2")
    pts = _dedupe_array(points)
    if pts.shape[0] < min_size:
        return {}
    if min_size == 2:
        groups = _pair_hash_groups(pts, min_size)
        return {k: sorted(groups[k]) for k in sorted(groups)}
    rows = collinear_scan(pts[:, 0], pts[:, 1], min_size)
    groups = _scan_line_members(pts, rows)
    return {k: groups[k] for k in sorted(groups)}


def rich_lines(points, k):
    """Lines holding >= k of the given points, as (LineKey, count) pairs.

    Sorted by descending count, then by key.  Counts are of distinct
    points; duplicates in the input are ignored.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    pts = _dedupe_array(points)
    if pts.shape[0] < k:
        return []
    if k == 2:
        groups = _pair_hash_groups(pts, 2)
        pairs = [(key, len(v)) for key, v in groups.items()]
    else:
        rows = collinear_scan(pts[:, 0], pts[:, 1], k)
        pairs = [
            (LineKey(Direction(int(a), int(b)), int(c)), int(count))
            for a, b, c, count in rows
        ]
    pairs.sort(key=lambda item: (-item[1], item[0]))
    return pairs

"""Collinearity kernels against pair-enumeration oracles, on both the
jitted and the pure-numpy backends."""

import json
import os
import random
import subprocess
import sys

import numpy as np
import pytest

import oracles
from ninarow._kernels import (
    HAS_NUMBA,
    batch_rich_directions,
    collinear_scan,
    kernel_backend,
)


def _rows_to_dict(rows):
    return {
        ((int(a), int(b)), int(c)): int(cnt)
        for a, b, c, cnt in np.asarray(rows).tolist()
    }


def _oracle_rich(pts, k):
    return {
        key: len(group)
        for key, group in oracles.group_lines(pts).items()
        if len(group) >= k
    }


def _scan(pts, k):
    arr = np.array(sorted(pts), np.int64)
    return collinear_scan(arr[:, 0], arr[:, 1], k)


def test_scan_matches_oracle_on_random_boards():
    rng = random.Random(201)
    for trial in range(120):
        span = rng.randint(3, 15)
        size = rng.randint(3, 26)
        pts = set()
        while len(pts) < size:
            pts.add((rng.randint(-span, span), rng.randint(-span, span)))
        k = rng.choice((3, 4, 5))
        assert _rows_to_dict(_scan(pts, k)) == _oracle_rich(pts, k), (trial, sorted(pts))


def test_scan_matches_oracle_on_structured_boards():
    # column clouds with quadratic stagger: the shapes the strategies build
    rng = random.Random(202)
    for trial in range(30):
        cols = rng.randint(3, 9)
        per = rng.randint(3, 7)
        stride = rng.randint(2, 9)
        pts = {
            (x, stride * x * x + y)
            for x in range(cols)
            for y in range(per)
        }
        k = rng.choice((3, 4))
        assert _rows_to_dict(_scan(pts, k)) == _oracle_rich(pts, k), trial


def test_scan_on_a_dense_grid():
    pts = [(x, y) for x in range(6) for y in range(6)]
    assert _rows_to_dict(_scan(pts, 3)) == _oracle_rich(pts, 3)


def test_scan_boundary_inputs():
    empty = np.array([], np.int64)
    assert np.asarray(collinear_scan(empty, empty, 3)).shape[0] == 0
    xs = np.array([0, 1], np.int64)
    ys = np.array([0, 0], np.int64)
    assert np.asarray(collinear_scan(xs, ys, 3)).shape[0] == 0
    with pytest.raises(ValueError):
        collinear_scan(xs, ys, 2)


def test_batch_scan_reports_lines_touching_new_points():
    # rows are (index, a, b): one representative new point per line that
    # reached min_points, with the primitive direction of that line
    rng = random.Random(203)
    for trial in range(60):
        span = rng.randint(4, 12)
        total = rng.randint(6, 24)
        pts = []
        seen = set()
        while len(pts) < total:
            p = (rng.randint(-span, span), rng.randint(-span, span))
            if p not in seen:
                seen.add(p)
                pts.append(p)
        start = rng.randint(1, total - 1)
        k = 3
        arr = np.array(pts, np.int64)
        rows = np.asarray(batch_rich_directions(arr[:, 0], arr[:, 1], start, k))
        got = set()
        for idx, a, b in rows.tolist():
            assert idx >= start
            assert (a, b) == oracles.prim(a, b)
            p = pts[idx]
            got.add(oracles.line_of(p, (p[0] + a, p[1] + b)))
        fresh = set(pts[start:])
        want = {
            key
            for key, group in oracles.group_lines(pts).items()
            if len(group) >= k and any(p in fresh for p in group)
        }
        assert got == want, (trial, pts, start)


def test_batch_scan_with_no_new_points_is_empty():
    arr = np.array([(x, 0) for x in range(5)], np.int64)
    rows = batch_rich_directions(arr[:, 0], arr[:, 1], 5, 3)
    assert np.asarray(rows).shape[0] == 0


_CHILD = r"""
import json, sys
import numpy as np
from ninarow._kernels import collinear_scan, kernel_backend
pts = json.loads(sys.stdin.read())
arr = np.array(pts, np.int64)
rows = collinear_scan(arr[:, 0], arr[:, 1], 3)
print(json.dumps({
    "backend": kernel_backend(),
    "rows": sorted(np.asarray(rows).tolist()),
}))
"""


def _scan_in_subprocess(pts, pure):
    env = dict(os.environ)
    if pure:
        env["NINAROW_PURE_NUMPY"] = "1"
    else:
        env.pop("NINAROW_PURE_NUMPY", None)
    out = subprocess.run(
        [sys.executable, "-c", _CHILD],
        input=json.dumps([list(p) for p in sorted(pts)]),
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout)


def test_pure_numpy_backend_agrees_with_default():
    rng = random.Random(204)
    pts = set()
    while len(pts) < 40:
        pts.add((rng.randint(-20, 20), rng.randint(-20, 20)))
    pure = _scan_in_subprocess(pts, pure=True)
    assert pure["backend"] == "numpy"
    dflt = _scan_in_subprocess(pts, pure=False)
    assert dflt["backend"] == kernel_backend()
    assert pure["rows"] == dflt["rows"]
    assert pure["rows"] == sorted(
        [[d[0], d[1], c, cnt] for ((d, c), cnt) in _oracle_rich(pts, 3).items()]
    )


def test_default_backend_is_numba_when_available():
    if HAS_NUMBA and "NINAROW_PURE_NUMPY" not in os.environ:
        assert kernel_backend() == "numba"
    else:
        assert kernel_backend() == "numpy"

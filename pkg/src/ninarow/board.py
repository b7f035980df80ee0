"""Game state and rules of the generalized n-in-a-row game.

A win is n Maker points on one lattice line with no blocking Breaker
point between the first and last of them — equivalently, a Breaker-free
segment whose maker_count reaches n.  Variants:

- standard: both sides claim plain points, exclusively.
- directed: Breaker marks carry a direction and block only lines with
  that direction; the same point may be marked again with a different
  direction at the cost of an extra point.
- batched / batched-directed: Breaker may also mark points Maker owns;
  on every line where such a mark blocks, the coinciding Maker point is
  captured and stops counting toward Maker runs.

The per-line index is sparse: a line is materialized once it holds at
least min(3, n) collinear Maker points (captured ones included), which
covers every line that can ever influence splitting or winning.  Lines
below the threshold can still be inspected through segments_on_line,
which falls back to a direct scan.
"""

import math
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import batch_rich_directions, collinear_scan
from .errors import ConfigError, IllegalMoveError, InvariantError
from .geometry import (
    MAX_COORD,
    Direction,
    GridPoint,
    LineKey,
    canonical_direction,
    line_anchor,
)
from .rational import as_fraction, ceil_mul

MAKER = "maker"
BREAKER = "breaker"

VARIANTS = ("standard", "directed", "batched", "batched-directed")

NEG_INF = float("-inf")
POS_INF = float("inf")


@dataclass(frozen=True)
class GameMode:
    """Rule set: variant, target run length n, and the rational epsilon
    used by splitting and the batched win condition."""

    variant: str = "standard"
    n: int = 5
    epsilon: Fraction = Fraction(1, 4)
    directed_marks_occupy: bool = True

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n!r}")
        eps = as_fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps < 1:
            raise ConfigError(f"epsilon must lie in (0,1), got {eps}")

    @property
    def directed(self):
        return self.variant in ("directed", "batched-directed")

    @property
    def batched(self):
        return self.variant in ("batched", "batched-directed")


class BreakerMark(tuple):
    """A Breaker claim: a point, plus a direction in directed variants."""

    __slots__ = ()

    def __new__(cls, point, direction=None):
        point = GridPoint(point[0], point[1])
        if direction is not None:
            direction = Direction(direction[0], direction[1])
        return tuple.__new__(cls, (point, direction))

    @property
    def point(self):
        return self[0]

    @property
    def direction(self):
        return self[1]

    def __repr__(self):
        return f"BreakerMark(point={self[0]!r}, direction={self[1]!r})"


@dataclass(frozen=True)
class Segment:
    """Maximal blocking-free interval of a line.

    lo and hi are the bounding blocking-Breaker params (exclusive), or
    -inf/+inf for rays.  capacity counts the integer points strictly
    between them; maker_count the Maker points among those.
    """

    line: LineKey
    lo: float
    hi: float
    capacity: float
    maker_count: int

    def contains(self, param):
        return self.lo < param < self.hi


def segment_sort_key(seg):
    """Deterministic priority order: most Maker points first."""
    return (-seg.maker_count, seg.line, seg.lo)


class _LineData:
    """Materialized line: anchor-based params of Maker points and of
    blocking Breaker marks, both kept sorted."""

    __slots__ = ("key", "ax", "ay", "maker", "blocks")

    def __init__(self, key):
        self.key = key
        self.ax, self.ay = line_anchor(key)
        self.maker = []
        self.blocks = []

    def param(self, point):
        dx = self.key.direction.dx
        if dx == 0:
            return point[1] - self.ay
        return (point[0] - self.ax) // dx


def blocks(mark, line):
    """Whether a Breaker mark blocks Maker runs on the given line."""
    (dx, dy), c = line
    px, py = mark.point
    if dy * px - dx * py != c:
        raise ValueError(f"{mark.point!r} is not on line {line!r}")
    return mark.direction is None or mark.direction == line.direction


def _mark_blocks(mark, key):
    return mark.direction is None or mark.direction == key.direction


class GameState:
    """Mutable board for one match.  Do not share between matches."""

    def __init__(self, mode):
        if not isinstance(mode, GameMode):
            raise ConfigError("new_game expects a GameMode")
        self.mode = mode
        self.t = 0
        self.maker = set()
        self.breaker = set()
        self.captured = set()
        self.index = {}
        self._threshold = min(3, mode.n)
        self._xs = np.zeros(64, np.int64)
        self._ys = np.zeros(64, np.int64)
        self._npts = 0
        self._bxs = np.zeros(64, np.int64)
        self._bys = np.zeros(64, np.int64)
        self._bmarks = []
        self._bpoints = set()
        self._marks_at = {}
        self._la = np.zeros(32, np.int64)
        self._lb = np.zeros(32, np.int64)
        self._lc = np.zeros(32, np.int64)
        self._line_keys = []
        self._nlines = 0

    # -- input normalization -------------------------------------------

    @staticmethod
    def _as_point(obj):
        try:
            x, y = obj
            x = int(x)
            y = int(y)
        except (TypeError, ValueError):
            raise IllegalMoveError(f"not a lattice point: {obj!r}") from None
        if abs(x) > MAX_COORD or abs(y) > MAX_COORD:
            raise IllegalMoveError(
                f"coordinate out of range (|coord| <= {MAX_COORD}): {(x, y)!r}",
                point=(x, y),
            )
        return GridPoint(x, y)

    def _as_mark(self, obj):
        if isinstance(obj, BreakerMark):
            point, direction = obj.point, obj.direction
        elif (
            isinstance(obj, tuple)
            and len(obj) == 2
            and isinstance(obj[0], (tuple, GridPoint))
        ):
            point, direction = obj
        else:
            point, direction = obj, None
        point = self._as_point(point)
        if self.mode.directed:
            if direction is None:
                raise IllegalMoveError(
                    f"directed variant requires a direction for mark at {point!r}",
                    point=point,
                )
            direction = canonical_direction(direction[0], direction[1])
        elif direction is not None:
            raise IllegalMoveError(
                f"variant {self.mode.variant!r} takes undirected marks, got "
                f"direction {tuple(direction)!r} at {point!r}",
                point=point,
            )
        return BreakerMark(point, direction)

    # -- growing buffers ------------------------------------------------

    def _push_maker_point(self, p):
        if self._npts == self._xs.shape[0]:
            self._xs = np.concatenate([self._xs, np.zeros_like(self._xs)])
            self._ys = np.concatenate([self._ys, np.zeros_like(self._ys)])
        self._xs[self._npts] = p.x
        self._ys[self._npts] = p.y
        self._npts += 1

    def _push_breaker_point(self, p):
        k = len(self._bmarks)
        if k == self._bxs.shape[0]:
            self._bxs = np.concatenate([self._bxs, np.zeros_like(self._bxs)])
            self._bys = np.concatenate([self._bys, np.zeros_like(self._bys)])
        self._bxs[k] = p.x
        self._bys[k] = p.y

    def _push_line(self, key):
        if self._nlines == self._la.shape[0]:
            self._la = np.concatenate([self._la, np.zeros_like(self._la)])
            self._lb = np.concatenate([self._lb, np.zeros_like(self._lb)])
            self._lc = np.concatenate([self._lc, np.zeros_like(self._lc)])
        (a, b), c = key
        self._la[self._nlines] = a
        self._lb[self._nlines] = b
        self._lc[self._nlines] = c
        self._line_keys.append(key)
        self._nlines += 1

    def _lines_through(self, p):
        n = self._nlines
        if n == 0:
            return ()
        hit = (
            self._lb[:n] * p.x - self._la[:n] * p.y == self._lc[:n]
        ).nonzero()[0]
        return [self._line_keys[i] for i in hit]

    # -- capture bookkeeping --------------------------------------------

    def _blocking_mark_at(self, point, key):
        for d in self._marks_at.get(point, ()):
            if d is None or d == key.direction:
                return True
        return False

    # -- materialization --------------------------------------------------

    def _materialize(self, key):
        data = _LineData(key)
        data.maker, data.blocks = self._ephemeral_line(key)
        self.index[key] = data
        self._push_line(key)

    # -- moves ------------------------------------------------------------

    def _apply_maker(self, moves):
        pts = []
        seen = set()
        for mv in moves:
            p = self._as_point(mv)
            if p in seen:
                raise IllegalMoveError(
                    f"duplicate point within one move: {p!r}", point=p
                )
            seen.add(p)
            if p in self.maker:
                raise IllegalMoveError(
                    f"point already claimed by Maker: {p!r}", point=p
                )
            if p in self._bpoints:
                if not self.mode.directed or self.mode.directed_marks_occupy:
                    raise IllegalMoveError(
                        f"point already claimed by Breaker: {p!r}", point=p
                    )
            pts.append(p)
        if not pts:
            return
        batch_start = self._npts
        for p in pts:
            self.maker.add(p)
            self._push_maker_point(p)
        for p in pts:
            for key in self._lines_through(p):
                data = self.index[key]
                if self.mode.batched and self._blocking_mark_at(p, key):
                    continue
                insort(data.maker, data.param(p))
        if self._npts >= self._threshold:
            rows = batch_rich_directions(
                self._xs[: self._npts],
                self._ys[: self._npts],
                batch_start,
                self._threshold,
            )
            for idx, a, b in rows:
                a = int(a)
                b = int(b)
                x = int(self._xs[idx])
                y = int(self._ys[idx])
                key = LineKey(Direction(a, b), b * x - a * y)
                if key not in self.index:
                    self._materialize(key)

    def _apply_breaker(self, moves):
        marks = []
        seen = set()
        for mv in moves:
            mark = self._as_mark(mv)
            if mark in seen:
                raise IllegalMoveError(
                    f"duplicate mark within one move: {mark!r}", point=mark.point
                )
            seen.add(mark)
            if mark in self.breaker:
                raise IllegalMoveError(
                    f"mark already placed: {mark!r}", point=mark.point
                )
            if not self.mode.directed and mark.point in self._bpoints:
                raise IllegalMoveError(
                    f"point already claimed by Breaker: {mark.point!r}",
                    point=mark.point,
                )
            if mark.point in self.maker and not self.mode.batched:
                raise IllegalMoveError(
                    f"point already claimed by Maker: {mark.point!r}",
                    point=mark.point,
                )
            marks.append(mark)
        for mark in marks:
            p = mark.point
            self.breaker.add(mark)
            self._push_breaker_point(p)
            self._bmarks.append(mark)
            self._bpoints.add(p)
            self._marks_at.setdefault(p, []).append(mark.direction)
            if self.mode.batched and p in self.maker:
                self.captured.add(p)
            for key in self._lines_through(p):
                if not _mark_blocks(mark, key):
                    continue
                data = self.index[key]
                tp = data.param(p)
                insort(data.blocks, tp)
                if self.mode.batched and p in self.maker:
                    i = bisect_left(data.maker, tp)
                    if i < len(data.maker) and data.maker[i] == tp:
                        del data.maker[i]

    # -- queries ----------------------------------------------------------

    def _segments_from(self, key, maker_params, block_params):
        bounds = [NEG_INF] + [float(b) for b in block_params] + [POS_INF]
        segs = []
        for lo, hi in zip(bounds, bounds[1:]):
            if math.isinf(lo) or math.isinf(hi):
                cap = POS_INF
            else:
                cap = int(hi) - int(lo) - 1
                if cap <= 0:
                    continue
            i = bisect_right(maker_params, lo) if not math.isinf(lo) else 0
            j = (
                bisect_left(maker_params, hi)
                if not math.isinf(hi)
                else len(maker_params)
            )
            segs.append(
                Segment(
                    line=key,
                    lo=lo,
                    hi=hi,
                    capacity=cap,
                    maker_count=j - i,
                )
            )
        return segs

    def _ephemeral_line(self, key):
        data = _LineData(key)
        (a, b), c = key
        n = self._npts
        params = []
        if n:
            sel = (b * self._xs[:n] - a * self._ys[:n] == c).nonzero()[0]
            for i in sel:
                p = GridPoint(int(self._xs[i]), int(self._ys[i]))
                if self.mode.batched and self._blocking_mark_at(p, key):
                    continue
                params.append(data.param(p))
        params.sort()
        bl = []
        k = len(self._bmarks)
        if k:
            hit = (b * self._bxs[:k] - a * self._bys[:k] == c).nonzero()[0]
            for i in hit:
                mark = self._bmarks[i]
                if _mark_blocks(mark, key):
                    bl.append(data.param(mark.point))
        bl.sort()
        return params, bl

    def segments_on_line(self, key):
        data = self.index.get(key)
        if data is not None:
            return self._segments_from(key, data.maker, data.blocks)
        params, bl = self._ephemeral_line(key)
        return self._segments_from(key, params, bl)

    def line_params(self, key):
        """(maker params, blocking params) of a line, sorted; works for
        unmaterialized lines too."""
        data = self.index.get(key)
        if data is not None:
            return list(data.maker), list(data.blocks)
        return self._ephemeral_line(key)

    def is_unclaimed(self, point):
        """True when neither player has any claim at the point."""
        p = GridPoint(point[0], point[1])
        return p not in self.maker and p not in self._bpoints

    def has_blocking_mark(self, point, line):
        """True when some Breaker mark at the point blocks the line."""
        return self._blocking_mark_at(GridPoint(point[0], point[1]), line)

    def active_segments(self):
        n = self.mode.n
        out = []
        for key in sorted(self.index):
            data = self.index[key]
            if not data.maker:
                continue
            for seg in self._segments_from(key, data.maker, data.blocks):
                if seg.capacity >= n and seg.maker_count >= 1:
                    out.append(seg)
        return out

    def winning_segments(self):
        n = self.mode.n
        out = []
        for key in sorted(self.index):
            data = self.index[key]
            if len(data.maker) < n:
                continue
            for seg in self._segments_from(key, data.maker, data.blocks):
                if seg.maker_count >= n:
                    out.append(seg)
        return out

    def maker_has_won(self):
        return bool(self.winning_segments())


def new_game(mode=None, **kwargs):
    """Fresh GameState; pass a GameMode or its fields as keywords."""
    if mode is None:
        mode = GameMode(**kwargs)
    elif kwargs:
        raise ConfigError("pass either a GameMode or keyword fields, not both")
    return GameState(mode)


def apply_move(state, player, moves):
    """Apply one player's move (a list of points or marks) in place.

    Every claim is validated before anything is applied, so an illegal
    move leaves the state untouched.  Returns the state.
    """
    if player == MAKER:
        state._apply_maker(moves)
    elif player == BREAKER:
        state._apply_breaker(moves)
    else:
        raise ConfigError(f"unknown player {player!r}")
    return state


def segments_on_line(state, line):
    """Maximal blocking-free intervals of the line, ordered by lo."""
    return state.segments_on_line(line)


def active_segments(state):
    """Segments with capacity >= n and at least one Maker point, over
    all materialized lines, in deterministic (line, lo) order."""
    return state.active_segments()


def winning_segments(state):
    """Segments holding >= n Maker points; Maker has won iff nonempty."""
    return state.winning_segments()


def rebuild_index(state):
    """Recompute the line index from the raw point sets.

    Returns {LineKey: (maker_params, block_params)} using the same
    materialization rule as the incremental engine (>= min(3, n)
    collinear Maker points, captured ones counted for the trigger).
    """
    threshold = state._threshold
    pts = sorted(state.maker)
    keys = []
    if len(pts) >= threshold:
        if threshold >= 3:
            arr = np.array(pts, np.int64)
            rows = collinear_scan(arr[:, 0], arr[:, 1], threshold)
            keys = [
                LineKey(Direction(int(a), int(b)), int(c))
                for a, b, c, _ in rows
            ]
        else:
            from .geometry import line_key

            seen = set()
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    seen.add(line_key(pts[i], pts[j]))
            keys = sorted(seen)
    out = {}
    for key in keys:
        data = _LineData(key)
        params = []
        for p in pts:
            (a, b), c = key
            if b * p[0] - a * p[1] != c:
                continue
            if state.mode.batched and state._blocking_mark_at(p, key):
                continue
            params.append(data.param(p))
        params.sort()
        bl = []
        for mark in state.breaker:
            (a, b), c = key
            px, py = mark.point
            if b * px - a * py != c:
                continue
            if _mark_blocks(mark, key):
                bl.append(data.param(mark.point))
        bl.sort()
        out[key] = (params, bl)
    return out


def audit_index(state):
    """Raise InvariantError unless the incremental index matches a
    from-scratch rebuild.  Returns True on success."""
    rebuilt = rebuild_index(state)
    have = {key: (data.maker, data.blocks) for key, data in state.index.items()}
    if set(have) != set(rebuilt):
        missing = set(rebuilt) - set(have)
        extra = set(have) - set(rebuilt)
        raise InvariantError(
            f"index key mismatch: missing={sorted(missing)!r} "
            f"extra={sorted(extra)!r}"
        )
    for key, pair in rebuilt.items():
        if have[key] != pair:
            raise InvariantError(
                f"index data mismatch on {key!r}: have {have[key]!r}, "
                f"rebuilt {pair!r}"
            )
    return True


def max_breaker_free_counts(points, marks, k, n=None):
    """Static analysis for batched sets: for every line holding >= k of
    the given Maker points, the largest number of them lying in one
    stretch free of blocking marks (capture applied).  Returns
    {LineKey: count}.  Needs k >= 3.

    With n given, only active stretches count: rays always qualify,
    bounded stretches need capacity (integer points between the
    enclosing marks) of at least n.
    """
    if k < 3:
        raise ValueError("max_breaker_free_counts requires k >= 3")
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) < k:
        return {}
    arr = np.array(pts, np.int64)
    xs = arr[:, 0]
    ys = arr[:, 1]
    rows = collinear_scan(xs, ys, k)
    if rows.shape[0] == 0:
        return {}
    norm_marks = []
    for m in marks:
        if isinstance(m, BreakerMark):
            norm_marks.append((m.point, m.direction))
        elif (
            isinstance(m, tuple)
            and len(m) == 2
            and isinstance(m[0], (tuple, GridPoint))
        ):
            norm_marks.append((GridPoint(*m[0]), Direction(*m[1])))
        else:
            norm_marks.append((GridPoint(m[0], m[1]), None))
    undirected = [p for p, d in norm_marks if d is None]
    by_dir = {}
    for p, d in norm_marks:
        if d is not None:
            by_dir.setdefault(d, []).append(p)
    u_arr = np.array(undirected, np.int64) if undirected else None
    all_arr = (
        np.array([p for p, _ in norm_marks], np.int64) if norm_marks else None
    )

    by_direction = {}
    for a, b, c, _count in rows:
        by_direction.setdefault((int(a), int(b)), []).append(int(c))

    out = {}
    for (a, b), cs in by_direction.items():
        cvals = b * xs - a * ys
        # Along-line position in lattice steps (points on one line share
        # x mod a, so floor division is exact).
        mparam = ys if a == 0 else xs if a == 1 else xs // a
        order = np.argsort(cvals, kind="stable")
        csorted = cvals[order]
        applicable = []
        if u_arr is not None:
            applicable.append(u_arr)
        d_pts = by_dir.get(Direction(a, b))
        if d_pts:
            applicable.append(np.array(d_pts, np.int64))
        if applicable:
            bpts = np.concatenate(applicable)
            bvals = b * bpts[:, 0] - a * bpts[:, 1]
            bx = bpts[:, 0]
            bparam = bpts[:, 1] if a == 0 else bx if a == 1 else bx // a
            border = np.argsort(bvals, kind="stable")
            bvals_sorted = bvals[border]
        else:
            bvals_sorted = None
        # Capture is direction-blind: any mark sitting on a Maker point
        # deletes it, even when the mark blocks some other direction.
        if all_arr is not None:
            avals = b * all_arr[:, 0] - a * all_arr[:, 1]
            ax = all_arr[:, 0]
            aparam = all_arr[:, 1] if a == 0 else ax if a == 1 else ax // a
            aorder = np.argsort(avals, kind="stable")
            avals_sorted = avals[aorder]
        else:
            avals_sorted = None
        for c in cs:
            lo = np.searchsorted(csorted, c, "left")
            hi = np.searchsorted(csorted, c, "right")
            mk = np.sort(mparam[order[lo:hi]])
            if avals_sorted is not None:
                alo = np.searchsorted(avals_sorted, c, "left")
                ahi = np.searchsorted(avals_sorted, c, "right")
                cap = np.unique(aparam[aorder[alo:ahi]])
                if cap.size:
                    mk = mk[~np.isin(mk, cap)]
            if bvals_sorted is not None:
                blo = np.searchsorted(bvals_sorted, c, "left")
                bhi = np.searchsorted(bvals_sorted, c, "right")
                bl = np.unique(bparam[border[blo:bhi]])
            else:
                bl = np.empty(0, np.int64)
            if bl.size:
                pos = np.searchsorted(mk, bl)
                edges = np.concatenate([[0], pos, [mk.size]])
                counts = np.diff(edges)
                if n is None:
                    best = int(np.max(counts))
                else:
                    # Rays (first/last stretch) have infinite capacity;
                    # interior stretch capacity is the gap between marks.
                    best = int(max(counts[0], counts[-1]))
                    for j in range(1, bl.size):
                        if bl[j] - bl[j - 1] - 1 >= n:
                            best = max(best, int(counts[j]))
            else:
                best = int(mk.size)
            key = LineKey(Direction(a, b), c)
            out[key] = best
    return out

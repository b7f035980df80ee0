"""Strategy library: turn-based Maker/Breaker players and one-shot
batched set builders.

Turn-based strategies are classes with a ``play(ctx)`` method returning
the moves for the current turn (points for Maker, points or
(point, direction) marks for Breaker).  A fresh instance is used per
match, so instances may keep state across turns.  Batched builders are
plain functions returning a full point/mark set up front.
"""

import heapq
import math
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from fractions import Fraction

from . import geometry
from .board import (
    BREAKER,
    MAKER,
    NEG_INF,
    POS_INF,
    BreakerMark,
    max_breaker_free_counts,
    segment_sort_key,
)
from .errors import BudgetExceededError, ConfigError, SamplingFailureError
from .geometry import MAX_COORD, Direction, GridPoint, LineKey
from .rational import as_fraction, ceil_mul, floor_mul, pow_ceil

_UP = Direction(0, 1)


@dataclass
class StrategyContext:
    """Everything a turn-based strategy may consult when choosing moves.

    budget is this turn's allowance; rng is a per-match, per-role
    random.Random; scratch is a dict private to the strategy instance.
    """

    state: object
    budget: int
    n: int
    epsilon: Fraction
    alpha: Fraction
    rng: object = None
    scratch: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# interval splitting


def _split_params(maker_params, e, lo, hi, is_free, is_cut):
    """Choose cut params so every cut-free stretch of the interval
    (lo, hi) keeps fewer than e of the given maker params.

    maker_params must be sorted and lie strictly inside (lo, hi).
    is_free(t) says whether a cut may be placed at param t; is_cut(t)
    whether a cut already stands there (costing nothing).  Occupied
    params are bracketed by the nearest playable point on each side,
    walks stopping at the interval bounds.  Returns the new cut params
    in play order; at most 2 per e-1 maker params.
    """
    out = []
    placed = set()

    def standing(t):
        return t in placed or is_cut(t)

    def free(t):
        return t not in placed and is_free(t)

    mk = maker_params
    m = len(mk)
    i = 0
    while m - i >= e:
        x = mk[i + e - 2] + 1
        if standing(x):
            cut = x
        elif free(x):
            out.append(x)
            placed.add(x)
            cut = x
        else:
            t = x - 1
            while t > lo and not standing(t) and not free(t):
                t -= 1
            if t > lo and not standing(t):
                out.append(t)
                placed.add(t)
            cut = hi
            t = x + 1
            while t < hi:
                if standing(t):
                    cut = t
                    break
                if free(t):
                    out.append(t)
                    placed.add(t)
                    cut = t
                    break
                t += 1
        i = bisect_right(mk, cut, i)
    return out


def eps_split(state, segment, epsilon=None, n=None):
    """Points that cut one active segment so no remaining stretch holds
    ceil(epsilon*n) or more Maker points.

    Plays only unclaimed (for the segment's line: non-blocked) points;
    occupied cells are bracketed by the nearest playable point on each
    side.  Costs at most 2*ceil(count/(e-1)) points.  Raises
    ValueError if the segment already has n Maker points, ConfigError
    if ceil(epsilon*n) < 2 (single Maker points can never be screened
    off).
    """
    mode = state.mode
    if n is None:
        n = mode.n
    epsilon = mode.epsilon if epsilon is None else as_fraction(epsilon)
    e = ceil_mul(epsilon, n)
    if e < 2:
        raise ConfigError(
            f"ceil(epsilon*n) = {e} < 2: single Maker points can never be cut off"
        )
    if segment.maker_count >= n:
        raise ValueError("segment already holds n Maker points; nothing to split")
    key = segment.line
    mk_all, _ = state.line_params(key)
    mk = [t for t in mk_all if segment.lo < t < segment.hi]
    anchor = geometry.line_anchor(key)
    dx, dy = key.direction
    maker = state.maker

    def pt(t):
        return GridPoint(anchor.x + t * dx, anchor.y + t * dy)

    def is_free(t):
        p = pt(t)
        return p not in maker and not state.has_blocking_mark(p, key)

    params = _split_params(mk, e, segment.lo, segment.hi, is_free, lambda t: False)
    return [pt(t) for t in params]


# ---------------------------------------------------------------------------
# turn-based Breaker strategies


class SplitTopBreaker:
    """Splits the most Maker-laden active segments each turn.

    Spends the turn budget on the top max(1, floor(epsilon*budget/4))
    segments by Maker count, cutting each so no stretch keeps
    ceil((epsilon/2)*n) Maker points (clamped to at least 2, the
    tightest achievable split).  A point shared by two target lines is
    played once; in directed variants marks carry the split line's
    direction.
    """

    name = "split-top"
    role = BREAKER

    def __init__(self, epsilon=None):
        self.epsilon = None if epsilon is None else as_fraction(epsilon)

    def params(self):
        return {} if self.epsilon is None else {"epsilon": str(self.epsilon)}

    def play(self, ctx):
        budget = ctx.budget
        if budget < 1:
            return []
        eps = self.epsilon if self.epsilon is not None else as_fraction(ctx.epsilon)
        bprime = max(1, floor_mul(eps / 4, budget))
        half = eps / 2
        if ceil_mul(half, ctx.n) < 2:
            half = Fraction(2, ctx.n)
        st = ctx.state
        segs = [s for s in st.active_segments() if s.maker_count < ctx.n]
        segs.sort(key=segment_sort_key)
        directed = st.mode.directed
        out = []
        seen = set()
        for seg in segs[:bprime]:
            for p in eps_split(st, seg, half, ctx.n):
                move = BreakerMark(p, seg.line.direction) if directed else p
                if move in seen:
                    continue
                if len(out) >= budget:
                    return out
                seen.add(move)
                out.append(move)
        return out


class RandomBreaker:
    """Uniform random unclaimed points in the Maker bounding box
    inflated by n on every side (random directions when directed)."""

    name = "random"
    role = BREAKER

    _DIRS = (
        Direction(1, 0),
        Direction(0, 1),
        Direction(1, 1),
        Direction(1, -1),
        Direction(2, 1),
        Direction(1, 2),
        Direction(2, -1),
        Direction(1, -2),
    )

    def params(self):
        return {}

    def play(self, ctx):
        st = ctx.state
        if ctx.budget < 1 or not st.maker:
            return []
        n = ctx.n
        xs = [p.x for p in st.maker]
        ys = [p.y for p in st.maker]
        x0, x1 = min(xs) - n, max(xs) + n
        y0, y1 = min(ys) - n, max(ys) + n
        rng = ctx.rng
        directed = st.mode.directed
        out = []
        seen = set()
        attempts = 200 * ctx.budget + 200
        while len(out) < ctx.budget and attempts > 0:
            attempts -= 1
            p = GridPoint(rng.randint(x0, x1), rng.randint(y0, y1))
            if directed:
                if p in st.maker:
                    continue
                move = BreakerMark(p, self._DIRS[rng.randrange(len(self._DIRS))])
                if move in seen or move in st.breaker:
                    continue
            else:
                move = p
                if move in seen or not st.is_unclaimed(p):
                    continue
            seen.add(move)
            out.append(move)
        return out


class IdleBreaker:
    """Never plays; a pure baseline opponent."""

    name = "idle"
    role = BREAKER

    def params(self):
        return {}

    def play(self, ctx):
        return []


# ---------------------------------------------------------------------------
# turn-based Maker strategies


class GreedyLineMaker:
    """Extends its strongest active segment with unclaimed points.

    Walks upward from the highest Maker param in the segment, then
    downward from the lowest, skipping occupied cells; when a segment
    offers no room the budget spills to the next-best one.  Remembers
    the last line it worked (the scratch line) so play continues there
    while the board holds no indexed segment, e.g. in the opening
    moves.  On an empty board it starts on the x-axis at the origin.
    """

    name = "greedy"
    role = MAKER

    def __init__(self):
        self._line = None

    def params(self):
        return {}

    def play(self, ctx):
        st = ctx.state
        budget = ctx.budget
        if budget < 1:
            return []
        out = []
        pending = set()

        def extend(seg):
            key = seg.line
            anchor = geometry.line_anchor(key)
            dx, dy = key.direction
            mk_all, _ = st.line_params(key)
            inside = [t for t in mk_all if seg.lo < t < seg.hi]
            if inside:
                up0, down0 = inside[-1] + 1, inside[0] - 1
            else:
                base = 0 if seg.lo == NEG_INF else int(seg.lo) + 1
                up0, down0 = base, base - 1
            for t, step, bound in ((up0, 1, seg.hi), (down0, -1, seg.lo)):
                while (t < bound) if step > 0 else (t > bound):
                    if len(out) >= budget:
                        return True
                    p = GridPoint(anchor.x + t * dx, anchor.y + t * dy)
                    if p not in pending and st.is_unclaimed(p):
                        out.append(p)
                        pending.add(p)
                    t += step
            return len(out) >= budget

        segs = sorted(st.active_segments(), key=segment_sort_key)
        if segs:
            self._line = segs[0].line
        for seg in segs:
            if extend(seg):
                return out
        if self._line is None:
            self._line = LineKey(Direction(1, 0), 0)
        for seg in sorted(st.segments_on_line(self._line), key=segment_sort_key):
            if extend(seg):
                return out
        # Scratch line is dead: move to an empty row above every claim.
        top = 0
        for p in st.maker:
            top = max(top, abs(p.x), abs(p.y))
        for m in st.breaker:
            top = max(top, abs(m.point.x), abs(m.point.y))
        for p in pending:
            top = max(top, abs(p.x), abs(p.y))
        self._line = LineKey(Direction(1, 0), -(top + 1))
        for seg in st.segments_on_line(self._line):
            if extend(seg):
                return out
        return out


@dataclass
class ParallelLinesPlan:
    """Bookkeeping for the parallel-lines Maker window.

    The window [t0, t1) is split into rounds of lengths r/2, r/4, ...,
    1 (bounds[i] is the first turn after round i); the leftover turn
    t1 - 1 pads the window.  live holds the still-alive column
    indices; counts/cursors the per-column points placed and the next
    y offset to try; stride scales the column bases (column i starts
    at y = stride * i * i); cur is the round-robin position and phase
    the number of kill rounds already applied.
    """

    t0: int
    t1: int
    r: int
    rounds: int
    bplan: int
    mhat: int
    x0: int
    width: int
    stride: int
    bounds: list
    live: list
    counts: list
    cursors: list
    cur: int = 0
    phase: int = 0


class ParallelLinesMaker:
    """Builds ceil(n/2)-point turns across many vertical lines, then
    finishes one surviving line in a single burst.

    Assumes the Maker allowance is ceil(t**alpha) per turn.  Budgets
    are ceilings, not quotas, so before the window [t0, t1) opens it
    plays nothing at all.  Inside the window it spreads ceil(n/2)
    points per turn round-robin over r*bplan + 1 fresh vertical lines,
    halving the live set each round: columns the Breaker has touched
    die first, then the highest-keyed excess beyond the target count.
    Against any Breaker playing at most bplan = ceil(C*ln n) marks per
    turn some untouched column finishes the window with ceil(epsilon*n)
    points, and ceil((1-epsilon)*n) more points at t1 win on it.  If
    no column qualifies (the Breaker overspent that bound) play falls
    back to the greedy line strategy.

    Column bases are staggered convexly (column i starts at
    y = (n+1)*i*i) and window-phase columns stay far shorter than the
    base gaps, so a line that is not a plan column meets at most two
    window points: the board index stays a list of columns instead of
    drowning in accidental three-point lines, and no shared row or
    diagonal can end the match before the window mechanics play out.
    """

    name = "parallel-lines"
    role = MAKER

    def __init__(self, C="1.44", epsilon=None):
        self.C = as_fraction(C)
        self.epsilon = None if epsilon is None else as_fraction(epsilon)
        self.plan = None
        self._window = None
        self._fallback = None

    def params(self):
        out = {"C": str(self.C)}
        if self.epsilon is not None:
            out["epsilon"] = str(self.epsilon)
        return out

    def _window_params(self, ctx):
        eps = self.epsilon if self.epsilon is not None else as_fraction(ctx.epsilon)
        n = ctx.n
        alpha = as_fraction(ctx.alpha)
        if not 0 < eps < 1:
            raise ConfigError(f"epsilon must be in (0, 1), got {eps}")

        def m(t):
            return pow_ceil(t, alpha)

        target = (1 - eps) * n
        hi = 1
        while m(hi) <= target:
            hi *= 2
        lo = max(1, hi // 2)
        while lo < hi:
            mid = (lo + hi) // 2
            if m(mid) > target:
                hi = mid
            else:
                lo = mid + 1
        t1 = hi
        r = 0
        cand = 1
        while t1 - cand >= 1 and 2 * m(t1 - cand) > n:
            r = cand
            cand *= 2
        if r < 2:
            raise ConfigError(
                f"no room for a doubling window before t1={t1}; need m(t1-2) > n/2"
            )
        t0 = t1 - r
        bplan = math.ceil(float(self.C) * math.log(n))
        rounds = r.bit_length() - 1
        bounds = [t0]
        acc = t0
        for i in range(1, rounds + 1):
            acc += r >> i
            bounds.append(acc)
        mhat = (n + 1) // 2
        return eps, t0, t1, r, rounds, bplan, mhat, bounds

    def _touched(self, ctx, plan):
        """Column indices holding a blocking Breaker mark."""
        hit = set()
        for m in ctx.state.breaker:
            if m.direction is not None and m.direction != _UP:
                continue
            if plan.x0 <= m.point.x < plan.x0 + plan.width:
                hit.add(m.point.x - plan.x0)
        return hit

    def _build_plan(self, ctx):
        eps, t0, t1, r, rounds, bplan, mhat, bounds = self._window
        st = ctx.state
        extent = 0
        for p in st.maker:
            extent = max(extent, abs(p.x), abs(p.y))
        for m in st.breaker:
            extent = max(extent, abs(m.point.x), abs(m.point.y))
        width = r * bplan + 1
        stride = ctx.n + 1
        top = extent + 1 + stride * (width - 1) ** 2 + 2 * ctx.n
        if top > MAX_COORD:
            raise ConfigError(
                f"window plan needs coordinates up to {top}, beyond the "
                f"board range {MAX_COORD}"
            )
        return ParallelLinesPlan(
            t0=t0,
            t1=t1,
            r=r,
            rounds=rounds,
            bplan=bplan,
            mhat=mhat,
            x0=extent + 1,
            width=width,
            stride=stride,
            bounds=bounds,
            live=list(range(width)),
            counts=[0] * width,
            cursors=[0] * width,
        )

    def _place_on_column(self, ctx, plan, i, count, pending):
        st = ctx.state
        x = plan.x0 + i
        base = plan.stride * i * i
        placed = []
        while len(placed) < count:
            p = GridPoint(x, base + plan.cursors[i])
            plan.cursors[i] += 1
            if p in pending or not st.is_unclaimed(p):
                continue
            placed.append(p)
            pending.add(p)
            plan.counts[i] += 1
        return placed

    def _kill_round(self, ctx, plan):
        plan.phase += 1
        touched = self._touched(ctx, plan)
        plan.live = [i for i in plan.live if i not in touched]
        target = (plan.r * plan.bplan >> plan.phase) + 1
        while len(plan.live) > target:
            plan.live.pop()

    def play(self, ctx):
        if self._fallback is not None:
            return self._fallback.play(ctx)
        if ctx.budget < 1:
            return []
        if self._window is None:
            self._window = self._window_params(ctx)
        t0, t1 = self._window[1], self._window[2]
        t = ctx.state.t
        if t < t0:
            return []
        if t > t1 or (t == t1 and self.plan is None):
            self._fallback = GreedyLineMaker()
            return self._fallback.play(ctx)
        if self.plan is None:
            self.plan = self._build_plan(ctx)
        plan = self.plan
        if t == t1:
            return self._completion(ctx, plan)
        while plan.phase < plan.rounds and t >= plan.bounds[plan.phase + 1]:
            self._kill_round(ctx, plan)
        if not plan.live:
            self._fallback = GreedyLineMaker()
            return self._fallback.play(ctx)
        pending = set()
        out = []
        for _ in range(min(plan.mhat, ctx.budget)):
            i = plan.live[plan.cur % len(plan.live)]
            plan.cur += 1
            out.extend(self._place_on_column(ctx, plan, i, 1, pending))
        return out

    def _completion(self, ctx, plan):
        eps = self._window[0]
        n = ctx.n
        need_hold = ceil_mul(eps, n)
        touched = self._touched(ctx, plan)
        best = None
        for i in plan.live:
            if i in touched:
                continue
            if best is None or plan.counts[i] > plan.counts[best]:
                best = i
        if best is None or plan.counts[best] < need_hold:
            self._fallback = GreedyLineMaker()
            return self._fallback.play(ctx)
        burst = min(ceil_mul(1 - eps, n), ctx.budget)
        return self._place_on_column(ctx, plan, best, burst, set())


# ---------------------------------------------------------------------------
# batched set builders


def _default_horizon(n, alpha):
    """Smallest T with T**alpha >= n/2, i.e. ceil((n/2)**(1/alpha))."""
    return pow_ceil(Fraction(n, 2), 1 / as_fraction(alpha))


def _schedule_total(T, alpha):
    return sum(pow_ceil(t, alpha) for t in range(1, T + 1))


def maker_rectangle_batched(n, alpha, T=None):
    """The n-wide rectangle a budget of sum_{t<=T} ceil(t**alpha)
    Maker points fills: [0, n) x [0, h) with h = budget // n.

    T defaults to the first horizon whose per-turn allowance reaches
    n/2.  Requires a positive alpha and a budget of at least one full
    row.
    """
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise ConfigError(f"rectangle construction needs alpha > 0, got {alpha}")
    if T is None:
        T = _default_horizon(n, alpha)
    budget = _schedule_total(T, alpha)
    h = budget // n
    if h < 1:
        raise ConfigError(
            f"budget {budget} through T={T} cannot fill one row of width {n}"
        )
    return [GridPoint(x, y) for x in range(n) for y in range(h)]


def maker_grid_batched(n, alpha, T=None):
    """The largest square grid the same budget fills: [0, s) x [0, s)
    with s = isqrt(budget)."""
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise ConfigError(f"grid construction needs alpha > 0, got {alpha}")
    if T is None:
        T = _default_horizon(n, alpha)
    budget = _schedule_total(T, alpha)
    side = math.isqrt(budget)
    if side < 1:
        raise ConfigError(f"budget {budget} through T={T} cannot fill a 1x1 grid")
    return [GridPoint(x, y) for x in range(side) for y in range(side)]


def _line_params_of(key, members):
    """Anchor params of on-line points, with the anchor computed once."""
    anchor = geometry.line_anchor(key)
    dx = key.direction.dx
    if dx == 0:
        return anchor, [p.y - anchor.y for p in members]
    return anchor, [(p.x - anchor.x) // dx for p in members]


def breaker_batched_split(maker_points, epsilon, n, budget):
    """One-shot screen of a Maker set: marks cutting every line so no
    mark-free stretch keeps ceil(epsilon*n) of its points.

    Batched marks may land on Maker points (capturing them), so every
    cut goes exactly where the interval arithmetic wants it; a mark
    shared between lines is paid once.  The full requirement is
    computed before the budget check, so the BudgetExceededError
    carries the exact point count needed.  Returns sorted points.
    """
    epsilon = as_fraction(epsilon)
    e = ceil_mul(epsilon, n)
    if e < 2:
        raise ConfigError(
            f"ceil(epsilon*n) = {e} < 2: single Maker points can never be cut off"
        )
    pts = sorted({GridPoint(int(p[0]), int(p[1])) for p in maker_points})
    groups = geometry.collinear_groups(pts, max(e, 3))
    order = sorted(groups, key=lambda k: (-len(groups[k]), k))
    pending = set()
    for key in order:
        members = groups[key]
        if len(members) < e:
            continue
        anchor, params = _line_params_of(key, members)
        dx, dy = key.direction

        def pt(t):
            return GridPoint(anchor.x + t * dx, anchor.y + t * dy)

        def is_cut(t):
            return pt(t) in pending

        def is_free(t):
            return True

        new = _split_params(params, e, NEG_INF, POS_INF, is_free, is_cut)
        pending.update(pt(t) for t in new)
    if len(pending) > budget:
        raise BudgetExceededError(required=len(pending), available=budget)
    return sorted(pending)


def breaker_batched_random(maker_points, epsilon, alpha, T, rng, max_retries=100):
    """Random one-shot screen: marks each Maker point independently
    with probability min(1, 2*ln(T) / (epsilon*T**alpha)) and checks
    that (a) no mark-free stretch holds ceil(epsilon*T**alpha) Maker
    points and (b) at most (2/epsilon)*T*ln(T) marks were used.
    Resamples on failure, up to max_retries attempts, then raises
    SamplingFailureError with the per-condition failure tallies.
    """
    epsilon = as_fraction(epsilon)
    alpha = as_fraction(alpha)
    if T < 2:
        raise ConfigError(f"random screen needs T >= 2 (ln T > 0), got {T}")
    pts = sorted({GridPoint(int(p[0]), int(p[1])) for p in maker_points})
    run_thresh = pow_ceil(T, alpha, scale=epsilon)
    if run_thresh < 3:
        raise ConfigError(
            f"stretch threshold ceil(epsilon*T**alpha) = {run_thresh} < 3 "
            "is below the collinearity scan minimum"
        )
    p_mark = min(1.0, 2.0 * math.log(T) / (float(epsilon) * float(T) ** float(alpha)))
    size_cap = 2.0 * T * math.log(T) / float(epsilon)
    failed_hit = 0
    failed_size = 0
    for _ in range(max_retries):
        marks = [q for q in pts if rng.random() < p_mark]
        if len(marks) > size_cap:
            failed_size += 1
            continue
        counts = max_breaker_free_counts(pts, marks, run_thresh)
        if any(c >= run_thresh for c in counts.values()):
            failed_hit += 1
            continue
        return marks
    raise SamplingFailureError(
        f"no admissible random screen in {max_retries} attempts "
        f"({failed_hit} stretch failures, {failed_size} size failures)",
        retries=max_retries,
        failed_hit=failed_hit,
        failed_size=failed_size,
    )


def breaker_greedy_directed(maker_points, k, budget):
    """Directed one-shot marks cutting the longest mark-free runs.

    Considers every line holding at least k of the Maker points and
    repeatedly marks the middle Maker point of the currently longest
    run (ties: first such run on the lexically least line), spending
    the whole budget.  Marks carry the line's direction.
    """
    pts = sorted({GridPoint(int(p[0]), int(p[1])) for p in maker_points})
    groups = geometry.collinear_groups(pts, max(k, 3))
    keys = sorted(key for key, members in groups.items() if len(members) >= k)
    if not keys or budget < 1:
        return []
    lines = []
    for key in keys:
        anchor, params = _line_params_of(key, groups[key])
        lines.append((key, anchor, params, []))

    def longest_run(idx):
        _key, _anchor, params, cuts = lines[idx]
        bounds = [-1] + cuts + [len(params)]
        best_len = 0
        best_mid = 0
        for a, b in zip(bounds, bounds[1:]):
            if b - a - 1 > best_len:
                best_len = b - a - 1
                best_mid = (a + b) // 2
        return best_len, best_mid

    heap = [(-len(lines[i][2]), i) for i in range(len(lines))]
    heapq.heapify(heap)
    out = []
    while heap and len(out) < budget:
        neg, idx = heapq.heappop(heap)
        length, mid = longest_run(idx)
        if length <= 0:
            continue
        if -neg != length:
            heapq.heappush(heap, (-length, idx))
            continue
        key, anchor, params, cuts = lines[idx]
        insort(cuts, mid)
        dx, dy = key.direction
        t = params[mid]
        out.append(
            BreakerMark(GridPoint(anchor.x + t * dx, anchor.y + t * dy), key.direction)
        )
        heapq.heappush(heap, (-(longest_run(idx)[0]), idx))
    return out


# ---------------------------------------------------------------------------
# registries


MAKER_STRATEGIES = {
    GreedyLineMaker.name: GreedyLineMaker,
    ParallelLinesMaker.name: ParallelLinesMaker,
}

BREAKER_STRATEGIES = {
    SplitTopBreaker.name: SplitTopBreaker,
    RandomBreaker.name: RandomBreaker,
    IdleBreaker.name: IdleBreaker,
}


def _build_rectangle(*, n, alpha, T=None, **_kw):
    return maker_rectangle_batched(n, alpha, T)


def _build_grid(*, n, alpha, T=None, **_kw):
    return maker_grid_batched(n, alpha, T)


def _build_split(*, maker_points, epsilon, n, budget, **_kw):
    return breaker_batched_split(maker_points, epsilon, n, budget)


def _build_random(*, maker_points, epsilon, alpha, T, rng, max_retries=100, **_kw):
    return breaker_batched_random(maker_points, epsilon, alpha, T, rng, max_retries)


def _build_greedy_directed(*, maker_points, epsilon, n, budget, **_kw):
    return breaker_greedy_directed(maker_points, ceil_mul(epsilon, n), budget)


def _build_idle(**_kw):
    return []


BATCHED_MAKER_BUILDERS = {
    "rectangle": _build_rectangle,
    "grid": _build_grid,
}

BATCHED_BREAKER_BUILDERS = {
    "batched-split": _build_split,
    "batched-random": _build_random,
    "greedy-directed": _build_greedy_directed,
    "idle": _build_idle,
}

"""Strategy contracts: splitting marks, window planning, batched set
builders, and budget discipline."""

import math
import random
from fractions import Fraction

import pytest

import oracles
from ninarow.board import (
    BREAKER,
    GameState,
    MAKER,
    apply_move,
    max_breaker_free_counts,
)
from ninarow.errors import BudgetExceededError, ConfigError, SamplingFailureError
from ninarow.geometry import GridPoint, line_key, line_param
from ninarow.harness import (
    GameMode,
    StrategyContext,
    parse_strategy,
    parse_schedule,
    run_match,
)
from ninarow.strategies import (
    BATCHED_BREAKER_BUILDERS,
    BATCHED_MAKER_BUILDERS,
    GreedyLineMaker,
    ParallelLinesMaker,
    SplitTopBreaker,
    eps_split,
)

MAKER_ROLE, BREAKER_ROLE = "maker", "breaker"


# ---------------------------------------------------------------------------
# eps_split


def _line_state(rng, n, count):
    """A state with `count` Maker points on one random line, plus noise."""
    st = GameState(GameMode("standard", n=n))
    dx = rng.randint(-3, 3)
    dy = rng.randint(-3, 3)
    if dx == 0 and dy == 0:
        dx = 1
    x0, y0 = rng.randint(-20, 20), rng.randint(-20, 20)
    params = rng.sample(range(-40, 40), count)
    pts = [(x0 + t * dx, y0 + t * dy) for t in sorted(params)]
    apply_move(st, MAKER, pts)
    key = line_key(GridPoint(*pts[0]), GridPoint(*pts[1]))
    return st, key


def test_eps_split_kills_every_live_stretch():
    rng = random.Random(401)
    for trial in range(150):
        n = rng.randint(8, 60)
        epsilon = Fraction(rng.randint(1, 3), rng.choice((4, 5, 8)))
        e = math.ceil(epsilon * n)
        if e < 2 or e > n - 1:
            continue
        # a splittable segment holds fewer than n points (n would be a win)
        count = rng.randint(e, n - 1)
        st, key = _line_state(rng, n, count)
        seg = max(st.segments_on_line(key), key=lambda s: s.maker_count)
        marks = eps_split(st, seg, epsilon=epsilon, n=n)
        assert len(marks) <= 2 * math.ceil(count / (e - 1)), (trial, n, epsilon, count)
        # marks are legal: unclaimed, on the line, inside the open segment
        for q in marks:
            assert st.is_unclaimed(q), trial
            assert key.direction.dy * q.x - key.direction.dx * q.y == key.offset
            assert seg.lo < line_param(key, q) < seg.hi
        apply_move(st, BREAKER, marks)
        for sub in st.segments_on_line(key):
            assert sub.maker_count < e or sub.capacity < n, (
                trial, n, epsilon, count, sub,
            )


def test_eps_split_on_already_quiet_segment_is_cheap():
    st = GameState(GameMode("standard", n=30))
    apply_move(st, MAKER, [(0, 0), (1, 0)])
    seg = st.segments_on_line(line_key(GridPoint(0, 0), GridPoint(1, 0)))[0]
    marks = eps_split(st, seg, epsilon=Fraction(1, 4), n=30)
    # 2 points < ceil(30/4) = 8: nothing to cut
    assert marks == []


# ---------------------------------------------------------------------------
# split-top breaker


def test_split_top_respects_budget_and_hits_the_top_line():
    rng = random.Random(402)
    st = GameState(GameMode("standard", n=10))
    apply_move(st, MAKER, [(x, 0) for x in range(8)])       # 8 on a row
    apply_move(st, MAKER, [(x, x + 50) for x in range(4)])  # 4 on a diagonal
    ctx = StrategyContext(
        state=st, budget=12, n=10, epsilon=Fraction(1, 4), alpha=Fraction(1, 1),
        rng=rng,
    )
    breaker = SplitTopBreaker()
    marks = list(breaker.play(ctx))
    assert 0 < len(marks) <= ctx.budget
    top = line_key(GridPoint(0, 0), GridPoint(1, 0))
    on_top = [q for q in marks if q.y == 0]
    assert on_top, "the richest line must be split first"
    apply_move(st, BREAKER, marks)
    e = math.ceil(Fraction(1, 4) * 10)
    for sub in st.segments_on_line(top):
        assert sub.maker_count < e or sub.capacity < 10


def test_split_top_stays_idle_with_nothing_active():
    st = GameState(GameMode("standard", n=10))
    apply_move(st, MAKER, [(0, 0), (7, 13)])
    ctx = StrategyContext(
        state=st, budget=5, n=10, epsilon=Fraction(1, 4), alpha=Fraction(1, 1),
        rng=random.Random(0),
    )
    assert list(SplitTopBreaker().play(ctx)) == []


# ---------------------------------------------------------------------------
# greedy maker


def test_greedy_wins_immediately_once_budget_reaches_n():
    res, tr = run_match(
        GameMode("standard", n=4), 4,
        parse_schedule("power:alpha=1,c=1"), parse_schedule("zero"),
        parse_strategy("greedy", MAKER_ROLE), parse_strategy("idle", BREAKER_ROLE),
        seed=7,
    )
    assert res.outcome == "maker-win"
    assert res.tau == 3 and res.m_tau == 3  # 1+2 points, then 3 finish a row
    for rec in tr.moves:
        if rec.player == "maker":
            assert len(rec.moves) <= rec.t


def test_greedy_extends_its_strongest_stretch():
    st = GameState(GameMode("standard", n=12))
    apply_move(st, MAKER, [(x, 0) for x in range(6)])
    apply_move(st, MAKER, [(0, y) for y in range(2, 5)])
    ctx = StrategyContext(
        state=st, budget=3, n=12, epsilon=Fraction(1, 4), alpha=Fraction(1, 1),
        rng=random.Random(1),
    )
    pts = list(GreedyLineMaker().play(ctx))
    assert len(pts) == 3
    assert all(p.y == 0 for p in pts), pts  # the 6-point row, not the column


# ---------------------------------------------------------------------------
# parallel-lines maker


def _pl_ctx(n, alpha, epsilon):
    st = GameState(GameMode("standard", n=n, epsilon=epsilon))
    return StrategyContext(
        state=st, budget=1, n=n, epsilon=epsilon, alpha=alpha,
        rng=random.Random(0),
    )


def test_window_parameters_hand_checked():
    # n=64, alpha=1, eps=1/10: allowance first exceeds 0.9n=57.6 at t1=58;
    # doubling room: 2*m(58-16)=84 > 64 but 2*m(58-32)=52 <= 64, so r=16
    pl = ParallelLinesMaker()
    eps, t0, t1, r, rounds, bplan, mhat, bounds = pl._window_params(
        _pl_ctx(64, Fraction(1, 1), Fraction(1, 10))
    )
    assert (eps, t0, t1, r, rounds) == (Fraction(1, 10), 42, 58, 16, 4)
    assert bplan == math.ceil(1.44 * math.log(64)) == 6
    assert mhat == 32
    assert bounds == [42, 50, 54, 56, 57]


def test_window_parameters_n100():
    pl = ParallelLinesMaker()
    eps, t0, t1, r, rounds, bplan, mhat, bounds = pl._window_params(
        _pl_ctx(100, Fraction(1, 1), Fraction(1, 10))
    )
    assert (t0, t1, r) == (59, 91, 32)
    assert bplan == 7 and mhat == 50
    assert bounds == [59, 75, 83, 87, 89, 90]


def test_window_needs_doubling_room():
    with pytest.raises(ConfigError):
        ParallelLinesMaker()._window_params(_pl_ctx(3, Fraction(1, 1), Fraction(1, 4)))


def test_window_epsilon_validation():
    with pytest.raises(ConfigError):
        ParallelLinesMaker(epsilon=Fraction(5, 4))._window_params(
            _pl_ctx(64, Fraction(1, 1), Fraction(1, 4))
        )


def test_parallel_lines_full_match_small():
    res, tr = run_match(
        GameMode("standard", n=64, epsilon=Fraction(1, 10)), 64,
        parse_schedule("power:alpha=1,c=1"), parse_schedule("clog:c=1.44"),
        parse_strategy("parallel-lines", MAKER_ROLE),
        parse_strategy("split-top", BREAKER_ROLE),
        seed=11,
    )
    assert res.outcome == "maker-win"
    assert res.tau == 58  # the completion turn t1
    assert res.m_tau <= 0.95 * 64
    maker_turns = {rec.t: rec.moves for rec in tr.moves if rec.player == "maker"}
    for t, pts in maker_turns.items():
        if t < 42:
            assert len(pts) == 0, f"pre-window turn {t} must stay idle"
        elif t < 58:
            assert 0 < len(pts) <= 32


def test_parallel_lines_guard_against_coordinate_overflow():
    # n=4096 wants a 12289-column window with quadratic stagger, whose
    # top coordinate exceeds the board range; the pre-window turns are
    # all empty, so the match reaches the planning turn quickly
    with pytest.raises(ConfigError):
        run_match(
            GameMode("standard", n=4096), 4096,
            parse_schedule("power:alpha=1,c=1"), parse_schedule("clog:c=1.44"),
            parse_strategy("parallel-lines", MAKER_ROLE),
            parse_strategy("idle", BREAKER_ROLE),
            seed=0, max_steps=2100,
        )


# ---------------------------------------------------------------------------
# batched set builders


def test_rectangle_builder_matches_budget_shape():
    rect = BATCHED_MAKER_BUILDERS["rectangle"](n=64, alpha=Fraction(1, 2), T=1024)
    assert len(rect) == 22336
    xs = {p[0] for p in rect}
    ys = {p[1] for p in rect}
    assert xs == set(range(64)) and ys == set(range(349))
    # area stays within the cumulative allowance sum_{t<=T} ceil(t^alpha)
    total = sum(math.ceil(math.isqrt(t) if math.isqrt(t)**2 == t else math.sqrt(t))
                for t in range(1, 1025))
    assert len(rect) <= total


def test_grid_builder_is_square_and_within_budget():
    grid = BATCHED_MAKER_BUILDERS["grid"](n=8, alpha=Fraction(1, 2), T=64)
    xs = sorted({p[0] for p in grid})
    ys = sorted({p[1] for p in grid})
    assert len(xs) == len(ys) == 19
    assert len(grid) == 361


def test_batched_split_marks_kill_all_wide_stretches():
    pts = BATCHED_MAKER_BUILDERS["rectangle"](n=20, alpha=Fraction(1, 2), T=100)
    marks = BATCHED_BREAKER_BUILDERS["batched-split"](
        maker_points=pts, epsilon=Fraction(1, 2), n=20, budget=400,
    )
    assert len(marks) <= 400
    counts = max_breaker_free_counts(pts, marks, 3, n=20)
    e = math.ceil(Fraction(1, 2) * 20)
    assert counts and max(counts.values()) < e


def test_batched_split_raises_when_budget_is_too_small():
    pts = BATCHED_MAKER_BUILDERS["rectangle"](n=20, alpha=Fraction(1, 2), T=100)
    with pytest.raises(BudgetExceededError):
        BATCHED_BREAKER_BUILDERS["batched-split"](
            maker_points=pts, epsilon=Fraction(1, 2), n=20, budget=10,
        )


def test_batched_random_screen_properties():
    rng = random.Random(55)
    T = 100
    eps = Fraction(1, 2)
    pts = BATCHED_MAKER_BUILDERS["rectangle"](n=20, alpha=Fraction(1, 2), T=T)
    marks = BATCHED_BREAKER_BUILDERS["batched-random"](
        maker_points=pts, epsilon=eps, alpha=Fraction(1, 2), T=T, rng=rng,
    )
    assert len(marks) <= (2 / float(eps)) * T * math.log(T)
    run_len = math.ceil(eps * math.ceil(math.sqrt(T)))
    assert oracles.adjacency_runs(pts, [(m, None) for m in marks], run_len) == []


def test_batched_random_reports_sampling_failure():
    pts = BATCHED_MAKER_BUILDERS["rectangle"](n=20, alpha=Fraction(1, 2), T=100)
    with pytest.raises(SamplingFailureError):
        BATCHED_BREAKER_BUILDERS["batched-random"](
            maker_points=pts, epsilon=Fraction(1, 2), alpha=Fraction(1, 2),
            T=100, rng=random.Random(0), max_retries=0,
        )


def test_greedy_directed_spends_exactly_its_budget_on_rich_directions():
    pts = BATCHED_MAKER_BUILDERS["rectangle"](n=20, alpha=Fraction(1, 2), T=100)
    marks = BATCHED_BREAKER_BUILDERS["greedy-directed"](
        maker_points=pts, epsilon=Fraction(1, 2), n=20, budget=30,
    )
    assert len(marks) == 30
    pset = set(map(tuple, pts))
    for m in marks:
        assert m.direction is not None
        assert (m.point.x, m.point.y) in pset  # captures points, not air


# ---------------------------------------------------------------------------
# registry plumbing


def test_parse_strategy_with_parameters():
    pl = parse_strategy("parallel-lines:C=1.2,epsilon=1/8", MAKER_ROLE)
    assert isinstance(pl, ParallelLinesMaker)
    assert pl.params()["C"] == "6/5"  # fractions are normalized
    assert pl.params()["epsilon"] == "1/8"
    st = parse_strategy("split-top", BREAKER_ROLE)
    assert isinstance(st, SplitTopBreaker)
    with pytest.raises(ConfigError):
        parse_strategy("nope", MAKER_ROLE)
    with pytest.raises(ConfigError):
        parse_strategy("split-top", MAKER_ROLE)  # role mismatch

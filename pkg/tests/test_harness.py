"""Schedules, match running, transcripts, replay audit, and sweeps."""

import io
import json
import math

import pytest

from ninarow.board import MAKER, BREAKER, GameMode
from ninarow.errors import BudgetExceededError, ConfigError
from ninarow.geometry import GridPoint
from ninarow.harness import (
    MoveRecord,
    SWEEP_COLUMNS,
    Schedule,
    Transcript,
    default_max_steps,
    eval_schedule,
    parse_schedule,
    parse_strategy,
    replay_verify,
    run_batched,
    run_match,
    schedule_alpha,
    schedule_total,
    sweep,
    write_sweep_csv,
)


# ---------------------------------------------------------------------------
# schedules


def test_schedule_values():
    assert eval_schedule(parse_schedule("clog:c=2"), 7) == math.ceil(2 * math.log(8))
    assert eval_schedule(parse_schedule("clog:c=2"), 7) == 5
    half = parse_schedule("power:alpha=1/2")
    assert eval_schedule(half, 10) == 4
    assert eval_schedule(half, 1024) == 32
    assert eval_schedule(parse_schedule("power:alpha=1,c=3/2"), 3) == 5
    assert eval_schedule(parse_schedule("const:c=3"), 99) == 3
    assert eval_schedule(parse_schedule("zero"), 1) == 0
    expl = parse_schedule("explicit:1,2,4")
    assert [eval_schedule(expl, t) for t in (1, 2, 3, 4, 50)] == [1, 2, 4, 4, 4]
    with pytest.raises(ValueError):
        eval_schedule(half, 0)


def test_schedule_shorthands():
    assert parse_schedule("5") == Schedule.const(5)
    assert parse_schedule("1,2,3") == Schedule.explicit([1, 2, 3])
    assert parse_schedule("zero") == Schedule.zero()
    assert parse_schedule("power") == Schedule.power()
    assert parse_schedule("clog") == Schedule.clog()
    sched = Schedule.power("1/2", "2")
    assert parse_schedule(sched) is sched


@pytest.mark.parametrize(
    "text",
    [
        "power:alpha=1/2",
        "power:alpha=2,c=5/3",
        "clog:c=7/2",
        "const:c=4",
        "zero",
        "explicit:0,1,1,5",
    ],
)
def test_describe_round_trips(text):
    sched = parse_schedule(text)
    assert parse_schedule(sched.describe()) == sched


@pytest.mark.parametrize(
    "text",
    [
        "",
        "bogus",
        "bogus:c=1",
        "power:alpha=0",
        "power:alpha=1,k=2",
        "power:alpha",
        "clog:c=0",
        "clog:c=1,c=2",
        "const",
        "const:x=1",
        "const:c=1/2",
        "explicit:",
        "explicit:3,2",
        "explicit:1/2",
        "explicit:-1",
    ],
)
def test_schedule_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_schedule(text)


def test_schedule_total_and_alpha():
    assert schedule_total(parse_schedule("power:alpha=1"), 4) == 10
    assert schedule_total(parse_schedule("zero"), 100) == 0
    assert schedule_alpha(parse_schedule("power:alpha=1/2")) is not None
    assert schedule_alpha(parse_schedule("clog:c=2")) is None


def test_default_max_steps():
    # One step past the first t whose Maker allowance covers n.
    assert default_max_steps(parse_schedule("power:alpha=1"), 10) == 11
    assert default_max_steps(parse_schedule("clog:c=1"), 5) == 55
    with pytest.raises(ConfigError):
        default_max_steps(parse_schedule("zero"), 3)


# ---------------------------------------------------------------------------
# match running and transcripts


@pytest.fixture(scope="module")
def small_match():
    maker = parse_strategy("greedy", MAKER)
    breaker = parse_strategy("idle", BREAKER)
    return run_match("standard", 4, "power:alpha=1", "zero", maker, breaker, seed=3)


def test_run_match_small(small_match):
    result, transcript = small_match
    # Greedy runs a single line out: 1+2+3 = 6 >= 4 points by t=3.
    assert result.outcome == "maker-win"
    assert (result.tau, result.m_tau, result.steps) == (3, 3, 3)
    assert len(result.summary) == 3
    # The win check runs before Breaker replies, so the last record is
    # Maker's.
    assert len(transcript.moves) == 5
    assert transcript.moves[-1].player == MAKER
    assert transcript.outcome["outcome"] == "maker-win"


def test_header_field_order(small_match):
    _, transcript = small_match
    first = transcript.dumps().splitlines()[0]
    pairs = json.loads(first, object_pairs_hook=list)
    assert [k for k, _ in pairs] == [
        "k", "v", "engine", "variant", "n", "epsilon",
        "directed_marks_occupy", "alpha", "m", "b",
        "maker", "maker_params", "breaker", "breaker_params",
        "seed", "max_steps",
    ]
    header = dict(pairs)
    assert header["variant"] == "standard"
    assert header["alpha"] == "1"
    assert header["seed"] == 3


def test_transcript_round_trip(small_match):
    _, transcript = small_match
    text = transcript.dumps()
    again = Transcript.from_lines(text.splitlines())
    assert again.dumps() == text
    assert again.moves == transcript.moves


def test_iter_timesteps(small_match):
    _, transcript = small_match
    steps = list(transcript.iter_timesteps())
    assert [t for t, _, _ in steps] == [1, 2, 3]
    for t, maker_moves, _ in steps:
        assert len(maker_moves) == t
    # Maker won at t=3, so the final timestep has no Breaker reply.
    assert steps[-1][2] == ()


def test_same_seed_dumps_are_byte_identical():
    def play(seed):
        maker = parse_strategy("greedy", MAKER)
        breaker = parse_strategy("random", BREAKER)
        _, tr = run_match("standard", 5, "power:alpha=1", "const:c=1",
                          maker, breaker, seed=seed)
        return tr.dumps()

    assert play(5) == play(5)
    assert play(5) != play(6)


def test_run_match_rejects_bad_config():
    maker = parse_strategy("greedy", MAKER)
    breaker = parse_strategy("idle", BREAKER)
    with pytest.raises(ConfigError):
        run_match("standard", 4, "power:alpha=1", "zero", maker, breaker,
                  max_steps=0)
    with pytest.raises(ConfigError):
        run_match(GameMode(variant="standard", n=5), 4, "power:alpha=1",
                  "zero", maker, breaker)


# ---------------------------------------------------------------------------
# replay audit


def _reload(transcript):
    return Transcript.from_lines(transcript.dumps().splitlines())


def test_replay_ok(small_match):
    _, transcript = small_match
    report = replay_verify(_reload(transcript))
    assert report.ok
    assert bool(report)


def test_replay_catches_budget_violation(small_match):
    _, transcript = small_match
    tr = _reload(transcript)
    rec = tr.moves[0]
    tr.moves[0] = MoveRecord(rec.t, rec.player,
                             rec.moves + (GridPoint(90, 90),))
    report = replay_verify(tr)
    assert not report.ok
    assert report.timestep == 1
    assert "budget" in report.reason


def test_replay_catches_illegal_move(small_match):
    _, transcript = small_match
    tr = _reload(transcript)
    first_point = tr.moves[0].moves[0]
    rec = tr.moves[2]
    assert rec.player == MAKER and rec.t == 2
    tr.moves[2] = MoveRecord(2, MAKER, (first_point, GridPoint(90, 90)))
    report = replay_verify(tr)
    assert not report.ok
    assert "illegal maker move" in report.reason


def test_replay_catches_wrong_outcome(small_match):
    _, transcript = small_match
    tr = _reload(transcript)
    tr.outcome = dict(tr.outcome, outcome="survived")
    report = replay_verify(tr)
    assert not report.ok and "outcome says" in report.reason

    tr = _reload(transcript)
    tr.outcome = dict(tr.outcome, tau=2)
    assert "tau=2" in replay_verify(tr).reason

    tr = _reload(transcript)
    tr.outcome = dict(tr.outcome, m_tau=1)
    assert "m_tau=1" in replay_verify(tr).reason

    tr = _reload(transcript)
    tr.outcome = dict(tr.outcome, steps=9)
    assert "steps=9" in replay_verify(tr).reason

    tr = _reload(transcript)
    tr.outcome = None
    assert "missing outcome" in replay_verify(tr).reason


def test_replay_catches_extra_and_reordered_moves(small_match):
    _, transcript = small_match
    tr = _reload(transcript)
    tr.moves.append(MoveRecord(4, MAKER, (GridPoint(91, 91),)))
    report = replay_verify(tr)
    assert not report.ok
    assert "after Maker won" in report.reason

    tr = _reload(transcript)
    rec = tr.moves[1]
    assert rec.player == BREAKER
    tr.moves[1] = MoveRecord(7, rec.player, rec.moves)
    assert "out of order" in replay_verify(tr).reason


# ---------------------------------------------------------------------------
# batched matches


def test_run_batched_split():
    # n=6, alpha=1: T = 3, Maker budget 1+2+3 = 6; the rectangle is one
    # 6-point row and the splitter cuts it below e = 3 with two marks.
    result = run_batched("standard", 6, "1", "1/2", "rectangle",
                         "batched-split", seed=0, b="const:c=3")
    assert result.outcome == "breaker-win"
    assert result.steps == 3
    (entry,) = result.summary
    assert entry.maker_points == 6
    assert entry.breaker_points == 2
    assert entry.max_count < 3


def test_run_batched_directed():
    result = run_batched("directed", 6, "1", "1/2", "rectangle",
                         "greedy-directed", seed=0, b="const:c=2")
    assert result.outcome == "breaker-win"
    assert result.summary[0].max_count == 0


def test_run_batched_maker_win_without_breaker():
    result = run_batched("standard", 6, "1", "1/2", "rectangle", "idle", seed=0)
    assert result.outcome == "maker-win"
    assert result.tau == 3
    assert result.m_tau == 6


def test_run_batched_accepts_explicit_variant_and_rejects_others():
    result = run_batched("batched", 6, "1", "1/2", "rectangle", "idle", seed=0)
    assert result.outcome == "maker-win"
    with pytest.raises(ConfigError):
        run_batched("bogus", 6, "1", "1/2", "rectangle", "idle")


def test_run_batched_budget_overrun():
    def huge(n, alpha, T, epsilon, rng):
        return [GridPoint(x, 0) for x in range(100)]

    with pytest.raises(BudgetExceededError) as err:
        run_batched("standard", 6, "1", "1/2", huge, "idle", seed=0)
    assert err.value.required == 100
    assert err.value.available == 6


# ---------------------------------------------------------------------------
# sweeps


BASE_SWEEP = {
    "variant": "standard",
    "n": [4, 5],
    "b": "zero",
    "maker": "greedy",
    "breaker": "idle",
    "seeds": [1, 2],
}


def test_sweep_rows_and_aggregates():
    rows = sweep(dict(BASE_SWEEP))
    matches = [r for r in rows if r["row_type"] == "match"]
    aggs = [r for r in rows if r["row_type"] == "aggregate"]
    assert len(matches) == 4
    assert len(aggs) == 2
    assert all(r["outcome"] == "maker-win" for r in matches)
    assert [r["n"] for r in matches] == ["4", "4", "5", "5"]
    assert matches[0]["ratio"] == "0.750000"
    assert matches[2]["ratio"] == "0.600000"
    assert all(r["win_fraction"] == "1.0000" for r in aggs)
    assert set(rows[0]) == set(SWEEP_COLUMNS)


def test_sweep_parallel_matches_serial():
    def strip(rows):
        return [{k: v for k, v in r.items() if k != "wall_time"} for r in rows]

    serial = sweep(dict(BASE_SWEEP), jobs=1)
    parallel = sweep(dict(BASE_SWEEP), jobs=2)
    assert strip(serial) == strip(parallel)
    assert strip(serial) == strip(sweep(dict(BASE_SWEEP), jobs=1))


def test_sweep_error_rows_keep_going():
    # parallel-lines needs doubling room and rejects n=3 mid-match; the
    # sweep records the failure and still aggregates the healthy runs.
    rows = sweep({
        "variant": "standard",
        "n": 3,
        "b": "zero",
        "epsilon": "1/10",
        "pairs": [("parallel-lines", "idle"), ("greedy", "idle")],
        "seeds": 1,
    })
    by_maker = {r["maker"]: r for r in rows if r["row_type"] == "match"}
    assert by_maker["parallel-lines"]["outcome"] == "error"
    assert "ConfigError" in by_maker["parallel-lines"]["detail"]
    assert by_maker["greedy"]["outcome"] == "maker-win"
    aggs = {r["maker"]: r for r in rows if r["row_type"] == "aggregate"}
    assert aggs["parallel-lines"]["win_fraction"] == ""
    assert aggs["greedy"]["win_fraction"] == "1.0000"


def test_sweep_config_errors():
    with pytest.raises(ConfigError):
        sweep({"n": 4, "breaker": "idle", "seeds": 1})
    with pytest.raises(ConfigError):
        sweep({"n": 4, "maker": "greedy", "breaker": "idle"})
    with pytest.raises(ConfigError):
        sweep([])


def test_write_sweep_csv():
    rows = sweep(dict(BASE_SWEEP, n=4, seeds=1))
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 1 + len(rows)

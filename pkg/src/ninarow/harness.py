"""Match orchestration: budget schedules, turn-based and batched match
runners, line-delimited transcripts, replay auditing, and parameter
sweeps.

A turn-based match alternates one Maker turn (up to m(t) points) and
one Breaker turn (up to b(t) marks) per timestep t = 1, 2, ...; the win
check runs at the end of the Maker turn, so a win at timestep t stops
the match before Breaker replies.  Batched matches place both sets at
once and score them statically.

Transcripts are JSON records, one per line, header first, with a fixed
field order and decimal integers, so equal configurations with equal
seeds produce byte-identical files.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import multiprocessing
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .board import (
    BREAKER,
    MAKER,
    BreakerMark,
    GameMode,
    apply_move,
    max_breaker_free_counts,
    new_game,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    IllegalMoveError,
    NinarowError,
)
from .geometry import Direction, GridPoint
from .rational import as_fraction, ceil_mul, pow_ceil
from .strategies import (
    BATCHED_BREAKER_BUILDERS,
    BATCHED_MAKER_BUILDERS,
    BREAKER_STRATEGIES,
    MAKER_STRATEGIES,
    StrategyContext,
)

ENGINE_VERSION = "0.1.0"

TRANSCRIPT_FORMAT = 1

# Scan limit when deriving the default horizon from a schedule.
_MAX_HORIZON_SCAN = 1_000_000


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class Schedule:
    """A per-timestep allowance m(t) or b(t).

    Families: power (ceil(c * t**alpha)), clog (ceil(c * ln(t+1))),
    const (c every turn), zero, and explicit (a literal list, clamped
    to its last value past the end).  Explicit lists must be
    non-decreasing integers; use them only where the rules expect a
    monotone allowance.
    """

    family: str
    alpha: Fraction = None
    c: Fraction = None
    values: tuple = None

    @staticmethod
    def power(alpha="1", c="1"):
        alpha = as_fraction(alpha)
        c = as_fraction(c)
        if alpha <= 0:
            raise ConfigError(f"power schedule needs alpha > 0, got {alpha}")
        if c <= 0:
            raise ConfigError(f"power schedule needs c > 0, got {c}")
        return Schedule("power", alpha=alpha, c=c)

    @staticmethod
    def clog(c="1"):
        c = as_fraction(c)
        if c <= 0:
            raise ConfigError(f"clog schedule needs c > 0, got {c}")
        return Schedule("clog", c=c)

    @staticmethod
    def const(c):
        c = as_fraction(c)
        if c.denominator != 1 or c < 0:
            raise ConfigError(f"const schedule needs an integer c >= 0, got {c}")
        return Schedule("const", c=c)

    @staticmethod
    def zero():
        return Schedule("zero")

    @staticmethod
    def explicit(values):
        vals = tuple(as_fraction(v) for v in values)
        if not vals:
            raise ConfigError("explicit schedule needs at least one value")
        prev = None
        for i, v in enumerate(vals):
            if v.denominator != 1 or v < 0:
                raise ConfigError(
                    f"explicit schedule value #{i + 1} must be an integer >= 0, got {v}"
                )
            if prev is not None and v < prev:
                raise ConfigError(
                    f"explicit schedule must be non-decreasing, got {prev} then {v}"
                )
            prev = v
        return Schedule("explicit", values=vals)

    def describe(self):
        """Canonical text form; parse_schedule round-trips it."""
        if self.family == "power":
            return f"power:alpha={self.alpha},c={self.c}"
        if self.family == "clog":
            return f"clog:c={self.c}"
        if self.family == "const":
            return f"const:c={self.c}"
        if self.family == "zero":
            return "zero"
        return "explicit:" + ",".join(str(v) for v in self.values)


def _parse_kv(payload, what):
    out = {}
    for part in payload.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, val = part.partition("=")
        if not sep or not key.strip() or not val.strip():
            raise ConfigError(f"bad {what} parameter {part!r} (expected key=value)")
        key = key.strip()
        if key in out:
            raise ConfigError(f"duplicate {what} parameter {key!r}")
        out[key] = val.strip()
    return out


def parse_schedule(text):
    """Parse a schedule descriptor such as ``power:alpha=1/2,c=1``,
    ``clog:c=5``, ``const:c=3``, ``zero``, ``explicit:1,2,3``, or the
    shorthands ``5`` (const) and ``1,2,3`` (explicit)."""
    if isinstance(text, Schedule):
        return text
    text = str(text).strip()
    if not text:
        raise ConfigError("empty schedule descriptor")
    family, sep, payload = text.partition(":")
    family = family.strip()
    if sep:
        if family == "explicit":
            return Schedule.explicit([v for v in payload.split(",") if v.strip()])
        kv = _parse_kv(payload, f"{family} schedule")
        if family == "power":
            sched = Schedule.power(kv.pop("alpha", "1"), kv.pop("c", "1"))
        elif family == "clog":
            sched = Schedule.clog(kv.pop("c", "1"))
        elif family == "const":
            if "c" not in kv:
                raise ConfigError("const schedule needs c=<integer>")
            sched = Schedule.const(kv.pop("c"))
        else:
            raise ConfigError(f"unknown schedule family {family!r}")
        if kv:
            raise ConfigError(
                f"unknown {family} schedule parameter(s): {', '.join(sorted(kv))}"
            )
        return sched
    if text == "zero":
        return Schedule.zero()
    if text == "power":
        return Schedule.power()
    if text == "clog":
        return Schedule.clog()
    if "," in text:
        return Schedule.explicit([v for v in text.split(",") if v.strip()])
    try:
        value = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"unknown schedule descriptor {text!r}") from None
    return Schedule.const(value)


def eval_schedule(sched, t):
    """The allowance at timestep t >= 1, always a non-negative int."""
    t = int(t)
    if t < 1:
        raise ValueError(f"schedule evaluation needs t >= 1, got {t}")
    if sched.family == "power":
        return pow_ceil(t, sched.alpha, scale=sched.c)
    if sched.family == "clog":
        return int(math.ceil(float(sched.c) * math.log(t + 1)))
    if sched.family == "const":
        return int(sched.c)
    if sched.family == "zero":
        return 0
    if sched.family == "explicit":
        return int(sched.values[min(t, len(sched.values)) - 1])
    raise ConfigError(f"unknown schedule family {sched.family!r}")


def schedule_alpha(sched):
    """The growth exponent when the schedule is a power law, else None;
    strategies that assume m(t) = ceil(c*t**alpha) consult this."""
    return sched.alpha if sched.family == "power" else None


def schedule_total(sched, T):
    """Sum of the allowance over timesteps 1..T."""
    return sum(eval_schedule(sched, t) for t in range(1, int(T) + 1))


def default_max_steps(m, n):
    """Smallest t with m(t) >= n, plus one: past that horizon the Maker
    allowance alone covers a full winning segment, so matches stop."""
    for t in range(1, _MAX_HORIZON_SCAN + 1):
        if eval_schedule(m, t) >= n:
            return t + 1
    raise ConfigError(
        f"schedule {m.describe()} never reaches n={n}; pass max_steps explicitly"
    )


# ---------------------------------------------------------------------------
# strategy descriptors


def _coerce_param(value):
    # Integer-looking values become ints (counts like max_retries);
    # anything else stays a string for the constructor to interpret.
    if value.lstrip("+-").isdigit():
        return int(value)
    return value


def parse_strategy(text, role):
    """Build a turn-based strategy from ``name`` or ``name:key=value,...``.

    role is "maker" or "breaker" and selects the registry.
    """
    registry = MAKER_STRATEGIES if role == MAKER else BREAKER_STRATEGIES
    name, sep, payload = str(text).strip().partition(":")
    name = name.strip()
    if name not in registry:
        raise ConfigError(
            f"unknown {role} strategy {name!r}; available: {', '.join(sorted(registry))}"
        )
    kwargs = {}
    if sep:
        kwargs = {k: _coerce_param(v) for k, v in _parse_kv(payload, name).items()}
    try:
        return registry[name](**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {role} strategy {name!r}: {exc}") from None


def parse_builder(text, role):
    """Resolve a batched set-builder descriptor to (name, callable).

    The callable accepts the standard builder keywords (n, alpha, T,
    epsilon, maker_points, budget, rng) with any ``name:key=value``
    extras already bound.
    """
    registry = BATCHED_MAKER_BUILDERS if role == MAKER else BATCHED_BREAKER_BUILDERS
    name, sep, payload = str(text).strip().partition(":")
    name = name.strip()
    if name not in registry:
        raise ConfigError(
            f"unknown batched {role} builder {name!r}; available: {', '.join(sorted(registry))}"
        )
    base = registry[name]
    if not sep:
        return name, base
    extra = {k: _coerce_param(v) for k, v in _parse_kv(payload, name).items()}

    def bound(**kw):
        kw.update(extra)
        return base(**kw)

    return name, bound


# ---------------------------------------------------------------------------
# transcripts


class MoveRecord(NamedTuple):
    t: int
    player: str
    moves: tuple


def _point_to_json(p):
    return [int(p[0]), int(p[1])]


def _mark_to_json(mark):
    out = [int(mark.point.x), int(mark.point.y)]
    if mark.direction is not None:
        out.extend((int(mark.direction[0]), int(mark.direction[1])))
    return out


def _mark_from_json(row):
    if len(row) == 2:
        return BreakerMark((row[0], row[1]))
    if len(row) == 4:
        return BreakerMark((row[0], row[1]), (row[2], row[3]))
    raise ConfigError(f"bad breaker mark record {row!r}")


def _dump(record):
    return json.dumps(record, separators=(",", ":"))


@dataclass
class Transcript:
    """A replayable match record: header, ordered moves, outcome.

    header holds the mode, n, epsilon, schedule descriptors, strategy
    names and parameters, seed, engine version; each move record is one
    player's whole turn; outcome states maker-win (with tau and m(tau))
    or survival through max_steps.
    """

    header: dict
    moves: list
    outcome: dict = None

    def to_lines(self):
        lines = [_dump(self.header)]
        for rec in self.moves:
            if rec.player == MAKER:
                pts = [_point_to_json(p) for p in rec.moves]
            else:
                pts = [_mark_to_json(m) for m in rec.moves]
            lines.append(
                _dump({"k": "move", "t": rec.t, "player": rec.player, "pts": pts})
            )
        if self.outcome is not None:
            lines.append(_dump(self.outcome))
        return lines

    def dumps(self):
        return "\n".join(self.to_lines()) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def from_lines(cls, lines):
        records = []
        for i, line in enumerate(lines, 1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"transcript line {i} is not valid JSON: {exc}") from None
        if not records or records[0].get("k") != "header":
            raise ConfigError("transcript must start with a header record")
        header = records[0]
        moves = []
        outcome = None
        for rec in records[1:]:
            kind = rec.get("k")
            if kind == "move":
                player = rec["player"]
                if player == MAKER:
                    pts = tuple(GridPoint(int(p[0]), int(p[1])) for p in rec["pts"])
                elif player == BREAKER:
                    pts = tuple(_mark_from_json(p) for p in rec["pts"])
                else:
                    raise ConfigError(f"bad player {player!r} in move record")
                moves.append(MoveRecord(int(rec["t"]), player, pts))
            elif kind == "outcome":
                outcome = rec
            else:
                raise ConfigError(f"unknown transcript record kind {kind!r}")
        return cls(header=header, moves=moves, outcome=outcome)

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def iter_timesteps(self):
        """Yield (t, maker_moves, breaker_moves) in timestep order; the
        final timestep's breaker_moves is empty when Maker won."""
        t = None
        maker_moves = ()
        breaker_moves = ()
        for rec in self.moves:
            if rec.t != t:
                if t is not None:
                    yield t, maker_moves, breaker_moves
                t = rec.t
                maker_moves = ()
                breaker_moves = ()
            if rec.player == MAKER:
                maker_moves = rec.moves
            else:
                breaker_moves = rec.moves
        if t is not None:
            yield t, maker_moves, breaker_moves


def _make_header(mode, n, m, b, maker_name, maker_params, breaker_name,
                 breaker_params, seed, max_steps):
    alpha = schedule_alpha(m)
    return {
        "k": "header",
        "v": TRANSCRIPT_FORMAT,
        "engine": ENGINE_VERSION,
        "variant": mode.variant,
        "n": int(n),
        "epsilon": str(mode.epsilon),
        "directed_marks_occupy": bool(mode.directed_marks_occupy),
        "alpha": None if alpha is None else str(alpha),
        "m": m.describe(),
        "b": b.describe(),
        "maker": maker_name,
        "maker_params": dict(maker_params),
        "breaker": breaker_name,
        "breaker_params": dict(breaker_params),
        "seed": int(seed),
        "max_steps": int(max_steps),
    }


# ---------------------------------------------------------------------------
# match results


class StepSummary(NamedTuple):
    t: int
    maker_points: int
    breaker_points: int
    max_count: int
    segments_split: int


@dataclass
class MatchResult:
    """Outcome of one match.

    outcome is "maker-win" or "survived" for turn-based matches
    ("maker-win" / "breaker-win" for batched ones); tau and m_tau are
    the winning timestep and its Maker allowance, or None; summary has
    one StepSummary per timestep played.
    """

    outcome: str
    tau: int = None
    m_tau: int = None
    steps: int = 0
    summary: list = field(default_factory=list)

    @property
    def maker_won(self):
        return self.outcome == "maker-win"


def _coerce_mode(mode, n, epsilon):
    if isinstance(mode, GameMode):
        if mode.n != n:
            raise ConfigError(f"mode.n={mode.n} disagrees with n={n}")
        return mode
    kwargs = {"variant": str(mode), "n": int(n)}
    if epsilon is not None:
        kwargs["epsilon"] = as_fraction(epsilon)
    return GameMode(**kwargs)


def _as_points(raw):
    return [GridPoint(int(p[0]), int(p[1])) for p in raw]


def _as_marks(raw):
    out = []
    for item in raw:
        if isinstance(item, BreakerMark):
            out.append(BreakerMark(item.point, item.direction))
        elif (
            isinstance(item, tuple)
            and len(item) == 2
            and isinstance(item[0], (tuple, GridPoint))
        ):
            out.append(BreakerMark(item[0], item[1]))
        else:
            out.append(BreakerMark((int(item[0]), int(item[1]))))
    return out


def _max_active_count(state):
    return max((seg.maker_count for seg in state.active_segments()), default=0)


def run_match(mode, n, m, b, maker, breaker, max_steps=None, seed=0,
              epsilon=None):
    """Play one turn-based match and return (MatchResult, Transcript).

    mode is a GameMode or a variant name; m and b are Schedules (or
    descriptors).  Strategies that assume a power-law Maker allowance
    receive its alpha through the context.  Deterministic given seed.
    Raises IllegalMoveError naming the strategy if either side plays a
    claimed point or exceeds its budget.
    """
    m = parse_schedule(m)
    b = parse_schedule(b)
    mode = _coerce_mode(mode, n, epsilon)
    n = int(n)
    if max_steps is None:
        max_steps = default_max_steps(m, n)
    max_steps = int(max_steps)
    if max_steps < 1:
        raise ConfigError(f"max_steps must be >= 1, got {max_steps}")

    state = new_game(mode)
    rng = random.Random(int(seed))
    alpha = schedule_alpha(m)
    maker_scratch = {}
    breaker_scratch = {}
    moves_log = []
    summary = []
    outcome = "survived"
    tau = None
    m_tau = None
    steps = 0

    for t in range(1, max_steps + 1):
        steps = t
        state.t = t
        mb = eval_schedule(m, t)
        ctx = StrategyContext(
            state=state, budget=mb, n=n, epsilon=mode.epsilon, alpha=alpha,
            rng=rng, scratch=maker_scratch,
        )
        pts = _as_points(list(maker.play(ctx)))
        if len(pts) > mb:
            raise IllegalMoveError(
                f"{maker.name} played {len(pts)} points at t={t}, budget {mb}",
                strategy=maker.name,
            )
        try:
            apply_move(state, MAKER, pts)
        except IllegalMoveError as exc:
            exc.strategy = maker.name
            raise
        moves_log.append(MoveRecord(t, MAKER, tuple(pts)))

        if state.maker_has_won():
            outcome = "maker-win"
            tau = t
            m_tau = mb
            summary.append(StepSummary(t, len(pts), 0, _max_active_count(state), 0))
            break

        bb = eval_schedule(b, t)
        ctx = StrategyContext(
            state=state, budget=bb, n=n, epsilon=mode.epsilon, alpha=alpha,
            rng=rng, scratch=breaker_scratch,
        )
        marks = _as_marks(list(breaker.play(ctx)))
        if len(marks) > bb:
            raise IllegalMoveError(
                f"{breaker.name} played {len(marks)} marks at t={t}, budget {bb}",
                strategy=breaker.name,
            )
        before = {(s.line, s.lo, s.hi) for s in state.active_segments()}
        try:
            apply_move(state, BREAKER, marks)
        except IllegalMoveError as exc:
            exc.strategy = breaker.name
            raise
        moves_log.append(MoveRecord(t, BREAKER, tuple(marks)))
        after = {(s.line, s.lo, s.hi) for s in state.active_segments()}
        summary.append(
            StepSummary(t, len(pts), len(marks), _max_active_count(state),
                        len(before - after))
        )

    result = MatchResult(outcome=outcome, tau=tau, m_tau=m_tau, steps=steps,
                         summary=summary)
    header = _make_header(
        mode, n, m, b, maker.name, maker.params(), breaker.name,
        breaker.params(), seed, max_steps,
    )
    outcome_rec = {
        "k": "outcome",
        "outcome": outcome,
        "tau": tau,
        "m_tau": m_tau,
        "steps": steps,
    }
    return result, Transcript(header=header, moves=moves_log, outcome=outcome_rec)


# ---------------------------------------------------------------------------
# batched matches


def run_batched(mode, n, alpha, epsilon, maker_set_builder, breaker_set_builder,
                seed=0, T=None, b=None):
    """Play one batched match: Maker's whole set, then Breaker's.

    mode is "standard"/"directed" (or the explicit batched variant
    names).  Maker's budget is sum of ceil(t**alpha) over t <= T, with
    T = ceil((n/2)**(1/alpha)) unless given.  b, when given, is a
    Schedule capping Breaker at sum of b(t) over t <= T; builders that
    need an explicit point budget (the splitting and directed-greedy
    ones) require it.  Breaker wins iff no breaker-free active stretch
    keeps ceil(epsilon*n) Maker points.

    Builders may be registry names or callables taking the standard
    keywords.  Raises BudgetExceededError when a built set overruns its
    budget.
    """
    variant = mode.variant if isinstance(mode, GameMode) else str(mode)
    variant = {"standard": "batched", "directed": "batched-directed"}.get(
        variant, variant
    )
    if variant not in ("batched", "batched-directed"):
        raise ConfigError(f"run_batched needs a batched variant, got {variant!r}")
    n = int(n)
    alpha = as_fraction(alpha)
    epsilon = as_fraction(epsilon)
    mode = GameMode(variant=variant, n=n, epsilon=epsilon)
    e = ceil_mul(epsilon, n)
    if T is None:
        if alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {alpha}")
        T = pow_ceil(Fraction(n, 2), Fraction(1) / alpha)
    T = int(T)
    if T < 1:
        raise ConfigError(f"T must be >= 1, got {T}")

    if callable(maker_set_builder):
        maker_name, maker_fn = getattr(maker_set_builder, "__name__", "maker"), maker_set_builder
    else:
        maker_name, maker_fn = parse_builder(maker_set_builder, MAKER)
    if callable(breaker_set_builder):
        breaker_name, breaker_fn = getattr(breaker_set_builder, "__name__", "breaker"), breaker_set_builder
    else:
        breaker_name, breaker_fn = parse_builder(breaker_set_builder, BREAKER)

    rng = random.Random(int(seed))
    maker_budget = schedule_total(Schedule.power(alpha), T)
    breaker_budget = None
    if b is not None:
        breaker_budget = schedule_total(parse_schedule(b), T)

    points = _as_points(list(maker_fn(
        n=n, alpha=alpha, T=T, epsilon=epsilon, rng=rng,
    )))
    if len(points) > maker_budget:
        raise BudgetExceededError(
            f"{maker_name} built {len(points)} points, budget {maker_budget}",
            required=len(points), available=maker_budget,
        )

    marks = _as_marks(list(breaker_fn(
        maker_points=points, epsilon=epsilon, n=n, alpha=alpha, T=T,
        budget=breaker_budget, rng=rng,
    )))
    if breaker_budget is not None and len(marks) > breaker_budget:
        raise BudgetExceededError(
            f"{breaker_name} built {len(marks)} marks, budget {breaker_budget}",
            required=len(marks), available=breaker_budget,
        )

    counts = max_breaker_free_counts(points, marks, k=max(3, e), n=n)
    best = max(counts.values(), default=0)
    maker_won = best >= e
    return MatchResult(
        outcome="maker-win" if maker_won else "breaker-win",
        tau=T if maker_won else None,
        m_tau=len(points) if maker_won else None,
        steps=T,
        summary=[StepSummary(T, len(points), len(marks), best, 0)],
    )


# ---------------------------------------------------------------------------
# replay audit


class ReplayReport(NamedTuple):
    ok: bool
    timestep: int
    reason: str

    def __bool__(self):
        return self.ok


def _replay_mismatch(t, reason):
    return ReplayReport(False, t, reason)


def replay_verify(transcript):
    """Re-execute a transcript through the rules engine.

    Checks move legality, budget compliance, win timing, and the
    recorded outcome; returns ReplayReport(ok=True, ...) or the first
    mismatch with its timestep and reason.
    """
    hdr = transcript.header
    try:
        mode = GameMode(
            variant=hdr["variant"],
            n=int(hdr["n"]),
            epsilon=as_fraction(hdr["epsilon"]),
            directed_marks_occupy=bool(hdr.get("directed_marks_occupy", True)),
        )
        m = parse_schedule(hdr["m"])
        b = parse_schedule(hdr["b"])
    except (KeyError, ConfigError, ValueError) as exc:
        return _replay_mismatch(None, f"bad header: {exc}")

    state = new_game(mode)
    won_at = None
    last_t = 0
    expect = MAKER
    for rec in transcript.moves:
        if won_at is not None:
            return _replay_mismatch(rec.t, f"move after Maker won at t={won_at}")
        if rec.player == MAKER:
            if expect != MAKER or rec.t != last_t + 1:
                return _replay_mismatch(rec.t, "maker move out of order")
            last_t = rec.t
            state.t = rec.t
            budget = eval_schedule(m, rec.t)
            if len(rec.moves) > budget:
                return _replay_mismatch(
                    rec.t, f"maker played {len(rec.moves)} points, budget {budget}"
                )
            try:
                apply_move(state, MAKER, list(rec.moves))
            except IllegalMoveError as exc:
                return _replay_mismatch(rec.t, f"illegal maker move: {exc}")
            if state.maker_has_won():
                won_at = rec.t
            expect = BREAKER
        elif rec.player == BREAKER:
            if expect != BREAKER or rec.t != last_t:
                return _replay_mismatch(rec.t, "breaker move out of order")
            budget = eval_schedule(b, rec.t)
            if len(rec.moves) > budget:
                return _replay_mismatch(
                    rec.t, f"breaker played {len(rec.moves)} marks, budget {budget}"
                )
            try:
                apply_move(state, BREAKER, list(rec.moves))
            except IllegalMoveError as exc:
                return _replay_mismatch(rec.t, f"illegal breaker move: {exc}")
            expect = MAKER
        else:
            return _replay_mismatch(rec.t, f"unknown player {rec.player!r}")

    outcome = transcript.outcome
    if outcome is None:
        return _replay_mismatch(last_t, "missing outcome record")
    if won_at is not None:
        if outcome.get("outcome") != "maker-win":
            return _replay_mismatch(
                won_at, f"Maker won at t={won_at} but outcome says {outcome.get('outcome')!r}"
            )
        if outcome.get("tau") != won_at:
            return _replay_mismatch(
                won_at, f"recorded tau={outcome.get('tau')} but replay won at {won_at}"
            )
        expected_m = eval_schedule(m, won_at)
        if outcome.get("m_tau") != expected_m:
            return _replay_mismatch(
                won_at, f"recorded m_tau={outcome.get('m_tau')}, schedule gives {expected_m}"
            )
    else:
        if outcome.get("outcome") != "survived":
            return _replay_mismatch(
                last_t, f"no win on replay but outcome says {outcome.get('outcome')!r}"
            )
    if outcome.get("steps") != last_t:
        return _replay_mismatch(
            last_t, f"recorded steps={outcome.get('steps')}, replay saw {last_t}"
        )
    return ReplayReport(True, None, None)


# ---------------------------------------------------------------------------
# sweeps


SWEEP_COLUMNS = (
    "row_type", "variant", "n", "alpha", "m", "b", "maker", "breaker",
    "epsilon", "seed", "outcome", "tau", "m_tau", "ratio", "steps",
    "wall_time", "win_fraction", "detail",
)

_SWEEP_GROUP_KEYS = (
    "variant", "n", "alpha", "m", "b", "maker", "breaker", "epsilon",
)


def _listify(value):
    """Scalars become one-element lists; strings are scalars here."""
    if value is None or isinstance(value, (str, int, float)):
        return [value]
    return list(value)


def _sweep_jobs(config):
    if not isinstance(config, dict):
        raise ConfigError("sweep config must be a mapping")
    for key in ("n", "breaker", "seeds"):
        if key not in config:
            raise ConfigError(f"sweep config is missing {key!r}")

    variants = [str(v) for v in _listify(config.get("variant", "standard"))]
    ns = [int(v) for v in _listify(config["n"])]
    alphas = [str(v) for v in _listify(config.get("alpha", "1"))]
    ms = [None if v is None else str(v) for v in _listify(config.get("m"))]
    bs = [str(v) for v in _listify(config.get("b", "zero"))]
    epsilons = [
        None if v is None else str(v)
        for v in _listify(config.get("epsilon"))
    ]
    seeds = [int(v) for v in _listify(config["seeds"])]
    max_steps = config.get("max_steps")
    if max_steps is not None:
        max_steps = int(max_steps)

    if "pairs" in config:
        pairs = [(str(mk), str(bk)) for mk, bk in config["pairs"]]
    else:
        if "maker" not in config:
            raise ConfigError("sweep config needs 'maker' (or 'pairs')")
        pairs = [
            (str(mk), str(bk))
            for mk in _listify(config["maker"])
            for bk in _listify(config["breaker"])
        ]
    jobs = []
    for variant, n, alpha, m_desc, b_desc, (mk, bk), eps, seed in itertools.product(
        variants, ns, alphas, ms, bs, pairs, epsilons, seeds
    ):
        if m_desc is None:
            m_desc = f"power:alpha={as_fraction(alpha)},c=1"
        jobs.append({
            "variant": variant,
            "n": n,
            "alpha": alpha,
            "m": m_desc,
            "b": b_desc,
            "maker": mk,
            "breaker": bk,
            "epsilon": eps,
            "seed": seed,
            "max_steps": max_steps,
        })
    jobs.sort(key=lambda j: tuple(str(j[k]) for k in _SWEEP_GROUP_KEYS) + (j["seed"],))
    return jobs


def _sweep_worker(job):
    row = {col: "" for col in SWEEP_COLUMNS}
    row.update({
        "row_type": "match",
        "variant": job["variant"],
        "n": str(job["n"]),
        "alpha": str(job["alpha"]),
        "m": job["m"],
        "b": job["b"],
        "maker": job["maker"],
        "breaker": job["breaker"],
        "epsilon": "" if job["epsilon"] is None else str(job["epsilon"]),
        "seed": str(job["seed"]),
    })
    start = time.perf_counter()
    try:
        maker = parse_strategy(job["maker"], MAKER)
        breaker = parse_strategy(job["breaker"], BREAKER)
        result, _ = run_match(
            job["variant"], job["n"], job["m"], job["b"], maker, breaker,
            max_steps=job["max_steps"], seed=job["seed"],
            epsilon=job["epsilon"],
        )
    except NinarowError as exc:
        row["outcome"] = "error"
        row["detail"] = f"{type(exc).__name__}: {exc}"
        row["wall_time"] = f"{time.perf_counter() - start:.3f}"
        return row
    row["outcome"] = result.outcome
    row["steps"] = str(result.steps)
    if result.maker_won:
        row["tau"] = str(result.tau)
        row["m_tau"] = str(result.m_tau)
        row["ratio"] = f"{result.m_tau / job['n']:.6f}"
    row["wall_time"] = f"{time.perf_counter() - start:.3f}"
    return row


def sweep(config, jobs=1):
    """Run the cartesian grid of matches described by config.

    config maps axis names to value lists: variant, n, alpha, m, b,
    maker, breaker (or joint "pairs"), epsilon, seeds, plus an optional
    scalar max_steps.  Returns CSV row dicts keyed by SWEEP_COLUMNS:
    one "match" row per match (errors become outcome="error" rows and
    the sweep continues) followed by one "aggregate" row per parameter
    combination with its Maker win fraction.  Rows are sorted by
    parameter key; wall_time is the only non-deterministic column.
    """
    job_list = _sweep_jobs(config)
    if not job_list:
        return []
    jobs = max(1, int(jobs))
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            rows = pool.map(_sweep_worker, job_list, chunksize=1)
    else:
        rows = [_sweep_worker(job) for job in job_list]

    groups = {}
    for row in rows:
        key = tuple(row[k] for k in _SWEEP_GROUP_KEYS)
        wins, total = groups.get(key, (0, 0))
        if row["outcome"] != "error":
            total += 1
            if row["outcome"] == "maker-win":
                wins += 1
        groups[key] = (wins, total)
    aggregates = []
    for key in sorted(groups):
        wins, total = groups[key]
        agg = {col: "" for col in SWEEP_COLUMNS}
        agg["row_type"] = "aggregate"
        agg.update(zip(_SWEEP_GROUP_KEYS, key))
        agg["win_fraction"] = f"{wins / total:.4f}" if total else ""
        aggregates.append(agg)
    return rows + aggregates


def write_sweep_csv(rows, fh):
    """Write sweep rows (dicts) as CSV with the fixed column order; fh
    is a path or an open text file."""
    if isinstance(fh, (str, bytes)):
        with open(fh, "w", encoding="utf-8", newline="") as out:
            return write_sweep_csv(rows, out)
    writer = csv.DictWriter(fh, fieldnames=list(SWEEP_COLUMNS), restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)

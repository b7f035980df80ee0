"""Point/segment incidence counting, incidence-style bound expressions,
and the reduction from splitting-Breaker match transcripts to the
weighted bin game.

The bound constants are configuration, not theorems: comparisons
against them are monitors that report violations.  All logarithms are
natural.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import geometry
from .board import (
    BREAKER,
    MAKER,
    NEG_INF,
    POS_INF,
    GameMode,
    Segment,
    apply_move,
    new_game,
)
from .errors import ConfigError, InvariantError, UnsupportedTranscriptError
from .geometry import GridPoint
from .harness import eval_schedule, parse_schedule
from .rational import as_fraction, ceil_mul


@dataclass(frozen=True)
class STConfig:
    """Constants for the incidence bounds: C scales the point/segment
    incidence bound, Cprime the M(s) suffix-weight bound."""

    C: float = 2.5
    Cprime: float = 2.5

    def __post_init__(self):
        object.__setattr__(self, "C", float(self.C))
        object.__setattr__(self, "Cprime", float(self.Cprime))
        if not self.C > 0 or not self.Cprime > 0:
            raise ConfigError(
                f"STConfig constants must be positive, got C={self.C}, "
                f"Cprime={self.Cprime}"
            )


_DEFAULT_CFG = STConfig()


def full_line_segment(key):
    """The whole line as a Segment (both bounds open at infinity)."""
    return Segment(line=key, lo=NEG_INF, hi=POS_INF, capacity=POS_INF,
                   maker_count=0)


def _open_interval_int_count(lo, hi):
    """Number of integers strictly between lo and hi (may be infinite)."""
    if lo == NEG_INF or hi == POS_INF:
        return math.inf if lo < hi else 0
    span = int(hi) - int(lo) - 1
    return span if span > 0 else 0


def count_incidences(points, segments):
    """Exact number of (point, segment) containment pairs.

    A point is incident to a segment when it lies on the segment's
    line with line parameter strictly between lo and hi.  Segments
    must pairwise share at most one integer point: two segments of the
    same line whose open intervals overlap in two or more integer
    parameters are rejected as invalid.
    """
    by_line = {}
    for seg in segments:
        by_line.setdefault(seg.line, []).append((seg.lo, seg.hi))
    for key, ivals in by_line.items():
        ivals.sort()
        for i in range(len(ivals)):
            for j in range(i + 1, len(ivals)):
                lo = max(ivals[i][0], ivals[j][0])
                hi = min(ivals[i][1], ivals[j][1])
                if _open_interval_int_count(lo, hi) >= 2:
                    raise ValueError(
                        f"segments on line {key} overlap in more than one "
                        f"point: {ivals[i]} and {ivals[j]}"
                    )

    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if not pts or not by_line:
        return 0
    arr = np.array(pts, np.int64)
    xs = arr[:, 0]
    ys = arr[:, 1]

    by_dir = {}
    for key, ivals in by_line.items():
        by_dir.setdefault(key.direction, []).append((key, ivals))

    total = 0
    for (a, b), lines in by_dir.items():
        cvals = b * xs - a * ys
        order = np.lexsort((ys, xs, cvals))
        csorted = cvals[order]
        for key, ivals in lines:
            lo_i = np.searchsorted(csorted, key.offset, "left")
            hi_i = np.searchsorted(csorted, key.offset, "right")
            if hi_i == lo_i:
                continue
            idx = order[lo_i:hi_i]
            anchor = geometry.line_anchor(key)
            if a == 0:
                params = ys[idx] - anchor.y
            else:
                params = (xs[idx] - anchor.x) // a
            for lo, hi in ivals:
                total += int(
                    np.searchsorted(params, hi, "left")
                    - np.searchsorted(params, lo, "right")
                )
    return total


def szt_bound(p, l, cfg=None):
    """Incidence bound C * p^(2/3) * l^(2/3) + p + l."""
    cfg = cfg or _DEFAULT_CFG
    p = float(p)
    l = float(l)
    return cfg.C * p ** (2.0 / 3.0) * l ** (2.0 / 3.0) + p + l


def szt_rich_count_bound(p, k, cfg=None):
    """Bound C * (p^2/k^3 + p/k) on the number of lines holding at
    least k of p points.  Requires k >= 2."""
    cfg = cfg or _DEFAULT_CFG
    if k < 2:
        raise ValueError(f"szt_rich_count_bound requires k >= 2, got {k}")
    p = float(p)
    k = float(k)
    return cfg.C * (p * p / (k * k * k) + p / k)


def szt_M(s, T, alpha, bprime_T, cfg=None):
    """Suffix-weight cap Cprime * ((T^alpha s)^(2/3) * (b's+1)^(2/3)
    + T^alpha s + b's + 1), with M(0) = 0."""
    cfg = cfg or _DEFAULT_CFG
    s = float(s)
    if s < 0:
        raise ValueError(f"szt_M requires s >= 0, got {s}")
    if s == 0:
        return 0.0
    ta = float(T) ** float(alpha)
    pts = ta * s
    lines = float(bprime_T) * s + 1.0
    return cfg.Cprime * (
        pts ** (2.0 / 3.0) * lines ** (2.0 / 3.0) + pts + lines
    )


def c_upper_value(T, alpha, b_T):
    """(T^((2a+1)/3) * b_T^(2/3) + T^a * ln T + b_T * ln T) / b_T.

    Requires T >= 2 and b_T >= 1; natural logarithm.
    """
    T = float(T)
    alpha = float(alpha)
    b_T = float(b_T)
    if T < 2:
        raise ValueError(f"c_upper_value requires T >= 2, got {T}")
    if b_T < 1:
        raise ValueError(f"c_upper_value requires b_T >= 1, got {b_T}")
    ln_t = math.log(T)
    return (
        T ** ((2.0 * alpha + 1.0) / 3.0) * b_T ** (2.0 / 3.0)
        + T ** alpha * ln_t
        + b_T * ln_t
    ) / b_T


# ---------------------------------------------------------------------------
# transcript -> bin game reduction


class SegmentEntry(NamedTuple):
    line: object
    lo: float
    hi: float
    count: int
    weight: int


class ReductionStep(NamedTuple):
    """One timestep of the reduction.

    weight_added sums Maker-phase weight growth plus any (violating)
    weight carried by Breaker-phase births; kills and births list the
    segment keys that vanished/appeared during the Breaker phase, with
    birth weights (expected 0); segments snapshots the tracked set
    after the timestep.
    """

    t: int
    weight_added: int
    kill_count: int
    killed_weight: int
    births: tuple
    nonzero_births: int
    total_weight: int
    segments: tuple


class SuffixRow(NamedTuple):
    s: int
    weight_added: int
    szt_M: float
    slack: float


@dataclass
class ReductionTrace:
    """Outcome of reduce_to_bingame.

    steps holds one ReductionStep per timestep; rows the per-s suffix
    check (s, weight added over the last s timesteps, szt_M(s), slack);
    violations lists every broken invariant in replay order.  ok means
    no violations: suffix sums within szt_M, all Breaker-phase births
    weightless, and (when Maker won) a final segment of weight >= the
    half offset ceil(epsilon*n/2).
    """

    n: int
    epsilon: Fraction
    half_offset: int
    T: int
    alpha: Fraction
    b_T: int
    bprime_T: float
    steps: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    maker_won: bool = False
    final_weight: int = None

    @property
    def ok(self):
        return not self.violations


def _active_snapshot(state):
    return {
        (seg.line, seg.lo, seg.hi): seg.maker_count
        for seg in state.active_segments()
    }


def reduce_to_bingame(transcript, epsilon, n, cfg=None):
    """Replay a splitting-Breaker transcript as a weighted bin game.

    Every active segment is a bin holding weight max(maker_count -
    ceil(epsilon*n/2), 0).  Maker turns add weight (growth of tracked
    segments plus newborn segments); Breaker turns kill the bins of the
    segments they split, and the resulting sub-segments must enter with
    weight 0.  Checks, for every s, that the weight added over the last
    s timesteps stays within szt_M(s, T, alpha, b'(T)), where b'(T) =
    (epsilon/4) * b(T) is the splitting Breaker's per-turn segment
    rate.  If Maker won, the winning segment's bin must hold at least
    the half offset.  All findings land in the returned ReductionTrace;
    nothing raises on a broken bound.

    Raises UnsupportedTranscriptError unless the transcript's Breaker
    is the splitting strategy, ConfigError when the header lacks the
    schedule data the bounds need.
    """
    cfg = cfg or _DEFAULT_CFG
    hdr = transcript.header
    breaker_name = hdr.get("breaker")
    if breaker_name != "split-top":
        raise UnsupportedTranscriptError(
            f"reduce_to_bingame needs a split-top transcript, got breaker "
            f"{breaker_name!r}"
        )
    n = int(n)
    epsilon = as_fraction(epsilon)
    half = ceil_mul(epsilon / 2, n)
    if hdr.get("alpha") is None:
        raise ConfigError(
            "transcript has no power-law Maker schedule; szt_M needs alpha"
        )
    alpha = as_fraction(hdr["alpha"])
    b_sched = parse_schedule(hdr["b"])

    mode = GameMode(
        variant=hdr["variant"],
        n=int(hdr["n"]),
        epsilon=as_fraction(hdr["epsilon"]),
        directed_marks_occupy=bool(hdr.get("directed_marks_occupy", True)),
    )
    state = new_game(mode)

    timesteps = list(transcript.iter_timesteps())
    if not timesteps:
        raise ConfigError("transcript has no timesteps")
    T = timesteps[-1][0]
    b_T = eval_schedule(b_sched, T)
    bprime_T = float(epsilon) * b_T / 4.0

    trace = ReductionTrace(
        n=n, epsilon=epsilon, half_offset=half, T=T, alpha=alpha,
        b_T=b_T, bprime_T=bprime_T,
    )

    def weight(count):
        return count - half if count > half else 0

    tracked = {}
    running_total = 0
    running_added = 0
    running_killed = 0

    for t, maker_moves, breaker_moves in timesteps:
        state.t = t
        apply_move(state, MAKER, list(maker_moves))
        after_maker = _active_snapshot(state)
        added = 0
        for key, cnt in after_maker.items():
            prev = tracked.get(key)
            if prev is not None and cnt < prev:
                trace.violations.append(
                    f"t={t}: tracked segment {key} count fell {prev} -> {cnt} "
                    f"on a Maker turn"
                )
            grow = weight(cnt) - (weight(prev) if prev is not None else 0)
            if grow > 0:
                added += grow
        for key in tracked:
            if key not in after_maker:
                trace.violations.append(
                    f"t={t}: tracked segment {key} vanished on a Maker turn"
                )

        apply_move(state, BREAKER, list(breaker_moves))
        after_breaker = _active_snapshot(state)
        kills = []
        killed_weight = 0
        for key, cnt in after_maker.items():
            if key not in after_breaker:
                kills.append(key)
                killed_weight += weight(cnt)
        births = []
        nonzero = 0
        for key, cnt in after_breaker.items():
            if key not in after_maker:
                w = weight(cnt)
                births.append(SegmentEntry(key[0], key[1], key[2], cnt, w))
                if w > 0:
                    nonzero += 1
                    added += w
                    trace.violations.append(
                        f"t={t}: sub-segment {key} born with weight {w} "
                        f"(count {cnt} > half offset {half})"
                    )
            elif cnt != after_maker[key]:
                trace.violations.append(
                    f"t={t}: segment {key} count changed on a Breaker turn"
                )

        tracked = after_breaker
        running_added += added
        running_killed += killed_weight
        running_total = sum(weight(c) for c in tracked.values())
        if running_total != running_added - running_killed:
            raise InvariantError(
                f"t={t}: weight books off: total {running_total} != added "
                f"{running_added} - killed {running_killed}"
            )
        trace.steps.append(ReductionStep(
            t=t,
            weight_added=added,
            kill_count=len(kills),
            killed_weight=killed_weight,
            births=tuple(births),
            nonzero_births=nonzero,
            total_weight=running_total,
            segments=tuple(
                SegmentEntry(key[0], key[1], key[2], cnt, weight(cnt))
                for key, cnt in sorted(tracked.items())
            ),
        ))

    adds = [step.weight_added for step in trace.steps]
    suffix = 0
    for s in range(1, len(adds) + 1):
        suffix += adds[-s]
        bound = szt_M(s, T, alpha, bprime_T, cfg)
        trace.rows.append(SuffixRow(s, suffix, bound, bound - suffix))
        if suffix > bound:
            trace.violations.append(
                f"s={s}: weight added over the last {s} timesteps is "
                f"{suffix} > szt_M = {bound:.3f}"
            )

    outcome = transcript.outcome or {}
    trace.maker_won = outcome.get("outcome") == "maker-win"
    if trace.maker_won:
        win_keys = {
            (seg.line, seg.lo, seg.hi) for seg in state.winning_segments()
        }
        final = max(
            (weight(cnt) for key, cnt in tracked.items() if key in win_keys),
            default=0,
        )
        trace.final_weight = final
        if final < half:
            trace.violations.append(
                f"Maker won but the winning segment's bin holds {final} "
                f"< half offset {half}"
            )
    return trace


REDUCTION_COLUMNS = ("s", "weight_added", "szt_M", "slack")


def write_reduction_csv(trace, fh):
    """Write the per-s suffix rows of a ReductionTrace as CSV; fh is a
    path or an open text file."""
    if isinstance(fh, (str, bytes)):
        with open(fh, "w", encoding="utf-8", newline="") as out:
            return write_reduction_csv(trace, out)
    writer = csv.writer(fh)
    writer.writerow(REDUCTION_COLUMNS)
    for row in trace.rows:
        writer.writerow(
            [row.s, row.weight_added, f"{row.szt_M:.6f}", f"{row.slack:.6f}"]
        )

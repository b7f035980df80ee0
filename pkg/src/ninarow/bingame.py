"""Weighted bin game: an adversary adds weight to bins under a suffix
budget, the heaviest bins are killed each turn, one bin survives.

All arithmetic runs on Fractions so the bounds hold exactly; public
results are floats.  Weight profiles are indexed w(1..T) and the
budget M is kept as its increment list dM(1..T), M(s) = sum of the
first s increments.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import BinConstraintError, InvalidScheduleError, InvariantError
from .rational import as_fraction


def _as_weight(value, what):
    w = as_fraction(value)
    if w < 0:
        raise InvalidScheduleError(f"{what} must be non-negative, got {value!r}")
    return w


@dataclass(frozen=True)
class BinSchedule:
    """Game parameters: T turns, b(t) kills per turn, budget increments
    dM(s) = M(s) - M(s-1).  The game starts with 1 + sum(b) bins."""

    T: int
    b: tuple
    deltaM: tuple

    def __init__(self, T, b, deltaM):
        T = int(T)
        if T < 1:
            raise InvalidScheduleError(f"T must be >= 1, got {T}")
        b = tuple(int(x) for x in b)
        if len(b) != T:
            raise InvalidScheduleError(f"need {T} kill counts, got {len(b)}")
        for t, x in enumerate(b, 1):
            if x < 0:
                raise InvalidScheduleError(f"b({t}) = {x} < 0", index=t)
        dm = tuple(_as_weight(x, f"deltaM({s})") for s, x in enumerate(deltaM, 1))
        if len(dm) != T:
            raise InvalidScheduleError(f"need {T} budget increments, got {len(dm)}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "deltaM", dm)

    @property
    def bins(self):
        return 1 + sum(self.b)

    def M(self, s):
        """Budget for the last s turns (M(0) = 0)."""
        if not 0 <= s <= self.T:
            raise InvalidScheduleError(f"suffix length {s} outside 0..{self.T}")
        return sum(self.deltaM[:s], Fraction(0))


@dataclass
class BinState:
    """Live bin weights, completed turn count, and per-turn spend."""

    weights: list
    turn: int = 0
    weight_spent: list = field(default_factory=list)


def new_bin_game(sched):
    return BinState(weights=[Fraction(0)] * sched.bins)


def bin_step(state, sched, additions):
    """Play one turn: add weights to live bins, then kill the b(t)
    heaviest (ties: lowest index first).  Returns the new state.

    additions maps live-bin indices (into state.weights) to added
    weight.  A turn whose trailing spend cannot be completed within
    the budget is rejected: the sum over the window of the last s
    turns (window ending now) must stay within M(s + T - t), which at
    t = T is the game's exact suffix constraint.  Violations raise
    BinConstraintError carrying the smallest bad window length.
    """
    t = state.turn + 1
    if t > sched.T:
        raise InvalidScheduleError(f"game is over after turn {sched.T}")
    live = len(state.weights)
    adds = {}
    for idx, val in additions.items():
        idx = int(idx)
        if not 0 <= idx < live:
            raise BinConstraintError(f"bin {idx} is not live (have {live})")
        adds[idx] = adds.get(idx, Fraction(0)) + _as_weight(val, f"addition to bin {idx}")
    w_t = sum(adds.values(), Fraction(0))
    spent = state.weight_spent + [w_t]
    trailing = Fraction(0)
    for s in range(1, t + 1):
        trailing += spent[t - s]
        if trailing > sched.M(min(s + sched.T - t, sched.T)):
            raise BinConstraintError(
                f"turn {t}: weight {trailing} over the last {s} turns exceeds "
                f"the completable budget M({s + sched.T - t}) = "
                f"{sched.M(s + sched.T - t)}",
                suffix=s,
            )
    weights = list(state.weights)
    for idx, val in adds.items():
        weights[idx] += val
    kills = sched.b[t - 1]
    if kills:
        before_avg = sum(weights, Fraction(0)) / len(weights)
        order = sorted(range(len(weights)), key=lambda i: (-weights[i], i))
        for idx in sorted(order[:kills], reverse=True):
            del weights[idx]
        after_avg = sum(weights, Fraction(0)) / len(weights)
        if after_avg > before_avg:
            raise InvariantError(
                f"killing the {kills} largest bins raised the average "
                f"({before_avg} -> {after_avg})"
            )
    return BinState(weights=weights, turn=t, weight_spent=spent)


def average_bound(w, b, T):
    """First bound: the survivor's weight is at most
    sum_s w(s) / (sum_{t>=s} b(t) + 1)."""
    T = int(T)
    if len(w) != T or len(b) != T:
        raise InvalidScheduleError(
            f"profile lengths {len(w)}, {len(b)} do not match T={T}"
        )
    total = Fraction(0)
    suffix_b = 0
    parts = []
    for s in range(T, 0, -1):
        suffix_b += int(b[s - 1])
        parts.append(as_fraction(w[s - 1]) / (suffix_b + 1))
    for part in parts:
        total += part
    return float(total)


def solo_bound(deltaM, b, T):
    """Solo-bin bound: at most (2/b(T)) * sum_t dM(t)/t.

    b may be a single integer (constant kill schedule, for which the
    bound's hypothesis holds automatically) or the full list, in which
    case the hypothesis 2*sum_{t>=s} b(t) >= b(T)*(T-s+1) is checked
    and its first failing s reported.
    """
    T = int(T)
    if len(deltaM) != T:
        raise InvalidScheduleError(f"need {T} budget increments, got {len(deltaM)}")
    if isinstance(b, (list, tuple)):
        if len(b) != T:
            raise InvalidScheduleError(f"need {T} kill counts, got {len(b)}")
        blist = [int(x) for x in b]
        bT = blist[-1]
        if bT < 1:
            raise InvalidScheduleError(f"b(T) must be >= 1, got {bT}")
        suffix = 0
        for s in range(T, 0, -1):
            suffix += blist[s - 1]
            if 2 * suffix < bT * (T - s + 1):
                raise InvalidScheduleError(
                    f"solo-bin hypothesis fails at s={s}: "
                    f"2*sum b = {2 * suffix} < b(T)*(T-s+1) = {bT * (T - s + 1)}",
                    index=s,
                )
    else:
        bT = int(b)
        if bT < 1:
            raise InvalidScheduleError(f"b(T) must be >= 1, got {bT}")
    total = Fraction(0)
    for t in range(1, T + 1):
        total += as_fraction(deltaM[t - 1]) / t
    return float(Fraction(2, bT) * total)


class BinTraceEntry(NamedTuple):
    turn: int
    added: float
    share: float
    live_before: int
    live_after: int


def equal_spread_play(sched):
    """The spreading play: on turn s spend dM(T-s+1), split equally
    over the live bins.  Returns (final_weight, trace); the final
    weight equals average_bound of the play's own spend profile."""
    state = new_bin_game(sched)
    trace = []
    for s in range(1, sched.T + 1):
        live = len(state.weights)
        w_s = sched.deltaM[sched.T - s]
        share = w_s / live
        state = bin_step(state, sched, {i: share for i in range(live)})
        trace.append(
            BinTraceEntry(
                turn=s,
                added=float(w_s),
                share=float(share),
                live_before=live,
                live_after=len(state.weights),
            )
        )
    if len(state.weights) != 1:
        raise InvariantError(f"{len(state.weights)} bins survived, expected 1")
    return float(state.weights[0]), trace


def validate_play(w, sched):
    """Check a full spend profile against the suffix budget: the last s
    turns may add at most M(s).  Returns None when legal, else the
    smallest violating s."""
    if len(w) != sched.T:
        raise InvalidScheduleError(
            f"profile length {len(w)} does not match T={sched.T}"
        )
    trailing = Fraction(0)
    for s in range(1, sched.T + 1):
        trailing += as_fraction(w[sched.T - s])
        if trailing > sched.M(s):
            return s
    return None


def random_play(sched, rng, max_targets=3):
    """A random legal play: each turn spends a random fraction of the
    largest completable amount on a few random live bins.  Returns
    (final_weight, spend_profile)."""
    state = new_bin_game(sched)
    for t in range(1, sched.T + 1):
        cap = None
        trailing = Fraction(0)
        for s in range(1, t + 1):
            if s > 1:
                trailing += as_fraction(state.weight_spent[t - s])
            room = sched.M(min(s + sched.T - t, sched.T)) - trailing
            cap = room if cap is None else min(cap, room)
        w_t = cap * Fraction(rng.randint(0, 16), 16)
        live = len(state.weights)
        targets = rng.sample(range(live), min(live, rng.randint(1, max_targets)))
        additions = {}
        rest = w_t
        for i, idx in enumerate(targets):
            if i == len(targets) - 1:
                additions[idx] = rest
            else:
                part = rest * Fraction(rng.randint(0, 8), 8)
                additions[idx] = part
                rest -= part
        state = bin_step(state, sched, additions)
    return float(state.weights[0]), [float(x) for x in state.weight_spent]

"""Command-line front end.

Subcommands: simulate (turn-based match), batched (one-shot set
games), bingame (weighted bin game), analyze (transcript reduction
plus incidence monitors), sweep (parameter grid to CSV), replay
(transcript audit).

Exit codes: 0 success, 1 invalid configuration or input, 2 illegal
move or broken budget, 3 internal invariant violation.
"""

import argparse
import json
import random
import sys

from . import bingame
from .board import MAKER
from .errors import (
    BinConstraintError,
    BudgetExceededError,
    ConfigError,
    IllegalMoveError,
    InvalidScheduleError,
    InvariantError,
    SamplingFailureError,
    UnsupportedTranscriptError,
)
from .geometry import rich_lines
from .harness import (
    Transcript,
    eval_schedule,
    parse_schedule,
    parse_strategy,
    replay_verify,
    run_batched,
    run_match,
    sweep,
    write_sweep_csv,
)
from .incidence import (
    STConfig,
    count_incidences,
    full_line_segment,
    reduce_to_bingame,
    szt_bound,
    szt_rich_count_bound,
    write_reduction_csv,
)
from .rational import as_fraction


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as configuration errors so
    they exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _add_simulate(sub):
    p = sub.add_parser("simulate", help="run one turn-based match")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", default="1", help="exponent for the default Maker schedule")
    p.add_argument("--m-family", dest="m_family", default=None,
                   help="Maker schedule, e.g. power:alpha=1/2,c=1")
    p.add_argument("--b-family", dest="b_family", required=True,
                   help="Breaker schedule, e.g. clog:c=5")
    p.add_argument("--maker", default="greedy")
    p.add_argument("--breaker", default="split-top")
    p.add_argument("--epsilon", default=None)
    p.add_argument("--max-steps", dest="max_steps", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="transcript path")
    p.set_defaults(func=_cmd_simulate)


def _cmd_simulate(args):
    m = args.m_family or f"power:alpha={args.alpha},c=1"
    maker = parse_strategy(args.maker, "maker")
    breaker = parse_strategy(args.breaker, "breaker")
    result, transcript = run_match(
        "standard", args.n, m, args.b_family, maker, breaker,
        max_steps=args.max_steps, seed=args.seed, epsilon=args.epsilon,
    )
    if args.out:
        transcript.save(args.out)
    line = (
        f"outcome={result.outcome} tau={result.tau} m_tau={result.m_tau} "
        f"steps={result.steps}"
    )
    if args.out:
        line += f" transcript={args.out}"
    print(line)
    return 0


def _add_batched(sub):
    p = sub.add_parser("batched", help="run one batched set-vs-set game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", default="1/2")
    p.add_argument("--epsilon", default="1/4")
    p.add_argument("--mode", choices=("standard", "directed"), default="standard")
    p.add_argument("--maker", default="rectangle")
    p.add_argument("--breaker", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--T", type=int, default=None,
                   help="horizon; default: first T with ceil(T**alpha) >= n/2")
    p.add_argument("--b", default=None,
                   help="Breaker schedule; required by budgeted breakers")
    p.set_defaults(func=_cmd_batched)


def _cmd_batched(args):
    result = run_batched(
        args.mode, args.n, args.alpha, args.epsilon, args.maker, args.breaker,
        seed=args.seed, T=args.T, b=args.b,
    )
    s = result.summary[0]
    print(
        f"outcome={result.outcome} T={result.steps} maker_points={s.maker_points} "
        f"breaker_marks={s.breaker_points} best_free_count={s.max_count}"
    )
    return 0


def _add_bingame(sub):
    p = sub.add_parser("bingame", help="play the weighted bin game")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--b", required=True,
                   help="kills per turn: schedule descriptor or comma list")
    p.add_argument("--dM", required=True,
                   help="budget increments: schedule descriptor or comma list")
    p.add_argument("--play", choices=("equal-spread", "random", "explicit"),
                   default="equal-spread")
    p.add_argument("--seed", type=int, default=0, help="for --play random")
    p.add_argument("--spend", default=None,
                   help="comma list of per-turn totals for --play explicit")
    p.set_defaults(func=_cmd_bingame)


def _values_over_turns(text, T, what):
    """A per-turn value list from a schedule descriptor or a bare comma
    list; lists need not be monotone, unlike explicit schedules."""
    body = text.split(":", 1)[-1] if ":" in text else text
    if ":" in text or not all(
        _is_number(tok) for tok in body.split(",") if tok
    ):
        sched = parse_schedule(text)
        return [eval_schedule(sched, t) for t in range(1, T + 1)]
    vals = [tok.strip() for tok in text.split(",") if tok.strip()]
    if len(vals) != T:
        raise InvalidScheduleError(f"{what}: need {T} values, got {len(vals)}")
    return vals


def _is_number(tok):
    try:
        as_fraction(tok.strip())
        return True
    except (ValueError, ConfigError):
        return False


def _explicit_play(sched, spend):
    """Spread user-chosen per-turn totals equally over the live bins."""
    state = bingame.new_bin_game(sched)
    for t in range(1, sched.T + 1):
        live = len(state.weights)
        share = as_fraction(spend[t - 1]) / live
        state = bingame.bin_step(state, sched, {i: share for i in range(live)})
    final = max(state.weights) if state.weights else 0
    return float(final), [float(x) for x in state.weight_spent]


def _cmd_bingame(args):
    T = args.T
    b = [int(v) for v in _values_over_turns(args.b, T, "--b")]
    dM = _values_over_turns(args.dM, T, "--dM")
    sched = bingame.BinSchedule(T, b, dM)
    if args.play == "equal-spread":
        final, trace = bingame.equal_spread_play(sched)
        profile = [entry.added for entry in trace]
    elif args.play == "random":
        final, profile = bingame.random_play(sched, random.Random(args.seed))
    else:
        if args.spend is None:
            raise ConfigError("--play explicit needs --spend")
        spend = [tok.strip() for tok in args.spend.split(",") if tok.strip()]
        if len(spend) != T:
            raise ConfigError(f"--spend: need {T} totals, got {len(spend)}")
        final, profile = _explicit_play(sched, spend)
    avg = bingame.average_bound(profile, sched.b, T)
    try:
        solo = f"{bingame.solo_bound(sched.deltaM, list(sched.b), T):.9g}"
    except InvalidScheduleError:
        solo = "n/a"
    print(
        f"final_weight={final:.9g} bins={sched.bins} "
        f"average_bound={avg:.9g} solo_bound={solo}"
    )
    return 0


def _add_analyze(sub):
    p = sub.add_parser("analyze",
                       help="reduce a transcript to the bin game + monitors")
    p.add_argument("--transcript", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--C", type=float, default=2.5)
    p.add_argument("--Cprime", type=float, default=2.5)
    p.add_argument("--out", default=None, help="per-suffix CSV path")
    p.set_defaults(func=_cmd_analyze)


_MONITOR_POINT_CAP = 20000


def _cmd_analyze(args):
    transcript = Transcript.load(args.transcript)
    cfg = STConfig(C=args.C, Cprime=args.Cprime)
    trace = reduce_to_bingame(transcript, args.epsilon, args.n, cfg)
    print(
        f"T={trace.T} b_T={trace.b_T} bprime_T={trace.bprime_T:.6g} "
        f"half_offset={trace.half_offset}"
    )
    min_slack = min((row.slack for row in trace.rows), default=float("inf"))
    print(
        f"maker_won={trace.maker_won} final_weight={trace.final_weight} "
        f"min_slack={min_slack:.6f}"
    )
    for v in trace.violations:
        print(f"VIOLATION: {v}")
    print(f"reduction={'ok' if trace.ok else 'violated'}")

    pts = sorted({
        (int(p[0]), int(p[1]))
        for rec in transcript.moves if rec.player == MAKER
        for p in rec.moves
    })
    violated = False
    if len(pts) > _MONITOR_POINT_CAP:
        print(f"monitors skipped: {len(pts)} points > {_MONITOR_POINT_CAP}")
    else:
        for k in (3, 8, 32):
            rich = rich_lines(pts, k)
            bound = szt_rich_count_bound(len(pts), k, cfg)
            ok = len(rich) <= bound
            violated |= not ok
            print(
                f"monitor rich-lines k={k}: count={len(rich)} "
                f"bound={bound:.3f} {'ok' if ok else 'VIOLATION'}"
            )
            if rich:
                segs = [full_line_segment(key) for key, _ in rich]
                inc = count_incidences(pts, segs)
                ibound = szt_bound(len(pts), len(segs), cfg)
                ok = inc <= ibound
                violated |= not ok
                print(
                    f"monitor incidences k={k}: count={inc} "
                    f"bound={ibound:.3f} {'ok' if ok else 'VIOLATION'}"
                )
    print(f"monitors={'violated' if violated else 'ok'}")
    if args.out:
        write_reduction_csv(trace, args.out)
        print(f"csv={args.out}")
    return 0


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="run a parameter grid, write CSV")
    p.add_argument("--config", required=True, help="JSON grid description")
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)


def _cmd_sweep(args):
    with open(args.config, encoding="utf-8") as fh:
        try:
            config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad sweep config {args.config}: {exc}")
    rows = sweep(config, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_sweep_csv(rows, fh)
    print(f"rows={len(rows)} csv={args.out}")
    return 0


def _add_replay(sub):
    p = sub.add_parser("replay", help="audit a transcript")
    p.add_argument("--transcript", required=True)
    p.set_defaults(func=_cmd_replay)


def _cmd_replay(args):
    transcript = Transcript.load(args.transcript)
    report = replay_verify(transcript)
    if report.ok:
        print("replay ok")
        return 0
    print(f"replay mismatch at t={report.timestep}: {report.reason}")
    return 2 if "illegal" in report.reason else 3


def _build_parser():
    parser = _Parser(prog="ninarow",
                     description="n-in-a-row Maker-Breaker experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_batched(sub)
    _add_bingame(sub)
    _add_analyze(sub)
    _add_sweep(sub)
    _add_replay(sub)
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, InvalidScheduleError, SamplingFailureError,
            UnsupportedTranscriptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IllegalMoveError, BudgetExceededError, BinConstraintError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

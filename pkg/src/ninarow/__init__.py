"""Maker-Breaker n-in-a-row on the integer grid: rules engine,
strategies, batched set games, the weighted bin game, incidence
monitors, and an experiment harness."""

from .bingame import (
    BinSchedule,
    BinState,
    average_bound,
    bin_step,
    equal_spread_play,
    new_bin_game,
    random_play,
    solo_bound,
    validate_play,
)
from .board import (
    BREAKER,
    MAKER,
    VARIANTS,
    BreakerMark,
    GameMode,
    GameState,
    Segment,
    apply_move,
    audit_index,
    max_breaker_free_counts,
    new_game,
)
from .errors import (
    BinConstraintError,
    BudgetExceededError,
    ConfigError,
    IllegalMoveError,
    InvalidScheduleError,
    InvariantError,
    NinarowError,
    SamplingFailureError,
    UnsupportedTranscriptError,
)
from .geometry import Direction, GridPoint, LineKey, collinear_groups, rich_lines
from .harness import (
    ENGINE_VERSION,
    MatchResult,
    ReplayReport,
    Schedule,
    Transcript,
    default_max_steps,
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
    ReductionTrace,
    STConfig,
    c_upper_value,
    count_incidences,
    reduce_to_bingame,
    szt_M,
    szt_bound,
    szt_rich_count_bound,
    write_reduction_csv,
)
from .strategies import (
    BATCHED_BREAKER_BUILDERS,
    BATCHED_MAKER_BUILDERS,
    BREAKER_STRATEGIES,
    MAKER_STRATEGIES,
    GreedyLineMaker,
    IdleBreaker,
    ParallelLinesMaker,
    RandomBreaker,
    SplitTopBreaker,
    StrategyContext,
    eps_split,
)

__version__ = ENGINE_VERSION

__all__ = [name for name in dir() if not name.startswith("_")]

"""Exception types shared across the engine, strategies, and harness."""


class NinarowError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(NinarowError):
    """Invalid game, schedule, or strategy configuration."""


class IllegalMoveError(NinarowError):
    """A move violated the rules; the message names the offending point."""

    def __init__(self, message, point=None, strategy=None):
        if strategy is not None:
            message = f"[{strategy}] {message}"
        super().__init__(message)
        self.point = point
        self.strategy = strategy


class BudgetExceededError(NinarowError):
    """A strategy or builder needed more points than its budget allows."""

    def __init__(self, required, available, message=None):
        if message is None:
            message = f"budget exceeded: required {required}, available {available}"
        super().__init__(message)
        self.required = required
        self.available = available


class BinConstraintError(NinarowError):
    """A bin-game play violates the completable-weight constraint.

    ``suffix`` is the smallest window length s whose trailing weight sum
    exceeds its cap.
    """

    def __init__(self, message, suffix=None):
        super().__init__(message)
        self.suffix = suffix


class InvalidScheduleError(NinarowError):
    """A schedule failed validation; carries the failing turn/suffix index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SamplingFailureError(NinarowError):
    """Rejection sampling exhausted its retries."""

    def __init__(self, message, retries=0, failed_hit=0, failed_size=0):
        super().__init__(message)
        self.retries = retries
        self.failed_hit = failed_hit
        self.failed_size = failed_size


class UnsupportedTranscriptError(NinarowError):
    """The transcript cannot be analyzed by the requested reduction."""


class InvariantError(NinarowError):
    """An internal consistency check failed (engine bug, not user error)."""

"""Exception types shared across the toolkit."""


class RankDeficiencyError(RuntimeError):
    """A column set turned out to be numerically rank deficient."""


class InvariantViolationError(RuntimeError):
    """A runtime invariant check failed during recovery."""

"""Exception types shared across the package."""


class RpdcovError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RpdcovError, ValueError):
    """Invalid input: wrong shape, too few observations, or non-finite data."""


class RankDegeneracyError(ValidationError):
    """A column has fewer than two distinct values, so ranks are degenerate."""


class DegenerateDataError(RpdcovError):
    """Pairwise-distance sums vanish; a moment-matched Gamma law cannot be fit."""


class SingularCovarianceError(RpdcovError):
    """A covariance (or rank-correlation) block is numerically singular."""

    def __init__(self, message: str, condition_number: float):
        super().__init__(f"{message} (condition number {condition_number:.3e})")
        self.condition_number = condition_number

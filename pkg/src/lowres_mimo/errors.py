"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid scenario parameters (bad bit count, pilot length, profile, ...)."""


class NumericalRankError(ValueError):
    """A Gram matrix is too ill-conditioned to invert reliably."""


class ValidationFailure(AssertionError):
    """An oracle/property suite did not pass."""

"""Exception types raised across the package."""


class NumericalError(ArithmeticError):
    """A numerical routine failed to converge or produced a non-finite value."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateError(ValueError):
    """Input is valid in shape but rank-deficient for the requested construction."""


class UnstableQueueError(ValueError):
    """An infinite relaying queue has no steady state (arrival rate >= departure rate)."""


class ConfigError(ValueError):
    """A scenario configuration failed validation."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message

"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateInputError(DomainError):
    """Input signal has zero magnitude, so its phase is undefined."""


class QuadratureError(RuntimeError):
    """A numerical integral failed to converge.

    Carries the best value obtained and the achieved error estimate.
    """

    def __init__(self, message, value=None, est_error=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error


class BracketError(RuntimeError):
    """Root bracketing failed; carries the last bracket tried."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ChannelValidityWarning(UserWarning):
    """Parameters are outside the asymptotic validity region of the model."""

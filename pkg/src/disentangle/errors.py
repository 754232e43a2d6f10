"""Exception hierarchy shared by all modules."""


class DisentangleError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class InvalidParameterError(DisentangleError, ValueError):
    pass


class ConfigError(InvalidParameterError):
    """Raised when a configuration document cannot be parsed or validated."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class ConvergenceError(DisentangleError, ArithmeticError):
    """A quadrature did not reach its tolerance within the node cap."""

    def __init__(self, message, achieved_error):
        self.achieved_error = achieved_error
        super().__init__(f"{message} (achieved error {achieved_error:.3e})")


class UnsupportedConfigurationError(DisentangleError):
    pass


class InconclusiveError(DisentangleError):
    pass

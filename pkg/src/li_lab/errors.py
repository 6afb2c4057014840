"""Exception hierarchy shared by all li_lab modules."""


class LiLabError(Exception):
    """Base class for every error raised by li_lab."""


class PoleError(LiLabError, ValueError):
    """Argument sits on a pole of the requested function."""


class PrecisionError(LiLabError):
    """The requested accuracy cannot be met at the given working precision."""


class NearZeroError(LiLabError, ArithmeticError):
    """A divisor is indistinguishable from zero within its error bound."""


class ZeroTableError(LiLabError, ValueError):
    """A zeros file or zero table failed parsing or validation."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(LiLabError, ValueError):
    """Argument outside the implemented domain of an operation."""


class ConvergenceError(LiLabError):
    """An iterative or quadrature scheme failed to settle."""

"""Exception types raised across the package."""


class ChebBvpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ChebBvpError):
    """Malformed expression source; carries the byte offset of the problem."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class EvalError(ChebBvpError):
    """Numeric evaluation of an expression failed (log of a non-positive
    number, division by zero, missing u value, ...)."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class ProblemError(ChebBvpError):
    """The problem is structurally out of scope: nonlinear left-hand side,
    derivative order other than 2, derivatives of u on the right-hand side."""


class SingularSystemError(ChebBvpError):
    """A linear system could not be solved; names the failing pivot."""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class ConvergenceError(ChebBvpError):
    """Fixed-point iteration did not converge.  Carries the last iterate and
    the history of successive-iterate differences for diagnosis."""

    def __init__(self, message, last_iterate=None, history=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.history = list(history) if history is not None else []


class PrecisionUnreachableError(ChebBvpError):
    """Adaptive refinement hit its point-count cap before the requested
    precision; carries the best successive difference achieved."""

    def __init__(self, message, best_difference=None):
        super().__init__(message)
        self.best_difference = best_difference

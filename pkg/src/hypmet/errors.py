"""Exception types shared across the package."""


class HypmetError(Exception):
    """Base class for all package errors."""


class DomainError(HypmetError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GluingError(HypmetError, ValueError):
    """A gluing specification is malformed or inconsistent."""


class NumericalError(HypmetError, RuntimeError):
    """A numerical routine failed to reach its accuracy target."""


class ConsistencyError(HypmetError, RuntimeError):
    """An internal invariant guaranteed by the theory was violated.

    Raising this signals a bug or a tolerance problem, not bad user input.
    """


class UnsupportedAngleTypeError(HypmetError, ValueError):
    """Volume evaluation requested for an angle vector it is not defined for."""


class NotPositiveFeasibleError(HypmetError, ValueError):
    """A solve was requested for cone angles without a positive angle assignment."""


class MaxIterationsError(NumericalError):
    """The descent loop hit its iteration budget before converging."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class LineSearchError(NumericalError):
    """The backtracking line search could not find an acceptable step."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

"""Exception hierarchy shared by all modules."""


class PTCoupledError(Exception):
    """Base class for library errors."""


class InvalidArgumentError(PTCoupledError, ValueError):
    pass


class NumericalFailureError(PTCoupledError, ArithmeticError):
    """An iterative solver did not reach its stopping criterion."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateModeError(PTCoupledError):
    """Requested mode frequency is repeated (exceptional or degenerate point)."""


class SingularParametersError(PTCoupledError, ZeroDivisionError):
    pass


class CapacityError(PTCoupledError):
    """Polynomial degree would exceed the configured bound."""

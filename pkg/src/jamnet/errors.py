"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation supports."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature failed to converge.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (last partial sum, number of terms, the sub-integral that failed, ...).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class EmptyNetworkError(RuntimeError):
    """A point pattern with no points was used where one is required."""


class SpecError(ValueError):
    """An experiment description is invalid."""

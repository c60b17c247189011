"""Exception types shared across the library."""


class GrolabError(Exception):
    """Base class for all library errors."""


class DomainError(GrolabError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class FeasibilityError(GrolabError, ValueError):
    """A profile violates a constraint (moment mismatch, range, tails).

    Carries the offending residual when one is available.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class AccuracyError(GrolabError, RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best estimate and the error bound actually achieved.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class InternalCheckError(GrolabError, RuntimeError):
    """A condition that is mathematically guaranteed failed numerically.

    Raised e.g. when the moment-repair capacity bound is violated; seeing
    this exception indicates a bug, not bad input.
    """

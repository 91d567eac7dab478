"""Exception types shared across the package."""
from __future__ import annotations


class InvalidInputError(ValueError):
    """A physical constant or numerical parameter is outside its valid domain."""


class ConvergenceError(ArithmeticError):
    """Adaptive quadrature could not meet its tolerance within the panel budget.

    The best available estimate and its error bound are kept so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, estimate: float, error: float, t: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.t = t


class NoRootError(ArithmeticError):
    """The calibration function never crosses 1/2 inside the expanded bracket."""

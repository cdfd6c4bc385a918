"""Exception hierarchy shared across the package."""

from __future__ import annotations


class BintabError(Exception):
    """Base class for all package-specific errors."""


class InvalidTableError(BintabError, ValueError):
    """A table violates its contract (wrong size, nonpositive or non-finite entries)."""


class EvaluationError(BintabError, ArithmeticError):
    """A parameter evaluation produced a non-finite or undefined result."""


class NonRealizableParamsError(BintabError, ValueError):
    """A parameter vector does not correspond to any strictly positive table.

    Carries the offending reconstructed entries in ``entries``.
    """

    def __init__(self, message: str, entries=None):
        super().__init__(message)
        self.entries = entries


class ConvergenceError(BintabError, RuntimeError):
    """An iterative solver exhausted its iteration budget.

    Carries the last residual (max absolute deviation from the targets)
    in ``residual``.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual

"""Domain exceptions.

All of them derive from ``ValueError`` so callers that only care about "bad input"
can keep catching that. Unknown outcomes are values, never exceptions.
"""

from __future__ import annotations


class AnalysisError(ValueError):
    """Base class for every failure raised by the analysis library."""


class InvalidParameterError(AnalysisError):
    pass


class InvalidFamilyError(AnalysisError):
    """Interval family violates ordering or disjointness."""


class UndefinedAtPointError(AnalysisError):
    def __init__(self, function: str, x: object) -> None:
        super().__init__(f"{function} is undefined at x={x}")
        self.function = function
        self.x = x


class NoDerivativeInCatalogError(AnalysisError):
    pass


class NotPiecewiseMonotoneError(AnalysisError):
    pass


class SuperlevelNotRepresentableError(AnalysisError):
    pass


class ModulusViolationError(AnalysisError):
    """A chopped piece carries variation above 1, so delta is not an eps=1 modulus."""


class BudgetInfeasibleError(AnalysisError):
    pass


class NotApplicableError(AnalysisError):
    pass


class LatticeViolationError(AnalysisError):
    """A classification broke a space inclusion. Always a bug."""

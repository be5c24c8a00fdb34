from .affine import Affine
from .base import CatalogAttributes, FunctionSpec
from .combinators import Scale, SumOf, add, scale
from .periodic import SqrtPeriodic, SqrtPeriodicDeriv
from .power import PowerAbs, Reciprocal, power
from .steps import StepCoefficient, StepSeries

__all__ = [
    "Affine",
    "CatalogAttributes",
    "FunctionSpec",
    "PowerAbs",
    "Reciprocal",
    "Scale",
    "SqrtPeriodic",
    "SqrtPeriodicDeriv",
    "StepCoefficient",
    "StepSeries",
    "SumOf",
    "add",
    "power",
    "scale",
]

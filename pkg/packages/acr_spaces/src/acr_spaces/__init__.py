from .catalog import (
    Affine,
    FunctionSpec,
    PowerAbs,
    Reciprocal,
    Scale,
    SqrtPeriodic,
    SqrtPeriodicDeriv,
    StepCoefficient,
    StepSeries,
    SumOf,
)
from .classifier import SpaceId, Status, VennPlacement, Verdict, classify, membership
from .settings import DEFAULT_SETTINGS, AnalysisSettings

__all__ = [
    "DEFAULT_SETTINGS",
    "Affine",
    "AnalysisSettings",
    "FunctionSpec",
    "PowerAbs",
    "Reciprocal",
    "Scale",
    "SpaceId",
    "SqrtPeriodic",
    "SqrtPeriodicDeriv",
    "Status",
    "StepCoefficient",
    "StepSeries",
    "SumOf",
    "VennPlacement",
    "Verdict",
    "classify",
    "membership",
]

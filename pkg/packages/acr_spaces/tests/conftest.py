from __future__ import annotations

from fractions import Fraction

import pytest

from acr_spaces.catalog import Affine, Reciprocal, SqrtPeriodic, SqrtPeriodicDeriv, StepCoefficient, StepSeries
from acr_spaces.numerics import SeqTerm
from acr_spaces.sets import IntervalFamily, LeftMap, TailDescriptor
from acr_spaces.settings import AnalysisSettings


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


@pytest.fixture
def f1() -> Affine:
    return Affine(1, 0)


@pytest.fixture
def f2() -> StepSeries:
    return StepSeries(StepCoefficient(1, 1), TailDescriptor(1, LeftMap(1), SeqTerm(1, 2)))


@pytest.fixture
def f3() -> Reciprocal:
    return Reciprocal()


@pytest.fixture
def sqrt_periodic() -> SqrtPeriodic:
    return SqrtPeriodic()


@pytest.fixture
def sqrt_periodic_deriv() -> SqrtPeriodicDeriv:
    return SqrtPeriodicDeriv()


@pytest.fixture
def set_a() -> IntervalFamily:
    return IntervalFamily(tail=TailDescriptor(1, LeftMap(2), SeqTerm(1, 2)))


@pytest.fixture
def quick() -> AnalysisSettings:
    return AnalysisSettings(depth=30, series_truncation=50, k_max=16)


@pytest.fixture
def harmonic_number():
    return harmonic

from __future__ import annotations

from fractions import Fraction

import pytest

from acr_spaces.catalog import Affine, PowerAbs, Scale, SqrtPeriodicDeriv, SumOf, add, power, scale
from acr_spaces.classifier import superlevel
from acr_spaces.errors import (
    InvalidParameterError,
    NotPiecewiseMonotoneError,
    UndefinedAtPointError,
)
from acr_spaces.functions import (
    derivative,
    evaluate,
    integral_abs_over,
    monotone_breakpoints,
    total_variation,
)
from acr_spaces.numerics import Enclosure, Finite, ProvenInfinite
from acr_spaces.sets import Interval, IntervalFamily


def test_evaluate_exact_points(f1, f2, sqrt_periodic):
    assert evaluate(sqrt_periodic, Fraction(9, 4)) == Enclosure.point(Fraction(1, 2))
    assert evaluate(sqrt_periodic, 1) == Enclosure.point(1)
    assert evaluate(f1, 7) == Enclosure.point(7)
    assert evaluate(f2, Fraction(301, 100)) == Enclosure.point(3)
    assert evaluate(f2, Fraction(5, 2)) == Enclosure.point(0)


def test_evaluate_undefined(f3, sqrt_periodic_deriv):
    with pytest.raises(UndefinedAtPointError):
        evaluate(f3, 0)
    with pytest.raises(UndefinedAtPointError):
        evaluate(sqrt_periodic_deriv, 2)


def test_evaluate_rejects_floats(f1):
    with pytest.raises(InvalidParameterError):
        evaluate(f1, 0.5)


def test_derivatives(f1, f2, f3, sqrt_periodic):
    assert derivative(f1) == Affine(0, 1)
    assert derivative(sqrt_periodic) == SqrtPeriodicDeriv()
    assert derivative(scale(3, f1)) == Affine(0, 3)
    assert derivative(f2) == Affine(0, 0)
    assert derivative(f3) == Scale(-1, PowerAbs(-2))
    assert derivative(PowerAbs(Fraction(1, 2))) == Scale(Fraction(1, 2), PowerAbs(Fraction(-1, 2), True))


def test_constructors_fold_special_cases():
    assert power(0) == Affine(0, 1)
    assert power(1, odd=True) == Affine(1, 0)
    assert scale(2, Affine(1, 1)) == Affine(2, 2)
    assert isinstance(add(Affine(1, 0), PowerAbs(Fraction(1, 2))), SumOf)


def test_monotone_breakpoints(sqrt_periodic):
    assert monotone_breakpoints(sqrt_periodic, 0, 3).points == (0, 1, 2, 3)
    assert monotone_breakpoints(Affine(2, 1), -5, 5).points == (-5, 5)
    assert monotone_breakpoints(PowerAbs(Fraction(1, 2)), -1, 1).points == (-1, 0, 1)


def test_monotone_breakpoints_rejects_jumps(f2):
    with pytest.raises(NotPiecewiseMonotoneError):
        monotone_breakpoints(f2, 1, 2)


@pytest.mark.parametrize(
    ("f", "a", "b", "expected"),
    [
        (Affine(3, 0), 0, 4, 12),
        (Affine(-1, 2), -1, 3, 4),
    ],
)
def test_total_variation_affine(f, a, b, expected):
    assert total_variation(f, a, b) == Finite(Enclosure.point(expected))


def test_total_variation_sqrt_periodic(sqrt_periodic):
    assert total_variation(sqrt_periodic, 0, 2) == Finite(Enclosure.point(2))
    assert total_variation(sqrt_periodic, 2, Fraction(9, 4)) == Finite(Enclosure.point(Fraction(1, 2)))


def test_total_variation_counts_jumps(f2):
    assert total_variation(f2, 1, Fraction(5, 2)) == Finite(Enclosure.point(3))
    # the jump up to f(3) = 3 at the right end counts too
    assert total_variation(f2, 1, 3) == Finite(Enclosure.point(6))


def test_total_variation_near_a_pole(f3):
    assert isinstance(total_variation(f3, 0, 1), ProvenInfinite)


def test_total_variation_rejects_empty_range(f1):
    with pytest.raises(InvalidParameterError):
        total_variation(f1, 2, 2)


def test_integral_over_set_a_diverges(sqrt_periodic_deriv, set_a, harmonic_number):
    result = integral_abs_over(sqrt_periodic_deriv, set_a, 50)
    assert isinstance(result.value, ProvenInfinite)
    assert len(result.ledger) == 50
    assert result.ledger[49].partial_lower == harmonic_number(50)
    assert all(e.contribution == Enclosure.point(Fraction(1, e.index)) for e in result.ledger)


def test_integral_of_constant_over_finite_family():
    result = integral_abs_over(Affine(0, 1), IntervalFamily.of(Interval.half_open(0, 5)))
    assert result.value == Finite(Enclosure.point(5))
    assert result.ledger == ()


def test_integral_over_step_superlevel_diverges(f2):
    fam = superlevel(f2, 1)
    result = integral_abs_over(f2, fam, 100)
    assert isinstance(result.value, ProvenInfinite)
    assert result.ledger[0].contribution == Enclosure.point(1)
    assert result.ledger[1].contribution == Enclosure.point(Fraction(1, 2))


def test_integral_over_set_a_of_bounded_function(sqrt_periodic, set_a, quick):
    result = integral_abs_over(sqrt_periodic, set_a, settings=quick)
    assert isinstance(result.value, Finite)
    assert result.value.enclosure.hi <= 2

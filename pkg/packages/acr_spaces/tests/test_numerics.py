from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acr_spaces.catalog import Reciprocal
from acr_spaces.errors import InvalidParameterError
from acr_spaces.numerics import (
    ComparisonRejected,
    DivergenceCertificate,
    Enclosure,
    Finite,
    ProvenInfinite,
    SeqTerm,
    UnknownValue,
    add_extended,
    as_rational,
    check_certificate,
    divergence_by_comparison,
    log_enclosure,
    rational_power,
    root_enclosure,
    scale_extended,
    series_tail,
    sqrt_enclosure,
)

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


def enclosures():
    return st.tuples(rationals, rationals).map(lambda p: Enclosure(min(p), max(p)))


def test_as_rational_rejects_floats():
    with pytest.raises(InvalidParameterError):
        as_rational(0.5)
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(7) == Fraction(7)


def test_enclosure_rejects_inverted_bounds():
    with pytest.raises(InvalidParameterError):
        Enclosure(Fraction(1), Fraction(0))


def test_enclosure_algebra():
    a = Enclosure(Fraction(1), Fraction(2))
    b = Enclosure(Fraction(-3), Fraction(1))
    assert a + b == Enclosure(Fraction(-2), Fraction(3))
    assert a - b == Enclosure(Fraction(0), Fraction(5))
    assert a * b == Enclosure(Fraction(-6), Fraction(2))
    assert abs(b) == Enclosure(Fraction(0), Fraction(3))
    assert a.reciprocal() == Enclosure(Fraction(1, 2), Fraction(1))
    assert a.scale(-2) == Enclosure(Fraction(-4), Fraction(-2))
    assert a.hull(b) == Enclosure(Fraction(-3), Fraction(2))
    assert a.intersection(b) == Enclosure(Fraction(1), Fraction(1))
    assert Enclosure.point(3).exact
    with pytest.raises(InvalidParameterError):
        b.reciprocal()


@given(enclosures(), enclosures(), st.fractions(0, 1), st.fractions(0, 1))
def test_enclosure_arithmetic_is_sound(a, b, s, t):
    x = a.lo + s * (a.hi - a.lo)
    y = b.lo + t * (b.hi - b.lo)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    assert abs(a).contains(abs(x))


@pytest.mark.parametrize(
    ("x", "k", "expected"),
    [(Fraction(9, 4), 2, Fraction(3, 2)), (Fraction(27), 3, Fraction(3)), (Fraction(1, 16), 4, Fraction(1, 2))],
)
def test_roots_are_exact_on_perfect_powers(x, k, expected):
    assert root_enclosure(x, k) == Enclosure.point(expected)


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4))
def test_sqrt_brackets_the_root(x):
    enc = sqrt_enclosure(x, Fraction(1, 10**9))
    assert enc.lo * enc.lo <= x <= enc.hi * enc.hi
    assert enc.width <= Fraction(1, 10**9)


def test_rational_power_negative_exponent():
    enc = rational_power(4, Fraction(-1, 2))
    assert enc == Enclosure.point(Fraction(1, 2))
    enc = rational_power(2, Fraction(-1, 2))
    assert enc.lo * enc.lo <= Fraction(1, 2) <= enc.hi * enc.hi


@pytest.mark.parametrize("y", [Fraction(2), Fraction(1, 3), Fraction(10), Fraction(12345, 7)])
def test_log_enclosure_contains_log(y):
    enc = log_enclosure(y, Fraction(1, 10**12))
    value = math.log(y.numerator) - math.log(y.denominator)
    assert float(enc.lo) - 1e-9 <= value <= float(enc.hi) + 1e-9
    assert enc.width <= Fraction(1, 10**12)


def test_series_tail_basel():
    value = series_tail(SeqTerm(1, 2), 1, truncation=100)
    assert isinstance(value, Finite)
    assert value.enclosure.contains(Fraction(164493406685, 10**11))
    assert value.enclosure.width <= Fraction(2, 100)


def test_series_tail_from_two():
    value = series_tail(SeqTerm(1, 2), 2, truncation=100)
    assert isinstance(value, Finite)
    assert value.enclosure.contains(Fraction(64493406685, 10**11))


def test_series_tail_harmonic_diverges():
    value = series_tail(SeqTerm(1, 1), 1)
    assert isinstance(value, ProvenInfinite)
    assert value.certificate.term.p == 1


def test_series_tail_refines_with_truncation():
    coarse = series_tail(SeqTerm(1, 2), 1, truncation=50)
    fine = series_tail(SeqTerm(1, 2), 1, truncation=100)
    assert fine.enclosure.is_subset_of(coarse.enclosure)


def test_comparison_certifies_harmonic_bounds():
    cert = divergence_by_comparison([(n, Fraction(1, n)) for n in range(1, 51)])
    assert isinstance(cert, DivergenceCertificate)
    assert cert.term == SeqTerm(1, 1)
    assert cert.checked_prefix[-1] == (50, sum(Fraction(1, n) for n in range(1, 51)))


def test_comparison_rejects_summable_bounds():
    result = divergence_by_comparison([(n, Fraction(1, n * n)) for n in range(1, 51)])
    assert isinstance(result, ComparisonRejected)


def test_comparison_constant_lower_bound():
    eps = Fraction(1, 2)
    cert = divergence_by_comparison([(n, eps * (1 - Fraction(1, n * n))) for n in range(2, 21)])
    assert isinstance(cert, DivergenceCertificate)
    assert cert.term == SeqTerm(Fraction(3, 8), 0)
    assert cert.from_index == 2


def test_comparison_input_validation():
    with pytest.raises(InvalidParameterError):
        divergence_by_comparison([])
    with pytest.raises(InvalidParameterError):
        divergence_by_comparison([(2, 1), (2, 1)])
    assert isinstance(divergence_by_comparison([(1, 1)]), ComparisonRejected)


def test_check_certificate_catches_weaker_bounds():
    bounds = [(n, Fraction(1, n)) for n in range(1, 21)]
    cert = divergence_by_comparison(bounds)
    assert check_certificate(cert, bounds)
    weaker = [(n, Fraction(1, n * n)) for n in range(1, 21)]
    assert not check_certificate(cert, weaker)


@given(st.integers(min_value=10, max_value=400))
def test_comparison_never_certifies_small_sums(count):
    bounds = [(n, Fraction(1, n * n)) for n in range(1, count + 1)]
    assert isinstance(divergence_by_comparison(bounds), ComparisonRejected)


def test_comparison_accepts_bounds_settling_from_above():
    # unit pieces of 1/x from 1/2: k * log((2k+1)/(2k-1)) decreases to 1
    bounds = [(k, log_enclosure(Fraction(2 * k + 1, 2 * k - 1)).lo) for k in range(1, 101)]
    cert = divergence_by_comparison(bounds)
    assert isinstance(cert, DivergenceCertificate)
    assert cert.term.p == 1
    assert 1 < cert.term.c < Fraction(101, 100)
    assert check_certificate(cert, bounds)


def test_reciprocal_ray_from_half_integer_diverges():
    value = Reciprocal().integral_abs(Fraction(1, 2), None)
    assert isinstance(value, ProvenInfinite)
    assert value.certificate.term.p == 1


def test_extended_algebra():
    inf = series_tail(SeqTerm(1, 1), 1)
    one = Finite(Enclosure.point(1))
    unknown = UnknownValue("no idea")
    assert add_extended(one, inf) is inf
    assert add_extended(unknown, inf) is inf
    assert add_extended(one, unknown) is unknown
    assert add_extended(one, one) == Finite(Enclosure.point(2))
    assert scale_extended(one, -3) == Finite(Enclosure.point(3))
    with pytest.raises(InvalidParameterError):
        scale_extended(one, 0)

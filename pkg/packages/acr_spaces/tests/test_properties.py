"""Invariants that must hold across the whole catalog."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acr_spaces.catalog import (
    Affine,
    PowerAbs,
    Reciprocal,
    SqrtPeriodic,
    SqrtPeriodicDeriv,
    StepCoefficient,
    StepSeries,
    add,
    power,
    scale,
)
from acr_spaces.classifier import SpaceId, Status, classify, membership, superlevel
from acr_spaces.functions import integral_abs_over, total_variation
from acr_spaces.numerics import Enclosure, Finite, SeqTerm
from acr_spaces.sets import Interval, IntervalFamily, LeftMap, TailDescriptor, is_subset_of, measure, truncate
from acr_spaces.settings import AnalysisSettings

QUICK = AnalysisSettings(depth=30, series_truncation=50, k_max=16)

CATALOG = {
    "f1": Affine(1, 0),
    "f2": StepSeries(StepCoefficient(1, 1), TailDescriptor(1, LeftMap(1), SeqTerm(1, 2))),
    "f3": Reciprocal(),
    "sqrt_periodic": SqrtPeriodic(),
    "sqrt_periodic_deriv": SqrtPeriodicDeriv(),
    "sqrt_abs": PowerAbs(Fraction(1, 2)),
    "one": Affine(0, 1),
}

CONTINUOUS = [SqrtPeriodic(), PowerAbs(Fraction(1, 2)), Affine(3, -1)]


def steps(c, k, alpha=1, beta=0, quadratic=False, cw=1, p=2, start=1):
    return StepSeries(
        StepCoefficient(Fraction(c), k),
        TailDescriptor(start, LeftMap(alpha, Fraction(beta), quadratic), SeqTerm(Fraction(cw), p)),
    )


@st.composite
def step_series(draw):
    # widths stay <= 1 <= every gap, so the tail never overlaps itself
    return steps(
        draw(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4)),
        draw(st.integers(-2, 2)),
        alpha=draw(st.integers(1, 3)),
        beta=draw(st.fractions(min_value=-3, max_value=3, max_denominator=4)),
        quadratic=draw(st.booleans()),
        cw=draw(st.fractions(min_value=Fraction(1, 8), max_value=1, max_denominator=8)),
        p=draw(st.integers(0, 3)),
        start=draw(st.integers(1, 3)),
    )


small = st.fractions(min_value=-4, max_value=4, max_denominator=4)
factors = small.filter(bool)
exponents = st.fractions(min_value=-3, max_value=3, max_denominator=4)

base_members = st.one_of(
    st.builds(Affine, small, small),
    st.builds(power, exponents, odd=st.booleans()),
    step_series(),
    st.sampled_from([Reciprocal(), SqrtPeriodic(), SqrtPeriodicDeriv()]),
)
members = st.one_of(
    base_members,
    st.builds(scale, factors, base_members),
    st.builds(add, base_members, base_members),
)


def closed_families(lo, hi, *, max_denominator, max_pairs):
    """Finite families of disjoint closed intervals with endpoints in [lo, hi]."""
    ends = st.lists(
        st.fractions(min_value=lo, max_value=hi, max_denominator=max_denominator),
        min_size=2,
        max_size=2 * max_pairs,
        unique=True,
    )

    def build(xs):
        xs = sorted(xs)[: len(xs) // 2 * 2]
        return IntervalFamily.of(*(Interval.closed(a, b) for a, b in zip(xs[::2], xs[1::2], strict=True)))

    return ends.map(build)


@pytest.mark.parametrize("name", sorted(CATALOG))
@pytest.mark.parametrize("factor", [Fraction(1, 2), Fraction(1), Fraction(3)])
def test_placement_is_scale_invariant(name, factor):
    # classify raises on any broken implication, so this doubles as the lattice check
    base = classify(CATALOG[name], settings=QUICK).statuses()
    scaled = classify(scale(factor, CATALOG[name]), settings=QUICK).statuses()
    assert scaled == base


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(members)
def test_lattice_holds_across_generated_members(f):
    # LatticeViolationError escapes classify if an implication between spaces breaks
    placement = classify(f, settings=QUICK)
    assert len(placement.verdicts) == len(SpaceId)


L1G_MEMBERS = [
    SqrtPeriodic(),
    Affine(0, 3),
    Affine(0, Fraction(-1, 2)),
    PowerAbs(Fraction(-1, 2)),
    PowerAbs(Fraction(-1, 3), odd=True),
    steps(2, 0, p=2),
    steps(3, -1, alpha=2, p=0, cw=1),
    steps(1, 1, p=3),
    scale(3, PowerAbs(Fraction(-1, 2))),
]


@pytest.mark.parametrize("f", L1G_MEMBERS, ids=lambda f: f.canonical())
@settings(max_examples=50, deadline=None)
@given(fam=closed_families(-20, 20, max_denominator=8, max_pairs=4))
def test_l1g_threshold_bounds_every_finite_family(f, fam):
    verdict = membership(f, SpaceId.L1G, settings=QUICK)
    assert verdict.status is Status.IN
    cert = verdict.certificate
    assert isinstance(cert.tail_integral, Finite)
    integral = integral_abs_over(f, fam, settings=QUICK).value
    size = measure(fam, settings=QUICK)
    assert isinstance(integral, Finite)
    assert integral.enclosure.hi <= cert.level * size.enclosure.hi + cert.tail_integral.enclosure.hi


MONOTONE_SUPERLEVELS = [
    SqrtPeriodic(),
    SqrtPeriodicDeriv(),
    steps(2, -1, alpha=2, cw=1, p=0),
    steps(2, 0, p=2),
    steps(1, 1, p=2),
    PowerAbs(2),
    PowerAbs(Fraction(-1, 2)),
    Affine(2, -1),
    scale(Fraction(-1, 2), SqrtPeriodicDeriv()),
]
levels = st.fractions(min_value=Fraction(1, 8), max_value=16, max_denominator=8)


@pytest.mark.parametrize("f", MONOTONE_SUPERLEVELS, ids=lambda f: f.canonical())
@settings(max_examples=40, deadline=None)
@given(first=levels, second=levels)
def test_superlevel_sets_shrink_as_the_level_rises(f, first, second):
    low, high = min(first, second), max(first, second)
    outer = superlevel(f, low, settings=QUICK)
    inner = superlevel(f, high, settings=QUICK)
    assert is_subset_of(truncate(inner, 20) if inner.tail else inner, outer)
    inner_size, outer_size = measure(inner, settings=QUICK), measure(outer, settings=QUICK)
    if isinstance(inner_size, Finite):
        if isinstance(outer_size, Finite):
            assert inner_size.enclosure.lo <= outer_size.enclosure.hi
    else:
        assert not isinstance(outer_size, Finite)


points = st.fractions(min_value=-6, max_value=6, max_denominator=16)
lengths = st.fractions(min_value=Fraction(1, 16), max_value=4, max_denominator=16)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CONTINUOUS), points, lengths)
def test_variation_matches_integral_of_derivative(f, a, length):
    b = a + length
    variation = total_variation(f, a, b)
    integral = integral_abs_over(f.derivative(), IntervalFamily.of(Interval.closed(a, b))).value
    assert isinstance(variation, Finite)
    assert isinstance(integral, Finite)
    assert variation.enclosure.intersects(integral.enclosure)
    assert variation.enclosure.width <= Fraction(1, 10**6)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CONTINUOUS), points, lengths, lengths)
def test_variation_is_additive(f, a, first, second):
    b, c = a + first, a + first + second
    whole = total_variation(f, a, c).enclosure
    split = total_variation(f, a, b).enclosure + total_variation(f, b, c).enclosure
    assert whole.intersects(split)


NODES = 10_000
GRID = 2**40

# windows keep clear of singular points; the cell windows of sqrt_periodic_deriv hold no integer
SAMPLED = [
    (Affine(1, -1), -3, 3),
    (Affine(Fraction(-2, 3), 5), -4, 10),
    (PowerAbs(Fraction(1, 2)), -4, 4),
    (SqrtPeriodic(), -3, 5),
    (SqrtPeriodicDeriv(), Fraction(1, 8), Fraction(7, 8)),
    (SqrtPeriodicDeriv(), Fraction(9, 8), Fraction(15, 8)),
    (Reciprocal(), Fraction(1, 2), 3),
    (steps(1, 1, p=2), -1, 12),
    (steps(2, -1, alpha=2, beta=Fraction(1, 2), cw=1, p=1), 0, 16),
    (add(SqrtPeriodic(), Affine(Fraction(-1, 2), 0)), Fraction(1, 4), 3),
    (add(SqrtPeriodic(), PowerAbs(Fraction(1, 2))), -2, 3),
    (scale(-3, SqrtPeriodic()), -2, 2),
]


def midpoint_bracket(f, iv, nodes):
    """Bracket the integral of |f| over iv by a midpoint sum widened by h * V(f)."""
    h = iv.length / nodes
    total = Enclosure.point(0)
    for i in range(nodes):
        x = iv.left + (2 * i + 1) * h / 2
        total = total + abs(f.evaluate(x)).rounded_out(GRID)
    variation = total_variation(f, iv.left, iv.right)
    assert isinstance(variation, Finite)
    slack = h * variation.enclosure.hi
    return Enclosure(total.lo * h - slack, total.hi * h + slack)


@pytest.mark.slow
@pytest.mark.parametrize(("f", "lo", "hi"), SAMPLED, ids=[f"{f.canonical()}@[{lo},{hi}]" for f, lo, hi in SAMPLED])
@settings(max_examples=5, deadline=None)
@given(data=st.data())
def test_integral_enclosure_meets_midpoint_sums(f, lo, hi, data):
    fam = data.draw(closed_families(Fraction(lo), Fraction(hi), max_denominator=16, max_pairs=3))
    exact = integral_abs_over(f, fam).value
    assert isinstance(exact, Finite)
    nodes = NODES // len(fam.head)
    sampled = sum((midpoint_bracket(f, iv, nodes) for iv in fam.head), Enclosure.point(0))
    assert exact.enclosure.intersects(sampled)

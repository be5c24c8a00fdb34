from __future__ import annotations

from fractions import Fraction

import pytest

from acr_spaces.catalog import Affine, PowerAbs, SqrtPeriodic, add, scale
from acr_spaces.classifier import (
    AttributeCert,
    ClosureCert,
    DivergentFamilyCert,
    ImplicationCert,
    SpaceId,
    Status,
    ThresholdCert,
    VennPlacement,
    Verdict,
    ac_via_theorem1,
    check_lattice,
    classify,
    l1g_bound_via_variation,
    membership,
    superlevel,
)
from acr_spaces.errors import InvalidParameterError, LatticeViolationError, ModulusViolationError
from acr_spaces.numerics import Enclosure, Finite, ProvenInfinite, SeqTerm
from acr_spaces.sets import Interval, IntervalFamily, measure

IN, OUT = Status.IN.value, Status.OUT.value


def test_verdicts_need_evidence():
    with pytest.raises(InvalidParameterError):
        Verdict(SpaceId.L1, Status.IN)
    with pytest.raises(InvalidParameterError):
        Verdict(SpaceId.L1, Status.UNKNOWN)


def test_superlevel_of_identity(f1):
    fam = superlevel(f1, 3)
    assert fam.head == (Interval(None, Fraction(-3), False, True), Interval(Fraction(3), None, True, False))
    with pytest.raises(InvalidParameterError):
        superlevel(f1, 0)


def test_superlevel_of_reciprocal(f3):
    fam = superlevel(f3, 1)
    assert measure(fam) == Finite(Enclosure.point(2))
    assert fam.contains(Fraction(1, 2))
    assert not fam.contains(0)


def test_superlevel_of_steps(f2):
    assert superlevel(f2, 3).tail.start == 3


def test_classify_identity(f1):
    placement = classify(f1)
    assert placement.function == "affine(1, 0)"
    assert placement.statuses() == {
        "L1": OUT,
        "Linf": OUT,
        "L1loc": IN,
        "L1H": OUT,
        "L1G": OUT,
        "ACloc": IN,
        "AC": IN,
    }
    assert placement.verdict(SpaceId.L1H).certificate.rule
    assert isinstance(placement.verdict(SpaceId.L1G).certificate, ImplicationCert)


def test_classify_steps(f2, harmonic_number):
    placement = classify(f2)
    assert placement.statuses() == {
        "L1": OUT,
        "Linf": OUT,
        "L1loc": IN,
        "L1H": IN,
        "L1G": OUT,
        "ACloc": OUT,
        "AC": OUT,
    }
    threshold = placement.verdict(SpaceId.L1H).certificate
    assert isinstance(threshold, ThresholdCert)
    assert threshold.level == 1
    cert = placement.verdict(SpaceId.L1G).certificate
    assert isinstance(cert, DivergentFamilyCert)
    assert isinstance(cert.measure, Finite)
    assert cert.certificate.term == SeqTerm(1, 1)
    assert cert.ledger[9].partial_lower == harmonic_number(10)


def test_classify_reciprocal(f3):
    placement = classify(f3)
    assert placement.statuses() == {
        "L1": OUT,
        "Linf": OUT,
        "L1loc": OUT,
        "L1H": IN,
        "L1G": OUT,
        "ACloc": OUT,
        "AC": OUT,
    }
    threshold = placement.verdict(SpaceId.L1H).certificate
    assert threshold.level == 1
    assert threshold.measure == Finite(Enclosure.point(2))


@pytest.mark.parametrize(
    ("f", "inside"),
    [
        (SqrtPeriodic(), {"Linf", "L1loc", "L1H", "L1G", "ACloc"}),
        (SqrtPeriodic().derivative(), {"L1loc"}),
        (PowerAbs(Fraction(1, 2)), {"L1loc", "ACloc", "AC"}),
        (Affine(0, 1), {"Linf", "L1loc", "L1H", "L1G", "ACloc", "AC"}),
    ],
    ids=["sqrt_periodic", "sqrt_periodic_deriv", "sqrt_abs", "constant"],
)
def test_classify_catalog(f, inside, quick):
    statuses = classify(f, settings=quick).statuses()
    assert {space for space, status in statuses.items() if status == IN} == inside
    assert {space for space, status in statuses.items() if status == OUT} == set(statuses) - inside


def test_constant_needs_a_higher_level():
    verdict = membership(Affine(0, 1), SpaceId.L1G)
    assert verdict.status is Status.IN
    assert verdict.certificate.level == 2
    assert verdict.certificate.tail_integral == Finite(Enclosure.point(0))


def test_membership_accepts_names(f1):
    assert membership(f1, "L1loc").status is Status.IN


def test_sums_use_closure(sqrt_periodic, quick):
    f = add(sqrt_periodic, PowerAbs(Fraction(1, 2)))
    linf = membership(f, SpaceId.LINF, settings=quick)
    assert linf.status is Status.OUT
    assert isinstance(linf.certificate, ClosureCert)
    assert membership(scale(2, f), SpaceId.L1LOC, settings=quick).status is Status.IN


def test_lattice_violation_is_reported():
    evidence = AttributeCert("given")
    verdicts = tuple(
        Verdict(space, Status.OUT if space is SpaceId.L1G else Status.IN, evidence) for space in SpaceId
    )
    with pytest.raises(LatticeViolationError):
        check_lattice(VennPlacement("bogus", verdicts))


def test_ac_via_theorem1(sqrt_periodic, f2):
    verdict = ac_via_theorem1(sqrt_periodic)
    assert verdict.status is Status.OUT
    derivative_verdict = verdict.certificate.premises[0]
    assert derivative_verdict.space is SpaceId.L1G
    assert derivative_verdict.status is Status.OUT
    assert ac_via_theorem1(PowerAbs(Fraction(1, 2))).status is Status.IN
    assert ac_via_theorem1(f2).certificate.source is SpaceId.ACLOC


def test_l1_of_reciprocal_square_tail_is_out():
    assert isinstance(PowerAbs(-2).l1_norm(), ProvenInfinite)
    assert membership(PowerAbs(-2), SpaceId.L1).status is Status.OUT


def test_variation_bound_long_family(f1):
    fam = IntervalFamily.of(Interval.half_open(0, 3))
    result = l1g_bound_via_variation(f1, fam, 1)
    assert result.case == 2
    assert result.n0 == 6
    assert result.bound == 7
    assert result.verified_total == Enclosure.point(3)
    assert all(b.length <= 1 for b in result.bundles)


def test_variation_bound_short_family(f1):
    fam = IntervalFamily.of(Interval.half_open(0, Fraction(1, 2)))
    result = l1g_bound_via_variation(f1, fam, 1)
    assert (result.case, result.bound) == (1, 1)
    assert result.verified_total == Enclosure.point(Fraction(1, 2))


def test_variation_bound_groups_short_pieces(f1):
    fam = IntervalFamily.of(*(Interval.closed(2 * i, 2 * i + Fraction(1, 10)) for i in range(1, 8)))
    result = l1g_bound_via_variation(f1, fam, Fraction(1, 2))
    assert (result.n0, result.bound) == (2, 3)
    assert [len(b.pieces) for b in result.bundles] == [3, 3, 1]
    assert result.verified_total == Enclosure.point(Fraction(7, 10))


def test_variation_bound_rejects_bad_modulus():
    with pytest.raises(ModulusViolationError):
        l1g_bound_via_variation(Affine(4, 0), IntervalFamily.of(Interval.half_open(0, 3)), 1)


def test_variation_bound_needs_finite_family(f1, set_a):
    with pytest.raises(InvalidParameterError):
        l1g_bound_via_variation(f1, set_a, 1)
    with pytest.raises(InvalidParameterError):
        l1g_bound_via_variation(f1, IntervalFamily.of(Interval.half_open(0, 1)), 0)

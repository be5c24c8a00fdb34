"""Built-in acceptance suite run by ``acr verify``.

Each criterion returns a named pass/fail outcome with a short detail line. The
property criteria use small fixed samples so the suite stays deterministic; the
randomized versions live in the test suites.
"""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

import structlog

from acr_spaces.catalog import Affine, FunctionSpec, SqrtPeriodic, power, scale
from acr_spaces.classifier import SpaceId, Status, classify, l1g_bound_via_variation, membership
from acr_spaces.errors import AnalysisError
from acr_spaces.functions import integral_abs_over, total_variation
from acr_spaces.numerics import Enclosure, Finite, ProvenInfinite
from acr_spaces.sets import Interval, IntervalFamily
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings
from acr_spaces.verify import verify_ledger
from acr_spaces.witnesses import (
    ac_failure_intervals,
    application_set_A,
    theorem1_adversary,
    theorem2_construction,
)

from .lower import PRESETS, function_from_text, set_from_text

log = structlog.get_logger("acr.acceptance")

IN, OUT = Status.IN.value, Status.OUT.value

EXPECTED_PLACEMENTS = {
    "f1": {"L1": OUT, "Linf": OUT, "L1loc": IN, "L1H": OUT, "L1G": OUT, "ACloc": IN, "AC": IN},
    "f2": {"L1": OUT, "Linf": OUT, "L1loc": IN, "L1H": IN, "L1G": OUT, "ACloc": OUT, "AC": OUT},
    "f3": {"L1": OUT, "Linf": OUT, "L1loc": OUT, "L1H": IN, "L1G": OUT, "ACloc": OUT, "AC": OUT},
}

# windows that stay clear of every singular point
SAMPLING_WINDOWS = {
    "f1": "{[-1,2]}",
    "f2": "{[1,3]}",
    "f3": "{[-2,-1/2] [1,3]}",
    "sqrt_periodic": "{[-1,5]}",
    "sqrt_periodic_deriv": "{[1/2,3/2] [5/2,7/2]}",
    "sqrt_abs": "{[0,4]}",
}
SAMPLING_NODES = 400


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def _basel_bracket(n: int) -> Enclosure:
    """Rational bounds on sum 1/k^2 from 1/(k(k+1)) < 1/k^2 < 1/(k(k-1)) past the n-th term."""
    partial = sum((Fraction(1, k * k) for k in range(1, n + 1)), Fraction(0))
    return Enclosure(partial + Fraction(1, n + 1), partial + Fraction(1, n))


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str = ""


def venn_reproduction(settings: AnalysisSettings) -> CriterionResult:
    mismatched = []
    for name, expected in EXPECTED_PLACEMENTS.items():
        got = classify(function_from_text(name), settings=settings).statuses()
        if got != expected:
            mismatched.append(name)
    return CriterionResult("venn reproduction", not mismatched, f"mismatched: {mismatched}")


def ac_counterexample(settings: AnalysisSettings) -> CriterionResult:
    witness = ac_failure_intervals(Fraction(1, 4), 10, settings=settings)
    target = Fraction(1, 2) * _harmonic(10)
    passed = (
        witness.length_sum.hi < Fraction(1, 2)
        and witness.variation_sum.contains(target)
        and witness.variation_sum.width <= Fraction(1, 10**6)
        and membership(SqrtPeriodic(), SpaceId.AC, settings=settings).status is Status.OUT
    )
    return CriterionResult("ac counterexample", passed, f"variation {witness.variation_sum}")


def set_a_application(settings: AnalysisSettings) -> CriterionResult:
    report = application_set_A(settings=settings)
    depth = settings.depth
    measure_ok = (
        isinstance(report.measure, Finite)
        and report.measure.enclosure.intersects(_basel_bracket(2 * settings.series_truncation))
        and report.measure.enclosure.width <= Fraction(1, 50)
    )
    ledger = report.integral.ledger
    integral_ok = (
        isinstance(report.integral.value, ProvenInfinite)
        and len(ledger) >= depth
        and ledger[depth - 1].partial_lower == _harmonic(depth)
    )
    return CriterionResult(
        "set A application", measure_ok and integral_ok, f"measure ok={measure_ok}, ledger ok={integral_ok}"
    )


def theorem2_on_identity(settings: AnalysisSettings) -> CriterionResult:
    depth = 100
    ledger = theorem2_construction(Affine(1, 0), depth, settings=settings)
    measures_ok = all(
        Fraction(1, s.n**2) <= s.measure <= Fraction(2, s.n**2) for s in ledger.steps
    )
    passed = (
        len(ledger.steps) == depth
        and measures_ok
        and ledger.lower_sum >= _harmonic(depth)
        and verify_ledger(ledger, settings=settings).passed
    )
    return CriterionResult("theorem 2 construction", passed, f"lower sum {float(ledger.lower_sum):.4f}")


def theorem1_on_sqrt_periodic(settings: AnalysisSettings) -> CriterionResult:
    depth, eps = 20, Fraction(1, 2)
    ledger = theorem1_adversary(SqrtPeriodic(), depth, eps, settings=settings)
    bounds_ok = all(
        fam.lower_bound >= eps * (1 - Fraction(1, fam.index**2)) for fam in ledger.families
    )
    passed = (
        len(ledger.families) == depth
        and ledger.union_measure <= ledger.budget_total.hi
        and bounds_ok
        and ledger.certificate is not None
        and verify_ledger(ledger, settings=settings).passed
    )
    return CriterionResult("theorem 1 adversary", passed, f"families {len(ledger.families)}")


def _lattice_sample() -> list[FunctionSpec]:
    members = [function_from_text(name) for name in sorted(PRESETS)]
    members += [Affine(a, b) for a in (0, 2, -1) for b in (1, -3)]
    members += [power(Fraction(e)) for e in ("1/3", "2", "-1/2")]
    return [scale(r, f) for f in members for r in (Fraction(1, 2), Fraction(1), Fraction(3))]


def lattice_property(settings: AnalysisSettings) -> CriterionResult:
    # classify enforces every inclusion itself and raises on a violation
    violations = []
    for f in _lattice_sample():
        try:
            classify(f, settings=settings)
        except AnalysisError as exc:
            violations.append(f"{f.canonical()}: {exc}")
    return CriterionResult("inclusion lattice", not violations, "; ".join(violations[:3]))


def ftc_coherence(settings: AnalysisSettings) -> CriterionResult:
    functions = [Affine(1, 0), SqrtPeriodic(), power(Fraction(1, 2))]
    intervals = [
        (Fraction(-10) + Fraction(7 * k, 3), Fraction(-10) + Fraction(7 * k, 3) + Fraction(k % 5 + 1, 3))
        for k in range(8)
    ]
    failures = []
    for f in functions:
        for a, b in intervals:
            variation = total_variation(f, a, b, settings=settings)
            integral = integral_abs_over(
                f.derivative(), IntervalFamily.of(Interval.closed(a, b)), settings=settings
            ).value
            if not (isinstance(variation, Finite) and isinstance(integral, Finite)):
                failures.append(f"{f.canonical()} on [{a}, {b}] not finite")
                continue
            common = variation.enclosure.intersection(integral.enclosure)
            if common is None or common.width > Fraction(1, 10**6):
                failures.append(f"{f.canonical()} on [{a}, {b}]")
    return CriterionResult("variation coherence", not failures, "; ".join(failures[:3]))


def converse_bound(settings: AnalysisSettings) -> CriterionResult:
    f = Affine(1, 0)
    long = l1g_bound_via_variation(f, IntervalFamily.of(Interval.half_open(0, 3)), 1, settings=settings)
    short = l1g_bound_via_variation(
        f, IntervalFamily.of(Interval.half_open(0, Fraction(1, 2))), 1, settings=settings
    )
    passed = (
        long.bound == 7
        and long.verified_total.exact
        and long.verified_total.lo == 3
        and short.bound == 1
    )
    return CriterionResult("converse bound", passed, f"bounds {long.bound}, {short.bound}")


def _midpoint_estimate(f: FunctionSpec, fam: IntervalFamily, settings: AnalysisSettings) -> Fraction:
    total = Fraction(0)
    for iv in fam.head:
        h = iv.length / SAMPLING_NODES
        nodes = (iv.left + (i + Fraction(1, 2)) * h for i in range(SAMPLING_NODES))
        total += h * sum(abs(f.evaluate(x, settings).mid) for x in nodes)
    return total


def enclosure_soundness(settings: AnalysisSettings) -> CriterionResult:
    escapes = []
    for name, window in SAMPLING_WINDOWS.items():
        f = function_from_text(name)
        fam = set_from_text(window)
        certified = integral_abs_over(f, fam, settings=settings).value
        if not isinstance(certified, Finite):
            escapes.append(f"{name}: not finite")
            continue
        estimate = _midpoint_estimate(f, fam, settings)
        size = sum((iv.length for iv in fam.head), Fraction(0))
        slack = size / 100
        enclosure = certified.enclosure
        if not enclosure.lo - slack <= estimate <= enclosure.hi + slack:
            escapes.append(f"{name}: {float(estimate):.6f} outside {enclosure}")
    return CriterionResult("enclosure soundness", not escapes, "; ".join(escapes))


CRITERIA: tuple[Callable[[AnalysisSettings], CriterionResult], ...] = (
    venn_reproduction,
    ac_counterexample,
    set_a_application,
    theorem2_on_identity,
    theorem1_on_sqrt_periodic,
    lattice_property,
    ftc_coherence,
    converse_bound,
    enclosure_soundness,
)


def run_acceptance(*, settings: AnalysisSettings = DEFAULT_SETTINGS) -> list[CriterionResult]:
    results = []
    for criterion in CRITERIA:
        started = time.perf_counter()
        try:
            result = criterion(settings)
        except AnalysisError as exc:
            result = CriterionResult(criterion.__name__.replace("_", " "), False, f"error: {exc}")
        log.info(
            "acceptance.criterion",
            name=result.name,
            passed=result.passed,
            seconds=round(time.perf_counter() - started, 3),
        )
        results.append(result)
    return results

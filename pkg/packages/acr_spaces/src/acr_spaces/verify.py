"""Re-check witness ledgers from scratch.

Every stored measure and integral is recomputed from the intervals themselves and
every inequality the construction claims is tested again. Nothing stored in the
ledger is trusted except the intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import singledispatch

import structlog

from acr_spaces.catalog import FunctionSpec, SqrtPeriodic
from acr_spaces.classifier import Status, VariationBound
from acr_spaces.functions import integral_abs_over, total_variation
from acr_spaces.numerics import (
    Enclosure,
    Finite,
    ProvenInfinite,
    check_certificate,
    series_tail,
)
from acr_spaces.sets import Interval, IntervalFamily, is_subset_of, measure
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings
from acr_spaces.witnesses import (
    BUDGET,
    ACFailureWitness,
    AdversaryLedger,
    SetAReport,
    Theorem2Ledger,
)

log = structlog.get_logger("acr.verify")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    subject: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def _pairwise_disjoint(intervals: list[Interval]) -> bool:
    ordered = sorted(intervals, key=Interval.sort_key)
    for a, b in zip(ordered, ordered[1:], strict=False):
        if a.right is None or a.overlaps(b):
            return False
    return True


def _report(subject: str, checks: list[Check]) -> VerificationReport:
    report = VerificationReport(subject, tuple(checks))
    log.info("verify.done", subject=subject, passed=report.passed, checks=len(checks))
    return report


@singledispatch
def verify_ledger(ledger: object, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VerificationReport:
    raise TypeError(f"no verifier for {type(ledger).__name__}")


@verify_ledger.register
def _(ledger: ACFailureWitness, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VerificationReport:
    f = SqrtPeriodic()
    intervals = [Interval.closed(x, y) for x, y in ledger.pairs]
    length = sum((y - x for x, y in ledger.pairs), Fraction(0))
    variation = sum(
        (abs(f.evaluate(y, settings) - f.evaluate(x, settings)) for x, y in ledger.pairs),
        Enclosure.point(0),
    )
    expected = [(Fraction(2 * i), 2 * i + ledger.delta / (i * i)) for i in range(1, len(ledger.pairs) + 1)]
    return _report(
        "ac-failure",
        [
            Check("pairs follow x_i = 2i, y_i = 2i + delta/i^2", list(ledger.pairs) == expected),
            Check("pairs disjoint", _pairwise_disjoint(intervals)),
            Check("length sum recomputed", ledger.length_sum == Enclosure.point(length)),
            Check("length sum < 2 delta", length < 2 * ledger.delta, f"{length} vs {2 * ledger.delta}"),
            Check("variation sum encloses recomputation", variation.intersects(ledger.variation_sum)),
            Check("epsilon below variation", ledger.epsilon_claim <= variation.lo),
        ],
    )


@verify_ledger.register
def _(ledger: SetAReport, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VerificationReport:
    size = measure(ledger.family, settings=settings)
    entries = ledger.integral.ledger
    harmonic_ok = all(e.partial_lower == _harmonic(e.index) for e in entries)
    value = ledger.integral.value
    certified = isinstance(value, ProvenInfinite) and check_certificate(
        value.certificate, [(e.index, e.contribution.lo) for e in entries], width=settings.root_width
    )
    return _report(
        "set-A",
        [
            Check("measure finite", isinstance(size, Finite)),
            Check(
                "measure width <= 1/50",
                isinstance(size, Finite) and size.enclosure.width <= Fraction(1, 50),
            ),
            Check("ledger partial sums are harmonic numbers", bool(entries) and harmonic_ok),
            Check("divergence certificate re-checks", certified),
            Check("f' outside L1G", ledger.derivative_l1g.status is Status.OUT),
            Check("f outside AC", ledger.ac.status is Status.OUT),
        ],
    )


@verify_ledger.register
def _(ledger: AdversaryLedger, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VerificationReport:
    derivative = ledger.function.derivative()
    checks: list[Check] = []
    every = [iv for fam in ledger.families for iv in fam.family.head]
    checks.append(Check("families pairwise disjoint", _pairwise_disjoint(every)))
    union_measure = Fraction(0)
    for fam in ledger.families:
        size = sum((iv.length for iv in fam.family.head), Fraction(0))
        union_measure += size
        integral = integral_abs_over(derivative, fam.family, settings=settings).value
        lower = integral.enclosure.lo if isinstance(integral, Finite) else None
        checks.append(Check(f"A_{fam.index} measure <= r_n", size <= BUDGET.exact(fam.index), str(size)))
        checks.append(
            Check(
                f"A_{fam.index} integral >= eps(1 - 1/n^2)",
                lower is not None and lower >= fam.proof_bound,
                f"{lower} vs {fam.proof_bound}",
            )
        )
    total = series_tail(BUDGET, 1, truncation=settings.series_truncation, width=settings.root_width)
    checks.append(
        Check("union measure <= sum r_n", union_measure <= total.enclosure.hi, str(union_measure))
    )
    if len(ledger.families) >= 3:
        bounds = [(fam.index, fam.proof_bound) for fam in ledger.families[1:]]
        checks.append(
            Check(
                "divergence certificate re-checks",
                ledger.certificate is not None
                and check_certificate(ledger.certificate, bounds, width=settings.root_width),
            )
        )
    return _report("thm1", checks)


@verify_ledger.register
def _(ledger: Theorem2Ledger, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VerificationReport:
    f = ledger.function
    checks: list[Check] = []
    every = [iv for step in ledger.steps for iv in step.piece.head]
    checks.append(Check("pieces pairwise disjoint", _pairwise_disjoint(every)))
    indices = [step.window_index for step in ledger.steps]
    checks.append(
        Check("window indices strictly increase", all(a < b for a, b in zip(indices, indices[1:], strict=False)))
    )
    running = Fraction(0)
    previous: Interval | None = None
    for step in ledger.steps:
        n = step.n
        size = sum((iv.length for iv in step.piece.head), Fraction(0))
        level_set = f.superlevel(Fraction(n), settings)
        integral = integral_abs_over(f, step.piece, settings=settings).value
        running += step.lower_bound
        window = IntervalFamily.of(step.window)
        inside_window = is_subset_of(step.piece, window)
        outside_previous = previous is None or not any(
            iv.overlaps(previous) for iv in step.piece.head
        )
        checks += [
            Check(f"G_{n} inside S_{n}", is_subset_of(step.piece, level_set)),
            Check(f"G_{n} measure in [1/n^2, 2/n^2]", Fraction(1, n * n) <= size <= Fraction(2, n * n)),
            Check(f"G_{n} inside F_(a_n)", inside_window),
            Check(f"G_{n} outside previous window", outside_previous),
            Check(
                f"G_{n} integral >= n * measure",
                isinstance(integral, Finite) and integral.enclosure.lo >= n * size >= step.lower_bound,
            ),
            Check(f"partial sum at {n} >= H_{n}", running >= _harmonic(n), str(running)),
        ]
        previous = step.window
    return _report("thm2", checks)


@verify_ledger.register
def _(ledger: VariationBound, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VerificationReport:
    checks = [Check("bound is n0 + 1", ledger.case == 1 or ledger.bound == ledger.n0 + 1)]
    for i, bundle in enumerate(ledger.bundles):
        length = sum((iv.length for iv in bundle.pieces), Fraction(0))
        checks.append(Check(f"bundle {i} length <= delta", length <= ledger.delta, str(length)))
    return _report("variation-bound", checks)


def verify_variation_bound(
    f: FunctionSpec, ledger: VariationBound, *, settings: AnalysisSettings = DEFAULT_SETTINGS
) -> VerificationReport:
    """Like ``verify_ledger`` but also recomputes each bundle's variation of ``f``."""
    checks = list(verify_ledger(ledger, settings=settings).checks)
    total = Enclosure.point(0)
    for i, bundle in enumerate(ledger.bundles):
        values = [
            total_variation(f, iv.left, iv.right, settings=settings)
            for iv in bundle.pieces
            if iv.length > 0
        ]
        if not all(isinstance(v, Finite) for v in values):
            checks.append(Check(f"bundle {i} variation finite", False))
            continue
        variation = sum((v.enclosure for v in values), Enclosure.point(0))
        total = total + variation
        checks.append(Check(f"bundle {i} variation <= 1", variation.hi <= 1, str(variation)))
    checks.append(Check("total variation <= bound", total.hi <= ledger.bound, str(total)))
    return _report("variation-bound", checks)

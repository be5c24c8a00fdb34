"""Explicit constructions that show where absolute continuity on R breaks down.

* ``ac_failure_intervals``: intervals [2i, 2i + delta/i^2] of total length below 2*delta
  on which the periodic square root still varies by sqrt(delta) * H_k.
* ``application_set_A``: the finite-measure set of windows [2n, 2n + 1/n^2] over which
  the derivative of the periodic square root has infinite integral.
* ``theorem1_adversary``: disjoint families A_1..A_N with measure(A_n) <= 1/n^2, each
  carrying at least eps(1 - 1/n^2) of the integral of |f'|.
* ``theorem2_construction``: disjoint pieces G_n of the superlevel sets {|f| >= n} with
  measure between 1/n^2 and 2/n^2, so the integral of |f| over their union diverges.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

import structlog

from acr_spaces.catalog import FunctionSpec, SqrtPeriodic, SqrtPeriodicDeriv
from acr_spaces.classifier import SpaceId, Status, Verdict, membership
from acr_spaces.errors import (
    BudgetInfeasibleError,
    InvalidParameterError,
    NoDerivativeInCatalogError,
    NotApplicableError,
)
from acr_spaces.functions import IntegralResult, integral_abs_over
from acr_spaces.numerics import (
    DivergenceCertificate,
    Enclosure,
    ExtendedValue,
    Finite,
    SeqTerm,
    as_rational,
    divergence_by_comparison,
    format_rational,
    series_tail,
)
from acr_spaces.sets import Interval, IntervalFamily, LeftMap, TailDescriptor, measure, restrict_beyond
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

log = structlog.get_logger("acr.witnesses")

BUDGET = SeqTerm(1, 2)


@dataclass(frozen=True)
class ACFailureWitness:
    delta: Fraction
    pairs: tuple[tuple[Fraction, Fraction], ...]
    length_sum: Enclosure
    variation_sum: Enclosure
    epsilon_claim: Fraction


def ac_failure_intervals(
    delta: object, count: int, *, settings: AnalysisSettings = DEFAULT_SETTINGS
) -> ACFailureWitness:
    d = as_rational(delta)
    if not 0 < d < Fraction(1, 2):
        raise InvalidParameterError(f"delta must lie in (0, 1/2), got {format_rational(d)}")
    if count < 1:
        raise InvalidParameterError(f"count must be >= 1, got {count}")
    f = SqrtPeriodic()
    pairs = tuple((Fraction(2 * i), 2 * i + d / (i * i)) for i in range(1, count + 1))
    length = sum((y - x for x, y in pairs), Fraction(0))
    variation = sum(
        (abs(f.evaluate(y, settings) - f.evaluate(x, settings)) for x, y in pairs),
        Enclosure.point(0),
    )
    if variation.lo <= 0:
        raise InvalidParameterError(f"variation enclosure {variation} is not bounded away from zero")
    # the largest multiple of 1/grid strictly below variation.lo, on a grid fine enough to stay positive
    grid = 1000
    while variation.lo * grid <= 1:
        grid *= 1000
    epsilon = Fraction(math.ceil(variation.lo * grid) - 1, grid)
    log.debug("ac_failure.built", delta=format_rational(d), count=count, variation=str(variation))
    return ACFailureWitness(d, pairs, Enclosure.point(length), variation, epsilon)


@dataclass(frozen=True)
class SetAReport:
    family: IntervalFamily
    measure: ExtendedValue
    integral: IntegralResult
    derivative_l1g: Verdict
    ac: Verdict


def set_a() -> IntervalFamily:
    return IntervalFamily(tail=TailDescriptor(1, LeftMap(2), BUDGET))


def application_set_A(*, settings: AnalysisSettings = DEFAULT_SETTINGS) -> SetAReport:  # noqa: N802
    fam = set_a()
    derivative = SqrtPeriodicDeriv()
    report = SetAReport(
        family=fam,
        measure=measure(fam, settings=settings),
        integral=integral_abs_over(derivative, fam, settings=settings),
        derivative_l1g=membership(derivative, SpaceId.L1G, settings=settings),
        ac=membership(SqrtPeriodic(), SpaceId.AC, settings=settings),
    )
    log.info(
        "set_a.done",
        measure=type(report.measure).__name__,
        integral=type(report.integral.value).__name__,
    )
    return report


@dataclass(frozen=True)
class AdversaryFamily:
    index: int
    shape: str
    cutoff: Fraction
    family: IntervalFamily
    contributions: tuple[Enclosure, ...]
    measure: Fraction
    budget: Fraction
    delta: Fraction
    lower_bound: Fraction
    proof_bound: Fraction

    @property
    def m(self) -> Fraction:
        return min(self.delta, self.budget)

    @property
    def reach(self) -> Fraction:
        return self.family.head[-1].right


@dataclass(frozen=True)
class AdversaryLedger:
    function: FunctionSpec
    epsilon: Fraction
    budget: SeqTerm
    families: tuple[AdversaryFamily, ...]
    union_measure: Fraction
    budget_total: Enclosure
    certificate: DivergenceCertificate | None

    @property
    def cutoffs(self) -> list[Fraction]:
        return [f.reach for f in self.families]

    @property
    def per_family_lower_bounds(self) -> list[Fraction]:
        return [f.lower_bound for f in self.families]

    @property
    def ms(self) -> list[Fraction]:
        return [f.m for f in self.families]


def _run(
    derivative: FunctionSpec,
    anchors: Iterator[Fraction],
    widths: list[Fraction],
    settings: AnalysisSettings,
) -> tuple[list[Interval], list[Enclosure]]:
    intervals, contributions = [], []
    for width in widths:
        x = next(anchors)
        value = derivative.integral_abs(x, x + width, settings)
        if not isinstance(value, Finite):
            raise NotApplicableError(f"integral of |f'| over [{x}, {x + width}] is not finite")
        intervals.append(Interval.closed(x, x + width))
        contributions.append(value.enclosure)
    return intervals, contributions


def _harmonic_run(
    derivative: FunctionSpec,
    anchors: Iterator[Fraction],
    delta: Fraction,
    epsilon: Fraction,
    settings: AnalysisSettings,
) -> tuple[list[Interval], list[Enclosure]] | None:
    # [x_i, x_i + delta/i^2] at successive anchors until eps is reached or the cap runs out
    intervals, contributions = [], []
    total = Fraction(0)
    for i in range(1, settings.harmonic_run_cap + 1):
        (iv,), (value,) = _run(derivative, anchors, [delta / (i * i)], settings)
        intervals.append(iv)
        contributions.append(value)
        total += value.lo
        if total >= epsilon:
            return intervals, contributions
    return None


def _uniform_run(
    derivative: FunctionSpec,
    anchors: Iterator[Fraction],
    budget: Fraction,
    epsilon: Fraction,
    settings: AnalysisSettings,
) -> tuple[list[Interval], list[Enclosure]]:
    # s^2 intervals of width budget/s^2 carry s times the variation of one width-budget interval
    first = next(anchors)
    single = derivative.integral_abs(first, first + budget, settings)
    if not isinstance(single, Finite) or single.enclosure.lo <= 0:
        raise BudgetInfeasibleError(f"no variation near anchor {format_rational(first)}")
    s = max(1, math.ceil(epsilon / single.enclosure.lo))
    if s * s > settings.uniform_run_cap:
        raise BudgetInfeasibleError(
            f"eps={format_rational(epsilon)} needs {s * s} intervals within measure "
            f"{format_rational(budget)}; cap is {settings.uniform_run_cap}"
        )
    widths = [budget / (s * s)] * (s * s)
    return _run(derivative, itertools.chain([first], anchors), widths, settings)


def _lipschitz_infeasible(
    f: FunctionSpec, depth: int, epsilon: Fraction, settings: AnalysisSettings
) -> bool:
    try:
        bound = f.derivative().sup_abs(settings)
    except NoDerivativeInCatalogError:
        return False
    return bound is not None and bound.hi * BUDGET.exact(depth) < epsilon


def theorem1_adversary(
    f: FunctionSpec,
    depth: int,
    epsilon: object,
    *,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> AdversaryLedger:
    """Disjoint families with summable measure and non-summable integrals of |f'|.

    Family n is placed beyond the right end of family n-1 so it never has to be
    trimmed. It is a harmonic run [x_i, x_i + 1/(4 n^2 i^2)] at successive anchors when
    that reaches eps within ``harmonic_run_cap`` intervals, otherwise s^2 equal
    intervals sharing the whole budget 1/n^2.
    """
    eps = as_rational(epsilon)
    if eps <= 0:
        raise InvalidParameterError(f"epsilon must be positive, got {format_rational(eps)}")
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    if f.ac_failure_anchors(Fraction(0)) is None:
        if _lipschitz_infeasible(f, depth, eps, settings):
            raise BudgetInfeasibleError(
                f"sup|f'| * 1/{depth}^2 < eps={format_rational(eps)}: no set of measure "
                f"1/{depth}^2 carries enough variation of {f.canonical()}"
            )
        raise NotApplicableError(f"{f.canonical()} has no AC-failure witness generator")

    derivative = f.derivative()
    families: list[AdversaryFamily] = []
    cutoff = Fraction(0)
    for n in range(1, depth + 1):
        budget = BUDGET.exact(n)
        delta = budget / 4
        anchors = f.ac_failure_anchors(cutoff)
        run = _harmonic_run(derivative, anchors, delta, eps, settings)
        shape = "harmonic"
        if run is None:
            shape, delta = "uniform", budget
            run = _uniform_run(derivative, f.ac_failure_anchors(cutoff), budget, eps, settings)
        intervals, contributions = run
        fam = IntervalFamily(tuple(intervals))
        lower = sum((c.lo for c in contributions), Fraction(0))
        entry = AdversaryFamily(
            index=n,
            shape=shape,
            cutoff=cutoff,
            family=fam,
            contributions=tuple(contributions),
            measure=sum((iv.length for iv in intervals), Fraction(0)),
            budget=budget,
            delta=delta,
            lower_bound=lower,
            proof_bound=eps * (1 - budget),
        )
        log.debug("adversary.family", n=n, shape=shape, k=len(intervals), lower=str(lower))
        families.append(entry)
        cutoff = entry.reach

    certificate = None
    if depth >= 3:
        result = divergence_by_comparison(
            [(e.index, e.proof_bound) for e in families[1:]],
            exponents=settings.comparison_exponents,
            width=settings.root_width,
        )
        if isinstance(result, DivergenceCertificate):
            certificate = result
    total = series_tail(BUDGET, 1, truncation=settings.series_truncation, width=settings.root_width)
    return AdversaryLedger(
        function=f,
        epsilon=eps,
        budget=BUDGET,
        families=tuple(families),
        union_measure=sum((e.measure for e in families), Fraction(0)),
        budget_total=total.enclosure,
        certificate=certificate,
    )


@dataclass(frozen=True)
class Theorem2Step:
    n: int
    superlevel: IntervalFamily
    cutoff: Fraction
    window_index: int
    piece: IntervalFamily
    measure: Fraction
    integral: Enclosure
    lower_bound: Fraction

    @property
    def window(self) -> Interval:
        half = Fraction(self.window_index, 2 * self.n * self.n)
        return Interval.closed(-half, half)


@dataclass(frozen=True)
class Theorem2Ledger:
    function: FunctionSpec
    steps: tuple[Theorem2Step, ...]
    certificate: DivergenceCertificate | None

    @property
    def total_measure(self) -> Fraction:
        return sum((s.measure for s in self.steps), Fraction(0))

    @property
    def lower_sum(self) -> Fraction:
        return sum((s.lower_bound for s in self.steps), Fraction(0))


def _take(pieces: Iterator[Interval], target: Fraction, cap: int, ascending: bool) -> list[Interval]:
    """Leading pieces (or their clipped part) adding up to exactly ``target``."""
    taken: list[Interval] = []
    remaining = target
    for count, iv in enumerate(pieces):
        if remaining <= 0 or count >= cap:
            break
        if ascending:
            length = remaining if iv.right is None else min(iv.length, remaining)
            clipped = Interval(iv.left, iv.left + length, iv.left_closed, True)
        else:
            length = remaining if iv.left is None else min(iv.length, remaining)
            clipped = Interval(iv.right - length, iv.right, True, iv.right_closed)
        if length > 0:
            taken.append(iv if iv.bounded and length == iv.length else clipped)
            remaining -= length
    return taken


def _select(fam: IntervalFamily, cutoff: Fraction, target: Fraction, cap: int) -> list[Interval]:
    positive = (iv for iv in fam.iter_intervals() if iv.left is not None and iv.left >= cutoff)
    taken = _take(positive, target, cap, ascending=True)
    got = sum((iv.length for iv in taken), Fraction(0))
    if got < target:
        negative = sorted(
            (iv for iv in fam.head if iv.right is not None and iv.right <= -cutoff),
            key=lambda iv: iv.right,
            reverse=True,
        )
        taken += _take(iter(negative), target - got, cap, ascending=False)
    return taken


def theorem2_construction(
    f: FunctionSpec, depth: int, *, settings: AnalysisSettings = DEFAULT_SETTINGS
) -> Theorem2Ledger:
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    verdict = membership(f, SpaceId.L1H, settings=settings)
    if verdict.status is not Status.OUT:
        raise NotApplicableError(
            f"{f.canonical()} is {verdict.status.value} for L1H; every superlevel set must have "
            "infinite measure"
        )
    steps: list[Theorem2Step] = []
    previous_index = 0
    cutoff = Fraction(0)
    for n in range(1, depth + 1):
        target = BUDGET.exact(n)
        level_set = f.superlevel(Fraction(n), settings)
        beyond = restrict_beyond(level_set, cutoff)
        pieces = _select(beyond, cutoff, target, settings.uniform_run_cap)
        got = sum((iv.length for iv in pieces), Fraction(0))
        if got < target:
            raise NotApplicableError(
                f"superlevel set at level {n} beyond {format_rational(cutoff)} has measure "
                f"{format_rational(got)} < 1/{n}^2 within the materialization cap"
            )
        piece = IntervalFamily(tuple(pieces))
        integral = integral_abs_over(f, piece, settings=settings).value
        if not isinstance(integral, Finite):
            raise NotApplicableError(f"integral of |f| over G_{n} is not finite")
        reach = max(max(abs(iv.left), abs(iv.right)) for iv in piece.head)
        index = max(math.ceil(2 * n * n * reach), previous_index + 1)
        steps.append(
            Theorem2Step(n, level_set, cutoff, index, piece, got, integral.enclosure, n * got)
        )
        log.debug("theorem2.step", n=n, window_index=index, cutoff=format_rational(cutoff))
        previous_index = index
        cutoff = Fraction(index, 2 * n * n)

    certificate = None
    if depth >= 2:
        result = divergence_by_comparison(
            [(s.n, s.lower_bound) for s in steps],
            exponents=settings.comparison_exponents,
            width=settings.root_width,
        )
        if isinstance(result, DivergenceCertificate):
            certificate = result
    return Theorem2Ledger(f, tuple(steps), certificate)

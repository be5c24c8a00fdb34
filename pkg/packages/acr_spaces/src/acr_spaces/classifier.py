"""Membership of catalog functions in L1, Linf, L1loc, L1H, L1G, ACloc and AC(R).

L1H holds when some superlevel set {|f| >= M} has finite measure. L1G holds when |f|
is integrable over every set of finite measure; it is decided by splitting f at a
level M: below M the function is bounded, above it the integral over the superlevel
set must be finite. AC(R) is decided through the characterization
"f in AC(R) iff f in ACloc and f' in L1G".
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self.value), format_spec)
from fractions import Fraction

import structlog

from acr_spaces.catalog import FunctionSpec, Scale, SumOf
from acr_spaces.errors import (
    InvalidParameterError,
    LatticeViolationError,
    ModulusViolationError,
    NoDerivativeInCatalogError,
    SuperlevelNotRepresentableError,
)
from acr_spaces.functions import IntegralResult, LedgerEntry, integral_abs_over, total_variation
from acr_spaces.numerics import (
    DivergenceCertificate,
    Enclosure,
    ExtendedValue,
    Finite,
    ProvenInfinite,
    as_rational,
    format_rational,
)
from acr_spaces.sets import Interval, IntervalFamily, chop, measure
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

log = structlog.get_logger("acr.classifier")


class SpaceId(StrEnum):
    L1 = "L1"
    LINF = "Linf"
    L1LOC = "L1loc"
    L1H = "L1H"
    L1G = "L1G"
    ACLOC = "ACloc"
    AC = "AC"


class Status(StrEnum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class BoundCert:
    quantity: str
    enclosure: Enclosure


@dataclass(frozen=True)
class InfiniteCert:
    quantity: str
    certificate: DivergenceCertificate


@dataclass(frozen=True)
class ThresholdCert:
    """Level M with its superlevel set; ``rule`` is set when every level is infinite."""

    level: Fraction
    superlevel: IntervalFamily
    measure: ExtendedValue
    tail_integral: ExtendedValue | None = None
    rule: str = ""


@dataclass(frozen=True)
class DivergentFamilyCert:
    family: IntervalFamily
    measure: ExtendedValue
    ledger: tuple[LedgerEntry, ...]
    certificate: DivergenceCertificate


@dataclass(frozen=True)
class AttributeCert:
    justification: str


@dataclass(frozen=True)
class ImplicationCert:
    source: SpaceId
    direction: str
    premises: tuple[Verdict, ...] = ()


@dataclass(frozen=True)
class ClosureCert:
    rule: str
    parts: tuple[Verdict, ...]


Certificate = (
    BoundCert
    | InfiniteCert
    | ThresholdCert
    | DivergentFamilyCert
    | AttributeCert
    | ImplicationCert
    | ClosureCert
)


@dataclass(frozen=True)
class Verdict:
    space: SpaceId
    status: Status
    certificate: Certificate | None = None
    reason: str = ""

    def __post_init__(self) -> None:
        if self.status is not Status.UNKNOWN and self.certificate is None:
            raise InvalidParameterError(f"{self.status} verdict for {self.space} needs a certificate")
        if self.status is Status.UNKNOWN and not self.reason:
            raise InvalidParameterError("Unknown verdicts carry a reason")


def _unknown(space: SpaceId, reason: str) -> Verdict:
    return Verdict(space, Status.UNKNOWN, None, reason)


# (a, b): membership in a implies membership in b
IMPLICATIONS: tuple[tuple[SpaceId, SpaceId], ...] = (
    (SpaceId.L1, SpaceId.L1G),
    (SpaceId.LINF, SpaceId.L1G),
    (SpaceId.L1G, SpaceId.L1H),
    (SpaceId.L1, SpaceId.L1LOC),
    (SpaceId.L1G, SpaceId.L1LOC),
    (SpaceId.AC, SpaceId.ACLOC),
)


@dataclass(frozen=True)
class VennPlacement:
    function: str
    verdicts: tuple[Verdict, ...]

    def verdict(self, space: SpaceId) -> Verdict:
        for v in self.verdicts:
            if v.space is space:
                return v
        raise KeyError(space)

    def status(self, space: SpaceId) -> Status:
        return self.verdict(space).status

    def statuses(self) -> dict[str, str]:
        return {v.space.value: v.status.value for v in self.verdicts}


def superlevel(
    f: FunctionSpec, level: object, *, settings: AnalysisSettings = DEFAULT_SETTINGS
) -> IntervalFamily:
    m = as_rational(level)
    if m <= 0:
        raise InvalidParameterError(f"superlevel threshold must be positive, got {m}")
    return f.superlevel(m, settings)


def _l1(f: FunctionSpec, settings: AnalysisSettings) -> Verdict:
    value = f.l1_norm(settings)
    if isinstance(value, Finite):
        return Verdict(SpaceId.L1, Status.IN, BoundCert("integral of |f| over R", value.enclosure))
    if isinstance(value, ProvenInfinite):
        return Verdict(
            SpaceId.L1, Status.OUT, InfiniteCert("integral of |f| over R", value.certificate)
        )
    return _unknown(SpaceId.L1, value.reason)


def _linf(f: FunctionSpec, settings: AnalysisSettings) -> Verdict:
    bound = f.sup_abs(settings)
    if bound is not None:
        return Verdict(SpaceId.LINF, Status.IN, BoundCert("ess sup |f|", bound))
    return Verdict(SpaceId.LINF, Status.OUT, AttributeCert(f.unbounded_reason()))


def _l1loc(f: FunctionSpec, settings: AnalysisSettings) -> Verdict:
    window = f.local_singularity()
    if window is None:
        return Verdict(
            SpaceId.L1LOC,
            Status.IN,
            AttributeCert("|f| has a finite integral over every compact interval"),
        )
    lo, hi = window
    value = f.integral_abs(lo, hi, settings)
    quantity = f"integral of |f| over [{format_rational(lo)}, {format_rational(hi)}]"
    if isinstance(value, ProvenInfinite):
        return Verdict(SpaceId.L1LOC, Status.OUT, InfiniteCert(quantity, value.certificate))
    return _unknown(SpaceId.L1LOC, f"{quantity} was not certified infinite")


def _l1h(f: FunctionSpec, settings: AnalysisSettings) -> Verdict:
    try:
        rule = f.l1h_rule()
        if rule:
            fam = f.superlevel(Fraction(1), settings)
            return Verdict(
                SpaceId.L1H,
                Status.OUT,
                ThresholdCert(Fraction(1), fam, measure(fam, settings=settings), rule=rule),
            )
        for k in range(settings.k_max + 1):
            level = Fraction(2) ** k
            fam = f.superlevel(level, settings)
            size = measure(fam, settings=settings)
            if isinstance(size, Finite):
                log.debug("l1h.threshold", function=f.canonical(), level=str(level))
                return Verdict(SpaceId.L1H, Status.IN, ThresholdCert(level, fam, size))
    except SuperlevelNotRepresentableError as exc:
        return _unknown(SpaceId.L1H, str(exc))
    return _unknown(SpaceId.L1H, f"no superlevel set of finite measure up to M = 2^{settings.k_max}")


def _l1g(f: FunctionSpec, settings: AnalysisSettings, l1h: Verdict | None = None) -> Verdict:
    l1h = l1h or _l1h(f, settings)
    if l1h.status is Status.OUT:
        return Verdict(
            SpaceId.L1G,
            Status.OUT,
            ImplicationCert(SpaceId.L1H, "outside L1H implies outside L1G", (l1h,)),
        )
    if l1h.status is Status.UNKNOWN:
        return _unknown(SpaceId.L1G, f"L1H undecided: {l1h.reason}")
    threshold = l1h.certificate
    result: IntegralResult = integral_abs_over(f, threshold.superlevel, settings=settings)
    value = result.value
    if isinstance(value, Finite):
        return Verdict(
            SpaceId.L1G,
            Status.IN,
            ThresholdCert(threshold.level, threshold.superlevel, threshold.measure, value),
        )
    if isinstance(value, ProvenInfinite):
        return Verdict(
            SpaceId.L1G,
            Status.OUT,
            DivergentFamilyCert(
                threshold.superlevel, threshold.measure, result.ledger, value.certificate
            ),
        )
    return _unknown(SpaceId.L1G, value.reason)


def _acloc(f: FunctionSpec, settings: AnalysisSettings) -> Verdict:
    attrs = f.attributes()
    if attrs.ac_loc is None:
        return _unknown(SpaceId.ACLOC, attrs.justification)
    status = Status.IN if attrs.ac_loc else Status.OUT
    return Verdict(SpaceId.ACLOC, status, AttributeCert(attrs.justification))


def ac_via_theorem1(f: FunctionSpec, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Verdict:
    """AC(R) membership as ACloc plus integrability of f' over finite-measure sets."""
    d = f.derivative()
    acloc = _acloc(f, settings)
    if acloc.status is Status.OUT:
        return Verdict(
            SpaceId.AC, Status.OUT, ImplicationCert(SpaceId.ACLOC, "AC requires ACloc", (acloc,))
        )
    derivative_verdict = membership(d, SpaceId.L1G, settings=settings)
    if acloc.status is Status.UNKNOWN:
        return _unknown(SpaceId.AC, f"ACloc undecided: {acloc.reason}")
    if derivative_verdict.status is Status.IN:
        return Verdict(
            SpaceId.AC,
            Status.IN,
            ImplicationCert(
                SpaceId.L1G, "f in ACloc and f' in L1G give f in AC", (acloc, derivative_verdict)
            ),
        )
    if derivative_verdict.status is Status.OUT:
        return Verdict(
            SpaceId.AC,
            Status.OUT,
            ImplicationCert(SpaceId.L1G, "f' outside L1G rules out AC", (derivative_verdict,)),
        )
    return _unknown(SpaceId.AC, f"L1G of f' undecided: {derivative_verdict.reason}")


def _ac(f: FunctionSpec, settings: AnalysisSettings) -> Verdict:
    acloc = _acloc(f, settings)
    if acloc.status is Status.OUT:
        return Verdict(
            SpaceId.AC, Status.OUT, ImplicationCert(SpaceId.ACLOC, "AC requires ACloc", (acloc,))
        )
    try:
        return ac_via_theorem1(f, settings=settings)
    except NoDerivativeInCatalogError as exc:
        return _unknown(SpaceId.AC, str(exc))


_HANDLERS: dict[SpaceId, Callable[[FunctionSpec, AnalysisSettings], Verdict]] = {
    SpaceId.L1: _l1,
    SpaceId.LINF: _linf,
    SpaceId.L1LOC: _l1loc,
    SpaceId.L1H: _l1h,
    SpaceId.L1G: _l1g,
    SpaceId.ACLOC: _acloc,
    SpaceId.AC: _ac,
}


def _sum_beneath(f: FunctionSpec) -> SumOf | None:
    while isinstance(f, Scale):
        f = f.inner
    return f if isinstance(f, SumOf) else None


def _closure_membership(s: SumOf, space: SpaceId, settings: AnalysisSettings) -> Verdict:
    # every space here is a vector space, and nonzero scaling never changes membership
    parts = tuple(membership(p, space, settings=settings) for p in s.parts)
    statuses = [v.status for v in parts]
    if statuses == [Status.IN, Status.IN]:
        return Verdict(space, Status.IN, ClosureCert("sum of two members", parts))
    if sorted(statuses) == sorted([Status.IN, Status.OUT]):
        return Verdict(
            space, Status.OUT, ClosureCert("member plus non-member is a non-member", parts)
        )
    return _unknown(space, f"sum closure undecided for parts {[str(s) for s in statuses]}")


def membership(
    f: FunctionSpec, space: SpaceId | str, *, settings: AnalysisSettings = DEFAULT_SETTINGS
) -> Verdict:
    space = SpaceId(space)
    log.debug("membership.start", space=space.value, function=f.canonical())
    sum_node = _sum_beneath(f)
    if sum_node is not None and space not in (SpaceId.ACLOC, SpaceId.AC):
        return _closure_membership(sum_node, space, settings)
    return _HANDLERS[space](f, settings)


def check_lattice(placement: VennPlacement) -> None:
    for a, b in IMPLICATIONS:
        if placement.status(a) is Status.IN and placement.status(b) is Status.OUT:
            raise LatticeViolationError(
                f"{placement.function}: In({a.value}) but Out({b.value})"
            )


def classify(f: FunctionSpec, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> VennPlacement:
    verdicts: dict[SpaceId, Verdict] = {}
    for space in SpaceId:
        if space is SpaceId.L1G and _sum_beneath(f) is None:
            verdicts[space] = _l1g(f, settings, verdicts[SpaceId.L1H])
        else:
            verdicts[space] = membership(f, space, settings=settings)
    placement = VennPlacement(f.canonical(), tuple(verdicts[s] for s in SpaceId))
    check_lattice(placement)
    log.info("classify.done", function=placement.function, **placement.statuses())
    return placement


@dataclass(frozen=True)
class Bundle:
    """Chopped pieces grouped so that the group is one long piece or a short remainder."""

    pieces: tuple[Interval, ...]
    length: Fraction
    variation: Enclosure


@dataclass(frozen=True)
class VariationBound:
    bound: int
    case: int
    n0: int | None
    measure: Fraction
    delta: Fraction
    bundles: tuple[Bundle, ...]
    verified_total: Enclosure


def _variation(f: FunctionSpec, iv: Interval, settings: AnalysisSettings) -> Enclosure:
    if iv.length == 0:
        return Enclosure.point(0)
    value = total_variation(f, iv.left, iv.right, settings=settings)
    if not isinstance(value, Finite):
        raise ModulusViolationError(f"variation of {f.canonical()} over {iv} is not finite")
    return value.enclosure


def _bundle(f: FunctionSpec, pieces: list[Interval], settings: AnalysisSettings) -> Bundle:
    variation = sum((_variation(f, iv, settings) for iv in pieces), Enclosure.point(0))
    length = sum((iv.length for iv in pieces), Fraction(0))
    return Bundle(tuple(pieces), length, variation)


def l1g_bound_via_variation(
    f: FunctionSpec,
    fam: IntervalFamily,
    delta: object,
    *,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> VariationBound:
    """Bound the integral of |f'| over ``fam`` by n0 + 1, checking it constructively.

    ``delta`` is claimed to be a modulus of absolute continuity of f for eps = 1: any
    collection of disjoint intervals of total length below delta carries variation
    below 1. The family is chopped into pieces of length in (delta/2, delta]; pieces
    shorter than delta/2 are grouped into bundles of total length at most delta.
    """
    d = as_rational(delta)
    if d <= 0:
        raise InvalidParameterError(f"delta must be positive, got {d}")
    if fam.tail is not None or not fam.bounded:
        raise InvalidParameterError("the variation bound needs a finite bounded family")
    size = sum((iv.length for iv in fam.head), Fraction(0))

    if size < d:
        only = _bundle(f, list(fam.head), settings)
        if only.variation.hi > 1:
            raise ModulusViolationError(
                f"total length {format_rational(size)} < delta yet variation {only.variation} exceeds 1"
            )
        return VariationBound(1, 1, None, size, d, (only,), only.variation)

    n0 = math.floor(size / (d / 2))
    bundles: list[Bundle] = []
    pending: list[Interval] = []
    pending_length = Fraction(0)
    for iv in chop(fam, d).head:
        if iv.length > d / 2:
            bundles.append(_bundle(f, [iv], settings))
            continue
        pending.append(iv)
        pending_length += iv.length
        if pending_length > d / 2:
            bundles.append(_bundle(f, pending, settings))
            pending, pending_length = [], Fraction(0)
    if pending:
        bundles.append(_bundle(f, pending, settings))

    for bundle in bundles:
        if bundle.variation.hi > 1:
            raise ModulusViolationError(
                f"bundle of length {format_rational(bundle.length)} carries variation "
                f"{bundle.variation} > 1; delta={format_rational(d)} is not a modulus"
            )
    total = sum((b.variation for b in bundles), Enclosure.point(0))
    bound = n0 + 1
    if total.hi > bound:
        raise ModulusViolationError(f"verified variation {total} exceeds n0 + 1 = {bound}")
    log.debug("variation_bound.done", function=f.canonical(), n0=n0, bundles=len(bundles))
    return VariationBound(bound, 2, n0, size, d, tuple(bundles), total)

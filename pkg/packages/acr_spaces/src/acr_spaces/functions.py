"""Operations over catalog functions: evaluation, variation and integration over families."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import structlog

from acr_spaces.catalog import CatalogAttributes, FunctionSpec
from acr_spaces.catalog.base import SHELL_COUNT, comparison
from acr_spaces.errors import InvalidParameterError, NotPiecewiseMonotoneError
from acr_spaces.numerics import (
    DivergenceCertificate,
    Enclosure,
    ExtendedValue,
    Finite,
    Partition,
    ProvenInfinite,
    UnknownValue,
    add_extended,
    as_rational,
    divergence_by_comparison,
)
from acr_spaces.sets import IntervalFamily
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

log = structlog.get_logger("acr.functions")


def evaluate(f: FunctionSpec, x: object, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
    return f.evaluate(as_rational(x), settings)


def derivative(f: FunctionSpec) -> FunctionSpec:
    return f.derivative()


def attributes(f: FunctionSpec) -> CatalogAttributes:
    return f.attributes()


def monotone_breakpoints(f: FunctionSpec, a: object, b: object) -> Partition:
    lo, hi = as_rational(a), as_rational(b)
    if lo >= hi:
        raise InvalidParameterError(f"need a < b, got [{lo}, {hi}]")
    if not f.continuous_on(lo, hi):
        raise NotPiecewiseMonotoneError(f"{f.canonical()} is not continuous on [{lo}, {hi}]")
    return Partition((lo, *f.breakpoints(lo, hi), hi))


def _singular_variation(
    f: FunctionSpec, a: Fraction, b: Fraction, settings: AnalysisSettings
) -> ExtendedValue:
    # variation over dyadic shells approaching the first singular point from inside [a, b]
    s = f.singular_points(a, b)[0]
    reach = min(b - s, Fraction(1, 2)) if s < b else -min(s - a, Fraction(1, 2))
    bounds = []
    for k in range(1, min(settings.depth, SHELL_COUNT) + 1):
        near = f.evaluate(s + reach / 2**k, settings)
        far = f.evaluate(s + reach / 2 ** (k - 1), settings)
        bounds.append((k, abs(near - far).lo))
    return comparison(bounds, settings, f"variation of {f.canonical()} near {s}")


def total_variation(
    f: FunctionSpec,
    a: object,
    b: object,
    *,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> ExtendedValue:
    lo, hi = as_rational(a), as_rational(b)
    if lo >= hi:
        raise InvalidParameterError(f"need a < b, got [{lo}, {hi}]")
    if f.continuous_on(lo, hi):
        partition = monotone_breakpoints(f, lo, hi)
        total = sum(
            (f.piece_variation(u, v, settings) for u, v in partition.pieces()),
            Enclosure.point(0),
        )
        return Finite(total)
    jumps = f.jump_variation(lo, hi, settings)
    if jumps is not None:
        return Finite(jumps)
    if f.singular_points(lo, hi):
        return _singular_variation(f, lo, hi, settings)
    return UnknownValue(f"{f.canonical()} is discontinuous on [{lo}, {hi}] without jump data")


@dataclass(frozen=True)
class LedgerEntry:
    """Contribution of tail interval ``index`` and the running lower bound of the tail sum."""

    index: int
    contribution: Enclosure
    partial_lower: Fraction


@dataclass(frozen=True)
class IntegralResult:
    value: ExtendedValue
    ledger: tuple[LedgerEntry, ...] = ()


def integral_abs_over(
    f: FunctionSpec,
    fam: IntervalFamily,
    depth: int | None = None,
    *,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> IntegralResult:
    """Integral of |f| over every interval of ``fam``.

    Head intervals are integrated exactly. Tail intervals are materialized up to
    ``depth``; the rest is settled by a tail bound when f provides one, otherwise by
    a comparison certificate over the per-interval contributions.
    """
    depth = depth or settings.depth
    head: ExtendedValue = Finite(Enclosure.point(0))
    for iv in fam.head:
        head = add_extended(head, f.integral_abs(iv.left, iv.right, settings))
    if fam.tail is None:
        return IntegralResult(head)

    tail = fam.tail
    ledger: list[LedgerEntry] = []
    running = Enclosure.point(0)
    for n in range(tail.start, tail.start + depth):
        piece = f.integral_abs(tail.left(n), tail.right_end(n), settings)
        if not isinstance(piece, Finite):
            return IntegralResult(add_extended(head, piece), tuple(ledger))
        running = running + piece.enclosure
        ledger.append(LedgerEntry(n, piece.enclosure, running.lo))
    entries = tuple(ledger)
    if isinstance(head, ProvenInfinite):
        return IntegralResult(head, entries)

    rest = f.tail_integral_bound(tail.starting_at(tail.start + depth), settings)
    if isinstance(rest, Finite):
        log.debug("integral.tail_bound", function=f.canonical(), depth=depth)
        return IntegralResult(add_extended(head, Finite(running + rest.enclosure)), entries)
    certificate = divergence_by_comparison(
        [(e.index, e.contribution.lo) for e in entries],
        exponents=settings.comparison_exponents,
        width=settings.root_width,
    )
    if isinstance(certificate, DivergenceCertificate):
        log.debug("integral.diverges", function=f.canonical(), term=str(certificate.term))
        return IntegralResult(ProvenInfinite(certificate), entries)
    if isinstance(rest, ProvenInfinite):
        return IntegralResult(rest, entries)
    return IntegralResult(
        UnknownValue(
            f"depth {depth} exhausted without a tail bound or divergence certificate "
            f"({certificate.reason})"
        ),
        entries,
    )

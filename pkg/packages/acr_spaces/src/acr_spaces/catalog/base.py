from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from acr_spaces.numerics import (
    DivergenceCertificate,
    Enclosure,
    ExtendedValue,
    Finite,
    ProvenInfinite,
    UnknownValue,
    divergence_by_comparison,
    format_rational,
    scale_extended,
    series_tail,
)
from acr_spaces.sets import IntervalFamily, TailDescriptor
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

SHELL_COUNT = 40


@dataclass(frozen=True)
class CatalogAttributes:
    ac_loc: bool | None
    justification: str
    continuous: bool | None
    derivative_known: bool = True


class FunctionSpec(Protocol):
    """A member of the closed function catalog.

    Endpoints passed as ``None`` mean an unbounded side. Methods without a default
    must be supplied by every constructor.
    """

    name: str

    def canonical(self) -> str: ...

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure: ...

    def derivative(self) -> FunctionSpec: ...

    def attributes(self) -> CatalogAttributes: ...

    def continuous_on(self, a: Fraction, b: Fraction) -> bool: ...

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        """Interior points of (a, b) between which f is monotone."""
        ...

    def singular_points(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return []

    def sign_changes(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return []

    def sign_on(self, a: Fraction, b: Fraction) -> int | None:
        """Sign of f on (a, b), assuming no sign change inside; None when unknown."""
        return 1

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue: ...

    def piece_variation(
        self, a: Fraction, b: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> Enclosure:
        """Variation over [a, b] when f is monotone there."""
        return abs(self.evaluate(b, settings) - self.evaluate(a, settings))

    def jump_variation(
        self, a: Fraction, b: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> Enclosure | None:
        return None

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily: ...

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None: ...

    def unbounded_reason(self) -> str:
        return f"{self.canonical()} is essentially unbounded"

    def l1_norm(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> ExtendedValue:
        return self.integral_abs(None, None, settings)

    def tail_integral_bound(
        self, tail: TailDescriptor, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> ExtendedValue | None:
        """Bound of the integral of |f| over every tail interval from ``tail.start`` on."""
        bound = self.sup_abs(settings)
        if bound is None:
            return None
        widths = series_tail(
            tail.width, tail.start, truncation=settings.series_truncation, width=settings.root_width
        )
        if not isinstance(widths, Finite):
            return None
        return Finite(Enclosure(Fraction(0), (bound.hi * widths.enclosure.hi)))

    def local_singularity(self) -> tuple[Fraction, Fraction] | None:
        """A compact window on which |f| is not integrable, if any."""
        return None

    def l1h_rule(self) -> str | None:
        """Why every superlevel set has infinite measure, when that holds."""
        return None

    def ac_failure_anchors(self, beyond: Fraction) -> Iterator[Fraction] | None:
        """Points x > beyond where [x, x + h] (h < 1/2) carries variation ~ sqrt(h)."""
        return None


def fmt(value: Fraction) -> str:
    return format_rational(value)


def comparison(bounds: list[tuple[int, Fraction]], settings: AnalysisSettings, what: str) -> ExtendedValue:
    result = divergence_by_comparison(
        bounds, exponents=settings.comparison_exponents, width=settings.root_width
    )
    if isinstance(result, DivergenceCertificate):
        return ProvenInfinite(result)
    return UnknownValue(f"{what}: {result.reason}")


def ray_integral(
    f: FunctionSpec,
    a: Fraction | None,
    b: Fraction | None,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> ExtendedValue:
    """Certify that the integral of |f| over an unbounded interval diverges.

    The interval is cut into unit pieces walking away from its finite end (from 0 for
    the whole line), and the piece integrals are fed to the comparison rule.
    """
    if b is None:
        origin = Fraction(0) if a is None else a
        pieces = [(origin + k - 1, origin + k) for k in range(1, settings.depth + 1)]
    else:
        pieces = [(b - k, b - k + 1) for k in range(1, settings.depth + 1)]
    bounds = []
    for k, (lo, hi) in enumerate(pieces, start=1):
        value = f.integral_abs(lo, hi, settings)
        if not isinstance(value, Finite):
            return value
        bounds.append((k, value.enclosure.lo))
    return comparison(bounds, settings, f"unit pieces of {f.canonical()}")


def shell_integral(
    f: FunctionSpec,
    point: Fraction,
    reach: Fraction,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> ExtendedValue:
    """Certify divergence of the integral of |f| near a singular point.

    Dyadic shells between point + reach/2^k and point + reach/2^(k-1) are integrated
    exactly; ``reach`` may be negative to approach from the left.
    """
    bounds = []
    for k in range(1, min(settings.depth, SHELL_COUNT) + 1):
        near = point + reach / 2**k
        far = point + reach / 2 ** (k - 1)
        lo, hi = (near, far) if reach > 0 else (far, near)
        value = f.integral_abs(lo, hi, settings)
        if not isinstance(value, Finite):
            return value
        bounds.append((k, value.enclosure.lo))
    return comparison(bounds, settings, f"dyadic shells of {f.canonical()} at {fmt(point)}")


def scaled_bound(value: ExtendedValue | None, factor: Fraction) -> ExtendedValue | None:
    if value is None:
        return None
    return scale_extended(value, factor)

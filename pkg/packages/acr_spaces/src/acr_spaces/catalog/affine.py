from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from acr_spaces.numerics import (
    Enclosure,
    ExtendedValue,
    Finite,
    as_rational,
)
from acr_spaces.sets import Interval, IntervalFamily
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

from .base import CatalogAttributes, FunctionSpec, fmt, ray_integral


def _abs_antiderivative_gap(a: Fraction, b: Fraction, u: Fraction, v: Fraction) -> Fraction:
    # integral of (a x + b) over [u, v]
    return a * (v * v - u * u) / 2 + b * (v - u)


@dataclass(frozen=True)
class Affine(FunctionSpec):
    """x -> a x + b."""

    a: Fraction
    b: Fraction = Fraction(0)

    name = "affine"

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def root(self) -> Fraction | None:
        if self.a == 0:
            return None
        return -self.b / self.a

    def canonical(self) -> str:
        return f"affine({fmt(self.a)}, {fmt(self.b)})"

    def value(self, x: Fraction) -> Fraction:
        return self.a * x + self.b

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        return Enclosure.point(self.value(as_rational(x)))

    def derivative(self) -> Affine:
        return Affine(Fraction(0), self.a)

    def attributes(self) -> CatalogAttributes:
        return CatalogAttributes(
            ac_loc=True,
            justification="affine maps are Lipschitz on every compact interval",
            continuous=True,
        )

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return True

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return []

    def sign_changes(self, a: Fraction, b: Fraction) -> list[Fraction]:
        r = self.root
        return [r] if r is not None and a < r < b else []

    def sign_on(self, a: Fraction, b: Fraction) -> int | None:
        v = self.value((a + b) / 2)
        return (v > 0) - (v < 0)

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        if a is None or b is None:
            if self.is_zero:
                return Finite(Enclosure.point(0))
            return ray_integral(self, a, b, settings)
        cuts = [a, *self.sign_changes(a, b), b]
        total = sum(
            (abs(_abs_antiderivative_gap(self.a, self.b, u, v)) for u, v in zip(cuts, cuts[1:], strict=False)),
            Fraction(0),
        )
        return Finite(Enclosure.point(total))

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        m = as_rational(level)
        if self.a == 0:
            if abs(self.b) >= m:
                return IntervalFamily.of(Interval(None, None))
            return IntervalFamily.empty()
        # |a x + b| >= M  <=>  x outside the open interval between the two level crossings
        x1, x2 = sorted(((m - self.b) / self.a, (-m - self.b) / self.a))
        return IntervalFamily.of(Interval(None, x1, False, True), Interval(x2, None, True, False))

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        if self.a != 0:
            return None
        return Enclosure.point(abs(self.b))

    def unbounded_reason(self) -> str:
        return f"|{self.canonical()}| grows linearly in |x|"

    def l1h_rule(self) -> str | None:
        if self.a == 0:
            return None
        return "{|a x + b| >= M} contains two rays for every M > 0"

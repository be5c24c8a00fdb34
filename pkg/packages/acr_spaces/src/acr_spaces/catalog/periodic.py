"""The 2-periodic extension of sqrt|x| from [-1, 1] and its a.e. derivative."""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from acr_spaces.errors import (
    InvalidParameterError,
    NoDerivativeInCatalogError,
    NotPiecewiseMonotoneError,
    UndefinedAtPointError,
)
from acr_spaces.numerics import (
    Enclosure,
    ExtendedValue,
    Finite,
    SeqTerm,
    as_rational,
    rational_power,
    sqrt_enclosure,
)
from acr_spaces.sets import Interval, IntervalFamily, LeftMap, TailDescriptor
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

from .base import CatalogAttributes, FunctionSpec, ray_integral


def nearest_even(x: Fraction) -> int:
    """The even integer c with x in [c - 1, c + 1)."""
    return 2 * math.floor((x + 1) / 2)


def _cell_center(m: int) -> int:
    # the even end of the unit cell [m, m + 1]
    return m if m % 2 == 0 else m + 1


def _integers_between(a: Fraction, b: Fraction) -> list[Fraction]:
    return [Fraction(k) for k in range(math.floor(a) + 1, math.ceil(b))]


def _cellwise(
    a: Fraction,
    b: Fraction,
    full_cell: Fraction,
    piece: Callable[[Fraction, Fraction, int], Enclosure],
) -> Enclosure:
    """Integrate over [a, b] cell by cell; interior unit cells contribute ``full_cell`` each."""
    if a == b:
        return Enclosure.point(0)
    first, last = math.floor(a), math.ceil(b)
    if last - first == 1:
        return piece(a, b, first)
    total = piece(a, Fraction(first + 1), first)
    total = total + Enclosure.point(full_cell * (last - first - 2))
    return total + piece(Fraction(last - 1), b, last - 1)


def _even_anchors(beyond: Fraction) -> Iterator[Fraction]:
    first = 2 * (math.floor(beyond / 2) + 1)
    return (Fraction(x) for x in itertools.count(first, 2))


@dataclass(frozen=True)
class SqrtPeriodic(FunctionSpec):
    """sqrt|x - 2k| on [2k - 1, 2k + 1]: cusps at even integers, peaks of 1 at odd ones."""

    name = "sqrt_periodic"

    def canonical(self) -> str:
        return "sqrt_periodic"

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        v = as_rational(x)
        return sqrt_enclosure(abs(v - nearest_even(v)), settings.root_width)

    def derivative(self) -> FunctionSpec:
        return SqrtPeriodicDeriv()

    def attributes(self) -> CatalogAttributes:
        return CatalogAttributes(
            ac_loc=True,
            justification="sqrt|x| is AC on [-1, 1] (monotone on each side with integrable "
            "derivative) and the periodic copies glue continuously at odd integers",
            continuous=True,
        )

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return True

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return _integers_between(a, b)

    def _piece(self, u: Fraction, v: Fraction, m: int, settings: AnalysisSettings) -> Enclosure:
        c = _cell_center(m)

        def antiderivative(d: Fraction) -> Enclosure:
            return rational_power(d, Fraction(3, 2), settings.root_width).scale(Fraction(2, 3))

        return abs(antiderivative(abs(v - c)) - antiderivative(abs(u - c)))

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        if a is None or b is None:
            return ray_integral(self, a, b, settings)
        return Finite(
            _cellwise(a, b, Fraction(2, 3), lambda u, v, m: self._piece(u, v, m, settings))
        )

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        """Inner approximation on x >= 0: the windows left of the origin are not listed."""
        m = as_rational(level)
        if m >= 1:
            return IntervalFamily.empty()
        # sqrt|x - 2k| >= M  <=>  |x - 2k| >= M^2: windows around each odd integer
        gap = m * m
        width = 2 - 2 * gap
        return IntervalFamily(
            (Interval.half_open(gap, gap + width),),
            TailDescriptor(1, LeftMap(2, gap), SeqTerm(width, 0)),
        )

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        return Enclosure.point(1)

    def ac_failure_anchors(self, beyond: Fraction) -> Iterator[Fraction] | None:
        return _even_anchors(beyond)


@dataclass(frozen=True)
class SqrtPeriodicDeriv(FunctionSpec):
    """sign(x - 2k) / (2 sqrt|x - 2k|), undefined at even integers."""

    name = "sqrt_periodic_deriv"

    def canonical(self) -> str:
        return "sqrt_periodic_deriv"

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        v = as_rational(x)
        d = v - nearest_even(v)
        if d == 0:
            raise UndefinedAtPointError(self.canonical(), v)
        magnitude = sqrt_enclosure(abs(d), settings.root_width).reciprocal().scale(Fraction(1, 2))
        return magnitude if d > 0 else -magnitude

    def derivative(self) -> FunctionSpec:
        raise NoDerivativeInCatalogError(
            "the derivative of sqrt_periodic_deriv is not in the catalog"
        )

    def attributes(self) -> CatalogAttributes:
        return CatalogAttributes(
            ac_loc=False,
            justification="unbounded near every even integer",
            continuous=False,
            derivative_known=False,
        )

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return math.floor(a) == math.floor(b) and a.denominator != 1 and b.denominator != 1

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        if not self.continuous_on(a, b):
            raise NotPiecewiseMonotoneError(
                f"{self.canonical()} jumps or blows up at the integers in [{a}, {b}]"
            )
        return []

    def singular_points(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return [Fraction(k) for k in range(math.ceil(a), math.floor(b) + 1) if k % 2 == 0]

    def sign_changes(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return _integers_between(a, b)

    def sign_on(self, a: Fraction, b: Fraction) -> int | None:
        mid = (a + b) / 2
        return 1 if mid - nearest_even(mid) > 0 else -1

    def _piece(self, u: Fraction, v: Fraction, m: int, settings: AnalysisSettings) -> Enclosure:
        c = _cell_center(m)
        return abs(
            sqrt_enclosure(abs(v - c), settings.root_width)
            - sqrt_enclosure(abs(u - c), settings.root_width)
        )

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        if a is None or b is None:
            return ray_integral(self, a, b, settings)
        return Finite(_cellwise(a, b, Fraction(1), lambda u, v, m: self._piece(u, v, m, settings)))

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        """Inner approximation for M > 1/2: only the windows at even integers 2k >= 0 are listed."""
        m = as_rational(level)
        if m <= 0:
            raise InvalidParameterError(f"superlevel threshold must be positive, got {m}")
        if m <= Fraction(1, 2):
            return IntervalFamily.of(Interval(None, None))
        # 1/(2 sqrt t) >= M  <=>  t <= 1/(4 M^2): a window of width 1/(2 M^2) per even integer
        half = 1 / (4 * m * m)
        return IntervalFamily(
            (Interval.half_open(-half, half),),
            TailDescriptor(1, LeftMap(2, -half), SeqTerm(2 * half, 0)),
        )

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        return None

    def unbounded_reason(self) -> str:
        return "1/(2 sqrt|x - 2k|) blows up at every even integer"

    def l1h_rule(self) -> str | None:
        return "every superlevel set keeps a window of fixed positive width at each even integer"

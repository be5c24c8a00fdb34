from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from acr_spaces.errors import (
    InvalidParameterError,
    NotPiecewiseMonotoneError,
    SuperlevelNotRepresentableError,
)
from acr_spaces.numerics import (
    Enclosure,
    ExtendedValue,
    Finite,
    SeqTerm,
    add_extended,
    as_rational,
    root_enclosure,
    series_tail,
)
from acr_spaces.sets import IntervalFamily, TailDescriptor
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

from .affine import Affine
from .base import CatalogAttributes, FunctionSpec, fmt


@dataclass(frozen=True)
class StepCoefficient:
    """Step heights n -> c * n^k with c > 0 and integer k."""

    c: Fraction
    k: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", as_rational(self.c))
        if self.c <= 0:
            raise InvalidParameterError(f"step coefficient must be positive, got {self.c}")
        if int(self.k) != self.k:
            raise InvalidParameterError(f"step exponent must be an integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    def __call__(self, n: int) -> Fraction:
        return self.c * Fraction(n) ** self.k

    def __str__(self) -> str:
        if self.k == 0:
            return fmt(self.c)
        if self.k < 0:
            power = "n" if self.k == -1 else f"n^{-self.k}"
            return f"{fmt(self.c)}/{power}"
        power = "n" if self.k == 1 else f"n^{self.k}"
        if self.c == 1:
            return power
        if self.c.denominator == 1:
            return f"{self.c.numerator}{power}"
        return f"{fmt(self.c)}*{power}"


@dataclass(frozen=True)
class StepSeries(FunctionSpec):
    """sum over n >= start of coef(n) on [a(n), a(n) + w(n)), zero elsewhere."""

    coef: StepCoefficient
    placement: TailDescriptor

    name = "step_series"

    def canonical(self) -> str:
        p = self.placement
        return f"step_series(coef={self.coef}, left={p.left}, width={p.width}, from={p.start})"

    def _index(self, x: Fraction) -> int | None:
        p = self.placement
        n = p.left.last_index_at_or_below(x)
        if n >= p.start and x < p.right_end(n):
            return n
        return None

    def _value_left(self, x: Fraction) -> Fraction:
        # limit of f from the left at x
        p = self.placement
        n = p.left.last_index_at_or_below(x)
        if n >= p.start and p.left(n) == x:
            n -= 1
        if n >= p.start and p.left(n) < x <= p.right_end(n):
            return self.coef(n)
        return Fraction(0)

    def value_at(self, x: Fraction) -> Fraction:
        n = self._index(as_rational(x))
        return Fraction(0) if n is None else self.coef(n)

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        return Enclosure.point(self.value_at(x))

    def derivative(self) -> FunctionSpec:
        # zero a.e.; never integrate it back to f, the ac_loc attribute is false
        return Affine(Fraction(0), Fraction(0))

    def attributes(self) -> CatalogAttributes:
        return CatalogAttributes(
            ac_loc=False,
            justification="jump discontinuities at every step edge",
            continuous=False,
        )

    def _steps_meeting(self, a: Fraction, b: Fraction) -> range:
        p = self.placement
        first = max(p.start, p.left.last_index_at_or_below(a))
        last = p.left.last_index_at_or_below(b)
        return range(first, last + 1)

    def _edges(self, a: Fraction, b: Fraction) -> list[Fraction]:
        p = self.placement
        edges = set()
        for n in self._steps_meeting(a, b):
            for edge in (p.left(n), p.right_end(n)):
                if a <= edge <= b:
                    edges.add(edge)
        return sorted(edges)

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return not self._edges(a, b)

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        if not self.continuous_on(a, b):
            raise NotPiecewiseMonotoneError(
                f"{self.canonical()} jumps inside [{fmt(a)}, {fmt(b)}]; use jump sums"
            )
        return []

    def jump_variation(
        self, a: Fraction, b: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> Enclosure | None:
        total = sum(
            (
                abs(self.value_at(x) - self._value_left(x))
                for x in self._edges(a, b)
                if a < x <= b
            ),
            Fraction(0),
        )
        return Enclosure.point(total)

    def _bounded_integral(self, a: Fraction, b: Fraction) -> Fraction:
        p = self.placement
        total = Fraction(0)
        for n in self._steps_meeting(a, b):
            overlap = min(b, p.right_end(n)) - max(a, p.left(n))
            if overlap > 0:
                total += self.coef(n) * overlap
        return total

    def _weighted_tail(self, start: int, settings: AnalysisSettings) -> ExtendedValue:
        # coef(n) * w(n) = c c_w n^(k - p)
        width = self.placement.width
        q = width.p - self.coef.k
        term = SeqTerm(self.coef.c * width.c, max(q, Fraction(0)))
        return series_tail(
            term, start, truncation=settings.series_truncation, width=settings.root_width
        )

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        p = self.placement
        if a is None:
            a = p.left(p.start) if b is None else min(p.left(p.start), b)
        if b is not None:
            return Finite(Enclosure.point(self._bounded_integral(a, b)))
        first_clear = p.first_index_beyond(a)
        head = self._bounded_integral(a, p.left(first_clear))
        return add_extended(Finite(Enclosure.point(head)), self._weighted_tail(first_clear, settings))

    def tail_integral_bound(
        self, tail: TailDescriptor, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> ExtendedValue | None:
        if tail.left == self.placement.left and tail.width == self.placement.width:
            return self._weighted_tail(tail.start, settings)
        return FunctionSpec.tail_integral_bound(self, tail, settings)

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        m = as_rational(level)
        c, k = self.coef.c, self.coef.k
        p = self.placement
        if k == 0:
            return IntervalFamily(tail=p) if c >= m else IntervalFamily.empty()
        if k > 0:
            n = max(p.start, math.ceil(root_enclosure(m / c, k, settings.root_width).lo))
            while self.coef(n) < m:
                n += 1
            return IntervalFamily(tail=p.starting_at(n))
        n = math.floor(root_enclosure(c / m, -k, settings.root_width).hi)
        while n >= p.start and self.coef(n) < m:
            n -= 1
        if n - p.start > settings.uniform_run_cap:
            raise SuperlevelNotRepresentableError(
                f"{n - p.start} steps reach level {fmt(m)}; beyond the materialization cap"
            )
        return IntervalFamily(tuple(p.interval(i) for i in range(p.start, n + 1)))

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        if self.coef.k > 0:
            return None
        return Enclosure.point(self.coef(self.placement.start))

    def unbounded_reason(self) -> str:
        return f"step heights {self.coef} grow without bound"

    def l1h_rule(self) -> str | None:
        if self.coef.k > 0 and self.placement.width.p <= 1:
            return (
                f"every superlevel set keeps all steps beyond some index, with widths "
                f"{self.placement.width} summing to infinity"
            )
        return None

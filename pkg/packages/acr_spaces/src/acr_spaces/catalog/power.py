from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from acr_spaces.errors import InvalidParameterError, UndefinedAtPointError
from acr_spaces.numerics import (
    Enclosure,
    ExtendedValue,
    Finite,
    add_extended,
    as_rational,
    log_enclosure,
    rational_power,
)
from acr_spaces.sets import Interval, IntervalFamily
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

from .affine import Affine
from .base import CatalogAttributes, FunctionSpec, fmt, ray_integral, shell_integral
from .combinators import scale


@dataclass(frozen=True)
class PowerAbs(FunctionSpec):
    """x -> |x|^e, or sign(x) |x|^e when ``odd``.

    ``e`` is any nonzero rational; e = 0 is only allowed with ``odd`` (the sign
    function). Negative exponents are undefined at 0.
    """

    exponent: Fraction
    odd: bool = False

    name = "pow_abs"

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", as_rational(self.exponent))
        if self.exponent == 0 and not self.odd:
            raise InvalidParameterError("|x|^0 is the constant 1; use affine(0, 1)")

    def canonical(self) -> str:
        return f"{'pow_sign' if self.odd else 'pow_abs'}({fmt(self.exponent)})"

    def _magnitude(self, t: Fraction, settings: AnalysisSettings) -> Enclosure:
        return rational_power(t, self.exponent, settings.root_width)

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        v = as_rational(x)
        if v == 0:
            if self.exponent < 0:
                raise UndefinedAtPointError(self.canonical(), v)
            return Enclosure.point(0)
        magnitude = self._magnitude(abs(v), settings)
        return -magnitude if self.odd and v < 0 else magnitude

    def derivative(self) -> FunctionSpec:
        if self.exponent == 0:
            # sign(x) jumps at 0; its a.e. derivative is 0
            return Affine(Fraction(0), Fraction(0))
        return scale(self.exponent, power(self.exponent - 1, odd=not self.odd))

    def attributes(self) -> CatalogAttributes:
        if self.exponent > 0:
            return CatalogAttributes(
                ac_loc=True,
                justification="|x|^e with e > 0 is continuous and monotone on each side of 0 "
                "with a locally integrable derivative",
                continuous=True,
            )
        if self.exponent == 0:
            return CatalogAttributes(
                ac_loc=False, justification="sign(x) jumps at 0", continuous=False
            )
        return CatalogAttributes(
            ac_loc=False,
            justification=f"|x|^{fmt(self.exponent)} is unbounded near 0",
            continuous=False,
        )

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return self.exponent > 0 or not (a <= 0 <= b)

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        if not self.odd and a < 0 < b:
            return [Fraction(0)]
        return []

    def singular_points(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return [Fraction(0)] if self.exponent <= 0 and a <= 0 <= b else []

    def sign_changes(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return [Fraction(0)] if self.odd and a < 0 < b else []

    def sign_on(self, a: Fraction, b: Fraction) -> int | None:
        if not self.odd:
            return 1
        return 1 if a + b > 0 else -1

    def _integral_positive(
        self, u: Fraction, v: Fraction | None, settings: AnalysisSettings
    ) -> ExtendedValue:
        """Integral of t^e over [u, v] with 0 <= u and v possibly infinite."""
        e = self.exponent
        if v is None:
            if u == 0:
                return add_extended(
                    self._integral_positive(Fraction(0), Fraction(1), settings),
                    self._integral_positive(Fraction(1), None, settings),
                )
            if e < -1:
                tail = rational_power(u, e + 1, settings.root_width).scale(1 / (-(e + 1)))
                return Finite(tail)
            return ray_integral(self, u, None, settings)
        if u == v:
            return Finite(Enclosure.point(0))
        if u == 0 and e <= -1:
            return shell_integral(self, Fraction(0), v, settings)
        if e == -1:
            return Finite(log_enclosure(v / u, settings.log_width).clamp_nonnegative())
        upper = rational_power(v, e + 1, settings.root_width)
        lower = Enclosure.point(0) if u == 0 else rational_power(u, e + 1, settings.root_width)
        return Finite((upper - lower).scale(1 / (e + 1)).clamp_nonnegative())

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        total: ExtendedValue = Finite(Enclosure.point(0))
        # negative side mirrored onto [.., ..] subset of [0, inf)
        if a is None or a < 0:
            far = None if a is None else -a
            near = Fraction(0) if b is None or b >= 0 else -b
            total = add_extended(total, self._integral_positive(near, far, settings))
        if b is None or b > 0:
            near = Fraction(0) if a is None or a <= 0 else a
            total = add_extended(total, self._integral_positive(near, b, settings))
        return total

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        m = as_rational(level)
        e = self.exponent
        if e == 0:
            return IntervalFamily.of(Interval(None, None)) if m <= 1 else IntervalFamily.empty()
        radius = rational_power(m, 1 / e, settings.root_width)
        if e > 0:
            # |x| >= radius.hi is certainly inside the set
            t = radius.hi
            return IntervalFamily.of(Interval(None, -t, False, True), Interval(t, None, True, False))
        # 0 < |x| <= radius.hi covers the set
        t = radius.hi
        return IntervalFamily.of(Interval(-t, 0, True, False), Interval(0, t, False, True))

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        if self.exponent == 0:
            return Enclosure.point(1)
        return None

    def unbounded_reason(self) -> str:
        if self.exponent > 0:
            return f"|x|^{fmt(self.exponent)} grows without bound as |x| -> inf"
        return f"|x|^{fmt(self.exponent)} blows up at 0"

    def local_singularity(self) -> tuple[Fraction, Fraction] | None:
        if self.exponent <= -1:
            return (Fraction(-1), Fraction(1))
        return None

    def l1h_rule(self) -> str | None:
        if self.exponent > 0:
            return "{|x|^e >= M} contains two rays for every M > 0"
        return None


@dataclass(frozen=True)
class Reciprocal(PowerAbs):
    """x -> 1/x."""

    exponent: Fraction = field(default=Fraction(-1), init=False)
    odd: bool = field(default=True, init=False)

    name = "reciprocal"

    def canonical(self) -> str:
        return "reciprocal"

    def attributes(self) -> CatalogAttributes:
        return CatalogAttributes(
            ac_loc=False, justification="1/x is unbounded near 0", continuous=False
        )

    def unbounded_reason(self) -> str:
        return "1/x blows up at 0"


def power(exponent: object, *, odd: bool = False) -> FunctionSpec:
    """|x|^e (or the signed form) with e = 0 folded into the constant 1."""
    e = as_rational(exponent)
    if e == 0 and not odd:
        return Affine(Fraction(0), Fraction(1))
    if e == 1 and odd:
        return Affine(Fraction(1), Fraction(0))
    if e == -1 and odd:
        return Reciprocal()
    return PowerAbs(e, odd)

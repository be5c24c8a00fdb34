"""Scaling and pointwise sums of catalog functions."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from acr_spaces.errors import (
    InvalidParameterError,
    NotApplicableError,
    SuperlevelNotRepresentableError,
)
from acr_spaces.numerics import (
    Enclosure,
    ExtendedValue,
    Finite,
    ProvenInfinite,
    UnknownValue,
    as_rational,
    scale_extended,
)
from acr_spaces.sets import IntervalFamily, TailDescriptor
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

from .affine import Affine
from .base import CatalogAttributes, FunctionSpec, fmt, scaled_bound


def _sign(r: Fraction) -> int:
    return 1 if r > 0 else -1


@dataclass(frozen=True)
class Scale(FunctionSpec):
    factor: Fraction
    inner: FunctionSpec

    name = "scale"

    def __post_init__(self) -> None:
        object.__setattr__(self, "factor", as_rational(self.factor))
        if self.factor == 0:
            raise InvalidParameterError("scale factor must be nonzero")

    @property
    def magnitude(self) -> Fraction:
        return abs(self.factor)

    def canonical(self) -> str:
        return f"scale({fmt(self.factor)}, {self.inner.canonical()})"

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        return self.inner.evaluate(x, settings).scale(self.factor)

    def derivative(self) -> FunctionSpec:
        return scale(self.factor, self.inner.derivative())

    def attributes(self) -> CatalogAttributes:
        return self.inner.attributes()

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return self.inner.continuous_on(a, b)

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return self.inner.breakpoints(a, b)

    def singular_points(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return self.inner.singular_points(a, b)

    def sign_changes(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return self.inner.sign_changes(a, b)

    def sign_on(self, a: Fraction, b: Fraction) -> int | None:
        s = self.inner.sign_on(a, b)
        return None if s is None else s * _sign(self.factor)

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        return scale_extended(self.inner.integral_abs(a, b, settings), self.factor)

    def piece_variation(
        self, a: Fraction, b: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> Enclosure:
        return self.inner.piece_variation(a, b, settings).scale(self.magnitude)

    def jump_variation(
        self, a: Fraction, b: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> Enclosure | None:
        inner = self.inner.jump_variation(a, b, settings)
        return None if inner is None else inner.scale(self.magnitude)

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        return self.inner.superlevel(as_rational(level) / self.magnitude, settings)

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        inner = self.inner.sup_abs(settings)
        return None if inner is None else inner.scale(self.magnitude)

    def unbounded_reason(self) -> str:
        return self.inner.unbounded_reason()

    def l1_norm(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> ExtendedValue:
        return scale_extended(self.inner.l1_norm(settings), self.factor)

    def tail_integral_bound(
        self, tail: TailDescriptor, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> ExtendedValue | None:
        return scaled_bound(self.inner.tail_integral_bound(tail, settings), self.magnitude)

    def local_singularity(self) -> tuple[Fraction, Fraction] | None:
        return self.inner.local_singularity()

    def l1h_rule(self) -> str | None:
        return self.inner.l1h_rule()

    def ac_failure_anchors(self, beyond: Fraction) -> Iterator[Fraction] | None:
        return self.inner.ac_failure_anchors(beyond)


def _combine_flags(left: bool | None, right: bool | None) -> bool | None:
    # both true -> true; exactly one false with the other true -> false
    if left is True and right is True:
        return True
    if (left is False and right is True) or (left is True and right is False):
        return False
    return None


@dataclass(frozen=True)
class SumOf(FunctionSpec):
    """Pointwise sum. Membership is settled through the parts, never directly."""

    left: FunctionSpec
    right: FunctionSpec

    name = "sum"

    @property
    def parts(self) -> tuple[FunctionSpec, FunctionSpec]:
        return (self.left, self.right)

    def canonical(self) -> str:
        return f"sum({self.left.canonical()}, {self.right.canonical()})"

    def evaluate(self, x: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure:
        return self.left.evaluate(x, settings) + self.right.evaluate(x, settings)

    def derivative(self) -> FunctionSpec:
        return add(self.left.derivative(), self.right.derivative())

    def attributes(self) -> CatalogAttributes:
        la, ra = self.left.attributes(), self.right.attributes()
        ac_loc = _combine_flags(la.ac_loc, ra.ac_loc)
        if ac_loc is True:
            reason = "sum of two ACloc functions"
        elif ac_loc is False:
            reason = "ACloc plus a non-ACloc function is not ACloc"
        else:
            reason = "both parts fail ACloc; cancellation cannot be ruled out"
        return CatalogAttributes(
            ac_loc=ac_loc,
            justification=reason,
            continuous=_combine_flags(la.continuous, ra.continuous),
            derivative_known=la.derivative_known and ra.derivative_known,
        )

    def continuous_on(self, a: Fraction, b: Fraction) -> bool:
        return self.left.continuous_on(a, b) and self.right.continuous_on(a, b)

    def breakpoints(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return sorted(set(self.left.breakpoints(a, b)) | set(self.right.breakpoints(a, b)))

    def singular_points(self, a: Fraction, b: Fraction) -> list[Fraction]:
        return sorted(set(self.left.singular_points(a, b)) | set(self.right.singular_points(a, b)))

    def sign_changes(self, a: Fraction, b: Fraction) -> list[Fraction]:
        # where the parts change sign; the sum itself may change sign elsewhere
        points = set(self.left.sign_changes(a, b)) | set(self.right.sign_changes(a, b))
        points |= set(self.singular_points(a, b)) - {a, b}
        return sorted(points)

    def sign_on(self, a: Fraction, b: Fraction) -> int | None:
        ls, rs = self.left.sign_on(a, b), self.right.sign_on(a, b)
        return ls if ls is not None and ls == rs else None

    def integral_abs(
        self,
        a: Fraction | None,
        b: Fraction | None,
        settings: AnalysisSettings = DEFAULT_SETTINGS,
    ) -> ExtendedValue:
        if a is None or b is None:
            return self._closure_integral(a, b, settings)
        cuts = [a, *(p for p in self.sign_changes(a, b) if a < p < b), b]
        total = Enclosure.point(0)
        for u, v in zip(cuts, cuts[1:], strict=False):
            piece = self._piece_integral(u, v, settings)
            if not isinstance(piece, Finite):
                return piece
            total = total + piece.enclosure
        return Finite(total)

    def _piece_integral(self, u: Fraction, v: Fraction, settings: AnalysisSettings) -> ExtendedValue:
        li = self.left.integral_abs(u, v, settings)
        ri = self.right.integral_abs(u, v, settings)
        if not (isinstance(li, Finite) and isinstance(ri, Finite)):
            return self._closure(li, ri)
        le, re = li.enclosure, ri.enclosure
        ls, rs = self.left.sign_on(u, v), self.right.sign_on(u, v)
        if ls is not None and ls == rs:
            return Finite(le + re)
        if ls is not None and rs is not None:
            # opposite signs: |int f + int g| = |int|f| - int|g||
            lower = max(Fraction(0), le.lo - re.hi, re.lo - le.hi)
            return Finite(Enclosure(lower, le.hi + re.hi))
        return Finite(Enclosure(Fraction(0), le.hi + re.hi))

    def _closure(self, li: ExtendedValue, ri: ExtendedValue) -> ExtendedValue:
        # |f + g| >= |f| - |g|: one infinite part against one finite part stays infinite
        if isinstance(li, ProvenInfinite) and isinstance(ri, Finite):
            return li
        if isinstance(ri, ProvenInfinite) and isinstance(li, Finite):
            return ri
        if isinstance(li, Finite) and isinstance(ri, Finite):
            return Finite(Enclosure(Fraction(0), li.enclosure.hi + ri.enclosure.hi))
        return UnknownValue("both parts of the sum are infinite or unknown; cancellation possible")

    def _closure_integral(
        self, a: Fraction | None, b: Fraction | None, settings: AnalysisSettings
    ) -> ExtendedValue:
        return self._closure(
            self.left.integral_abs(a, b, settings), self.right.integral_abs(a, b, settings)
        )

    def piece_variation(
        self, a: Fraction, b: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> Enclosure:
        dl = self.left.evaluate(b, settings) - self.left.evaluate(a, settings)
        dr = self.right.evaluate(b, settings) - self.right.evaluate(a, settings)
        direct = abs(dl + dr)
        same_direction = (dl.lo >= 0 and dr.lo >= 0) or (dl.hi <= 0 and dr.hi <= 0)
        if same_direction:
            return direct
        # the sum may turn inside [a, b]; bound by the parts' variations
        upper = self.left.piece_variation(a, b, settings).hi + self.right.piece_variation(a, b, settings).hi
        return Enclosure(direct.lo, max(direct.hi, upper))

    def superlevel(
        self, level: Fraction, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> IntervalFamily:
        raise SuperlevelNotRepresentableError(
            f"superlevel sets of {self.canonical()} leave the interval-family catalog"
        )

    def sup_abs(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> Enclosure | None:
        ls, rs = self.left.sup_abs(settings), self.right.sup_abs(settings)
        if ls is None or rs is None:
            return None
        return Enclosure(Fraction(0), ls.hi + rs.hi)

    def l1_norm(self, settings: AnalysisSettings = DEFAULT_SETTINGS) -> ExtendedValue:
        return self._closure(self.left.l1_norm(settings), self.right.l1_norm(settings))

    def tail_integral_bound(
        self, tail: TailDescriptor, settings: AnalysisSettings = DEFAULT_SETTINGS
    ) -> ExtendedValue | None:
        lb = self.left.tail_integral_bound(tail, settings)
        rb = self.right.tail_integral_bound(tail, settings)
        if isinstance(lb, Finite) and isinstance(rb, Finite):
            return Finite(Enclosure(Fraction(0), lb.enclosure.hi + rb.enclosure.hi))
        return None

    def local_singularity(self) -> tuple[Fraction, Fraction] | None:
        raise NotApplicableError("sums are classified through their parts")

    def l1h_rule(self) -> str | None:
        raise NotApplicableError("sums are classified through their parts")


def scale(factor: object, inner: FunctionSpec) -> FunctionSpec:
    """r * f with the obvious normalizations folded in."""
    r = as_rational(factor)
    if r == 0:
        raise InvalidParameterError("scale factor must be nonzero")
    if r == 1:
        return inner
    if isinstance(inner, Affine):
        return Affine(inner.a * r, inner.b * r)
    if isinstance(inner, Scale):
        return scale(inner.factor * r, inner.inner)
    return Scale(r, inner)


def add(left: FunctionSpec, right: FunctionSpec) -> FunctionSpec:
    if isinstance(left, Affine) and isinstance(right, Affine):
        return Affine(left.a + right.a, left.b + right.b)
    if isinstance(left, Affine) and left.is_zero:
        return right
    if isinstance(right, Affine) and right.is_zero:
        return left
    return SumOf(left, right)

"""Subsets of the real line as finite interval unions plus an optional symbolic tail."""

from __future__ import annotations

import heapq
import math
from collections.abc import Iterator
from dataclasses import dataclass, replace
from fractions import Fraction

import structlog

from acr_spaces.errors import InvalidFamilyError, InvalidParameterError
from acr_spaces.numerics import (
    DivergenceCertificate,
    Enclosure,
    ExtendedValue,
    Finite,
    ProvenInfinite,
    SeqTerm,
    add_extended,
    as_rational,
    format_rational,
    series_tail,
)
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

log = structlog.get_logger("acr.sets")


def _below(a: Fraction | None, b: Fraction | None) -> bool:
    """a < b where both are left endpoints and None means minus infinity."""
    if b is None:
        return False
    return a is None or a < b


@dataclass(frozen=True)
class Interval:
    """Interval with rational endpoints; ``None`` marks an unbounded side."""

    left: Fraction | None
    right: Fraction | None
    left_closed: bool = True
    right_closed: bool = False

    def __post_init__(self) -> None:
        if self.left is not None:
            object.__setattr__(self, "left", as_rational(self.left))
        else:
            object.__setattr__(self, "left_closed", False)
        if self.right is not None:
            object.__setattr__(self, "right", as_rational(self.right))
        else:
            object.__setattr__(self, "right_closed", False)
        if self.left is not None and self.right is not None and self.left > self.right:
            raise InvalidFamilyError(f"interval with left > right: {self}")

    @classmethod
    def closed(cls, a: object, b: object) -> Interval:
        return cls(as_rational(a), as_rational(b), True, True)

    @classmethod
    def half_open(cls, a: object, b: object) -> Interval:
        return cls(as_rational(a), as_rational(b), True, False)

    @classmethod
    def open(cls, a: object, b: object) -> Interval:
        return cls(as_rational(a), as_rational(b), False, False)

    @property
    def bounded(self) -> bool:
        return self.left is not None and self.right is not None

    @property
    def length(self) -> Fraction | None:
        if not self.bounded:
            return None
        return self.right - self.left

    def contains(self, x: object) -> bool:
        v = as_rational(x)
        if self.left is not None and (v < self.left or (v == self.left and not self.left_closed)):
            return False
        if self.right is not None and (
            v > self.right or (v == self.right and not self.right_closed)
        ):
            return False
        return True

    def overlaps(self, other: Interval) -> bool:
        """True when the intersection has positive length."""
        lo = other.left if _below(self.left, other.left) else self.left
        if self.right is None:
            hi = other.right
        elif other.right is None:
            hi = self.right
        else:
            hi = min(self.right, other.right)
        if hi is None:
            return True
        return lo is None or lo < hi

    def clip(self, lo: Fraction, hi: Fraction) -> Interval | None:
        """Intersection with the closed window [lo, hi], or None when degenerate."""
        if self.left is not None and self.left >= lo:
            left, left_closed = self.left, self.left_closed
        else:
            left, left_closed = lo, True
        if self.right is not None and self.right <= hi:
            right, right_closed = self.right, self.right_closed
        else:
            right, right_closed = hi, True
        if left >= right:
            return None
        return Interval(left, right, left_closed, right_closed)

    def sort_key(self) -> tuple[int, Fraction]:
        if self.left is None:
            return (0, Fraction(0))
        return (1, self.left)

    def __str__(self) -> str:
        left = "-inf" if self.left is None else format_rational(self.left)
        right = "inf" if self.right is None else format_rational(self.right)
        return f"{'[' if self.left_closed else '('}{left},{right}{']' if self.right_closed else ')'}"


@dataclass(frozen=True)
class LeftMap:
    """n -> alpha*n + beta, or alpha*n^2 + beta when ``quadratic``; alpha a positive integer."""

    alpha: int
    beta: Fraction = Fraction(0)
    quadratic: bool = False

    def __post_init__(self) -> None:
        alpha = as_rational(self.alpha)
        if alpha.denominator != 1 or alpha <= 0:
            raise InvalidFamilyError(f"left map slope must be a positive integer, got {alpha}")
        object.__setattr__(self, "alpha", int(alpha))
        object.__setattr__(self, "beta", as_rational(self.beta))

    def __call__(self, n: int) -> Fraction:
        power = n * n if self.quadratic else n
        return self.alpha * power + self.beta

    def last_index_at_or_below(self, x: Fraction) -> int:
        """Largest n with a(n) <= x; for the quadratic form only n >= 0 count (-1 if none)."""
        t = (as_rational(x) - self.beta) / self.alpha
        if not self.quadratic:
            return math.floor(t)
        if t < 0:
            return -1
        return math.isqrt(math.floor(t))

    def __str__(self) -> str:
        coefficient = "" if self.alpha == 1 else str(self.alpha)
        text = f"{coefficient}n^2" if self.quadratic else f"{coefficient}n"
        if self.beta > 0:
            text += f"+{format_rational(self.beta)}"
        elif self.beta < 0:
            text += f"-{format_rational(-self.beta)}"
        return text


@dataclass(frozen=True)
class TailDescriptor:
    """The intervals [a(n), a(n) + w(n)) for every n >= start."""

    start: int
    left: LeftMap
    width: SeqTerm

    def __post_init__(self) -> None:
        if self.start < 1:
            raise InvalidFamilyError(f"tail must start at n >= 1, got {self.start}")
        if not self.width.integral_exponent:
            raise InvalidFamilyError("tail widths need an integer exponent to keep endpoints rational")
        # Gaps a(n+1) - a(n) never shrink and widths never grow, so one check covers all n.
        n = self.start
        if self.left(n + 1) < self.left(n) + self.width.exact(n):
            raise InvalidFamilyError(f"tail intervals overlap at n={n}: {self}")

    def right_end(self, n: int) -> Fraction:
        return self.left(n) + self.width.exact(n)

    def interval(self, n: int) -> Interval:
        return Interval.half_open(self.left(n), self.right_end(n))

    def first_index_beyond(self, x: Fraction) -> int:
        """Smallest n >= start with a(n) > x."""
        return max(self.start, self.left.last_index_at_or_below(x) + 1)

    def starting_at(self, n: int) -> TailDescriptor:
        return replace(self, start=n)

    def intervals(self, count: int | None = None) -> Iterator[Interval]:
        n = self.start
        while count is None or n < self.start + count:
            yield self.interval(n)
            n += 1

    def __str__(self) -> str:
        return f"tail(left={self.left}, width={self.width}, from={self.start})"


@dataclass(frozen=True)
class IntervalFamily:
    head: tuple[Interval, ...] = ()
    tail: TailDescriptor | None = None

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.head, key=Interval.sort_key))
        object.__setattr__(self, "head", ordered)
        reach: Fraction | None = None
        for i, iv in enumerate(ordered):
            if i > 0 and (reach is None or _below(iv.left, reach)):
                raise InvalidFamilyError(f"head intervals overlap near {iv}")
            reach = iv.right
            if reach is None and i < len(ordered) - 1:
                raise InvalidFamilyError(f"head intervals overlap after {iv}")
        if self.tail is not None:
            for iv in ordered:
                self._check_against_tail(iv)

    def _check_against_tail(self, iv: Interval) -> None:
        tail = self.tail
        if iv.right is None:
            raise InvalidFamilyError(f"ray {iv} meets every tail interval")
        n = tail.start
        while tail.left(n) < iv.right:
            if iv.overlaps(tail.interval(n)):
                raise InvalidFamilyError(f"{iv} overlaps tail interval {tail.interval(n)}")
            n += 1

    @classmethod
    def of(cls, *intervals: Interval) -> IntervalFamily:
        return cls(tuple(intervals))

    @classmethod
    def empty(cls) -> IntervalFamily:
        return cls()

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    @property
    def is_empty(self) -> bool:
        return not self.head and self.tail is None

    @property
    def bounded(self) -> bool:
        return all(iv.bounded for iv in self.head)

    def iter_intervals(self) -> Iterator[Interval]:
        """Every interval in ascending order; infinite when there is a tail."""
        if self.tail is None:
            yield from self.head
            return
        yield from heapq.merge(self.head, self.tail.intervals(), key=Interval.sort_key)

    def contains(self, x: object) -> bool:
        v = as_rational(x)
        if any(iv.contains(v) for iv in self.head):
            return True
        if self.tail is None:
            return False
        n = self.tail.left.last_index_at_or_below(v)
        return n >= self.tail.start and self.tail.interval(n).contains(v)

    def sup_abs(self) -> Fraction | None:
        """max |x| over a bounded finite family."""
        if self.tail is not None or not self.bounded:
            return None
        return max((max(abs(iv.left), abs(iv.right)) for iv in self.head), default=Fraction(0))

    def __str__(self) -> str:
        text = "{" + " ".join(str(iv) for iv in self.head) + "}"
        if self.tail is not None:
            text += f" ++ {self.tail}"
        return text


def ray_certificate(depth: int) -> DivergenceCertificate:
    """A ray contains ``depth`` disjoint unit intervals, and arbitrarily many more."""
    return DivergenceCertificate(
        SeqTerm(1, 0),
        1,
        tuple((n, Fraction(n)) for n in range(1, depth + 1)),
        note="unit pieces of an unbounded interval",
    )


def measure(fam: IntervalFamily, *, settings: AnalysisSettings = DEFAULT_SETTINGS) -> ExtendedValue:
    if not fam.bounded:
        return ProvenInfinite(ray_certificate(settings.depth))
    head = Finite(Enclosure.point(sum((iv.length for iv in fam.head), Fraction(0))))
    if fam.tail is None:
        return head
    tail = series_tail(
        fam.tail.width,
        fam.tail.start,
        truncation=settings.series_truncation,
        width=settings.root_width,
    )
    return add_extended(head, tail)


def truncate(fam: IntervalFamily, depth: int) -> IntervalFamily:
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    if fam.tail is None:
        return fam
    return IntervalFamily(fam.head + tuple(fam.tail.intervals(depth)))


def _outside(iv: Interval, c: Fraction) -> list[Interval]:
    pieces = []
    if iv.left is None or iv.left < -c:
        if iv.right is not None and iv.right < -c:
            pieces.append(iv)
        else:
            pieces.append(Interval(iv.left, -c, iv.left_closed, False))
    if iv.right is None or iv.right > c:
        if iv.left is not None and iv.left > c:
            pieces.append(iv)
        else:
            pieces.append(Interval(c, iv.right, False, iv.right_closed))
    return pieces


def restrict_beyond(fam: IntervalFamily, cutoff: object) -> IntervalFamily:
    """Drop everything inside [-cutoff, cutoff]; straddling intervals are clipped open."""
    c = as_rational(cutoff)
    if c < 0:
        raise InvalidParameterError(f"cutoff must be >= 0, got {c}")
    pieces = [piece for iv in fam.head for piece in _outside(iv, c)]
    tail = None
    if fam.tail is not None:
        first = fam.tail.first_index_beyond(c)
        for n in range(fam.tail.start, first):
            pieces.extend(_outside(fam.tail.interval(n), c))
        tail = fam.tail.starting_at(first)
    return IntervalFamily(tuple(pieces), tail)


def chop(fam: IntervalFamily, delta: object) -> IntervalFamily:
    """Split every interval longer than delta/2 into equal pieces of length in (delta/2, delta]."""
    d = as_rational(delta)
    if d <= 0:
        raise InvalidParameterError(f"delta must be positive, got {d}")
    if fam.tail is not None or not fam.bounded:
        raise InvalidParameterError("chop needs a finite bounded family; truncate tails first")
    pieces: list[Interval] = []
    for iv in fam.head:
        length = iv.length
        if length <= d / 2:
            pieces.append(iv)
            continue
        m = math.ceil(length / d)
        step = length / m
        for j in range(m):
            lo = iv.left + j * step
            hi = iv.right if j == m - 1 else lo + step
            pieces.append(
                Interval(
                    lo,
                    hi,
                    iv.left_closed if j == 0 else True,
                    iv.right_closed if j == m - 1 else False,
                )
            )
    return IntervalFamily(tuple(pieces))


def union(*families: IntervalFamily) -> IntervalFamily:
    """Disjoint union; at most one operand may carry a tail."""
    tails = [f.tail for f in families if f.tail is not None]
    if len(tails) > 1:
        raise InvalidParameterError("cannot merge two symbolic tails")
    head = tuple(iv for f in families for iv in f.head)
    return IntervalFamily(head, tails[0] if tails else None)


def intersect_window(fam: IntervalFamily, lo: object, hi: object) -> IntervalFamily:
    """fam intersected with [lo, hi], materialized as a finite family."""
    a, b = as_rational(lo), as_rational(hi)
    if a >= b:
        raise InvalidParameterError(f"empty window [{a}, {b}]")
    pieces = []
    for iv in fam.iter_intervals():
        if iv.left is not None and iv.left >= b:
            break
        clipped = iv.clip(a, b)
        if clipped is not None:
            pieces.append(clipped)
    return IntervalFamily(tuple(pieces))


def covers(outer: IntervalFamily, piece: Interval) -> bool:
    """piece is contained in outer up to a null set."""
    if piece.bounded and piece.length == 0:
        return outer.contains(piece.left)
    reach = piece.left
    for iv in outer.iter_intervals():
        if _below(reach, iv.left):
            return False
        if iv.right is None:
            return True
        if reach is None or iv.right > reach:
            reach = iv.right
        if piece.right is not None and reach >= piece.right:
            return True
    return False


def is_subset_of(inner: IntervalFamily, outer: IntervalFamily) -> bool:
    if inner.tail is not None:
        raise InvalidParameterError("subset checks need a finite inner family")
    return all(covers(outer, iv) for iv in inner.head)

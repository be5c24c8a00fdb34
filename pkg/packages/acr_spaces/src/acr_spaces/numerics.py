"""Exact rational arithmetic and certified enclosures.

Every number that leaves this module is either an exact ``Fraction`` or an
``Enclosure`` [lo, hi] with rational endpoints that provably contains the real
quantity. Irrational values (square roots, logarithms, zeta sums) only ever appear
bracketed.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import structlog

from acr_spaces.errors import InvalidParameterError

Q = Fraction

DEFAULT_WIDTH = Fraction(1, 10**12)

log = structlog.get_logger("acr.numerics")


def as_rational(value: object) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidParameterError(f"expected an exact rational, got {value!r}")
    if isinstance(value, int | str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameterError(f"not a rational: {value!r}") from exc
    raise InvalidParameterError(f"expected an exact rational, got {value!r}")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval certified to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise InvalidParameterError(f"enclosure with lo > hi: [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: object) -> Enclosure:
        v = as_rational(value)
        return cls(v, v)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: object) -> Enclosure:
        o = _coerce(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> Enclosure:
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other: object) -> Enclosure:
        return self + (-_coerce(other))

    def __rsub__(self, other: object) -> Enclosure:
        return _coerce(other) + (-self)

    def scale(self, factor: object) -> Enclosure:
        r = as_rational(factor)
        a, b = self.lo * r, self.hi * r
        return Enclosure(min(a, b), max(a, b))

    def __mul__(self, other: object) -> Enclosure:
        if not isinstance(other, Enclosure):
            return self.scale(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Enclosure(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> Enclosure:
        if self.lo <= 0 <= self.hi:
            raise InvalidParameterError(f"reciprocal of an enclosure containing 0: {self}")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __abs__(self) -> Enclosure:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(Fraction(0), max(-self.lo, self.hi))

    def contains(self, value: object) -> bool:
        v = as_rational(value)
        return self.lo <= v <= self.hi

    def is_subset_of(self, other: Enclosure) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersects(self, other: Enclosure) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: Enclosure) -> Enclosure | None:
        if not self.intersects(other):
            return None
        return Enclosure(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: Enclosure) -> Enclosure:
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def clamp_nonnegative(self) -> Enclosure:
        return Enclosure(max(self.lo, Fraction(0)), max(self.hi, Fraction(0)))

    def rounded_out(self, denominator: int) -> Enclosure:
        """Widen outward onto the grid 1/denominator to keep fractions small."""
        return Enclosure(
            Fraction(math.floor(self.lo * denominator), denominator),
            Fraction(math.ceil(self.hi * denominator), denominator),
        )

    def __str__(self) -> str:
        if self.exact:
            return format_rational(self.lo)
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def _coerce(value: object) -> Enclosure:
    if isinstance(value, Enclosure):
        return value
    return Enclosure.point(value)


ZERO = Enclosure.point(0)


@dataclass(frozen=True)
class SeqTerm:
    """The sequence n -> c / n^p with c > 0 and p >= 0."""

    c: Fraction
    p: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "p", as_rational(self.p))
        if self.c <= 0:
            raise InvalidParameterError(f"sequence coefficient must be positive, got {self.c}")
        if self.p < 0:
            raise InvalidParameterError(f"sequence exponent must be >= 0, got {self.p}")

    @property
    def integral_exponent(self) -> bool:
        return self.p.denominator == 1

    def exact(self, n: int) -> Fraction:
        if not self.integral_exponent:
            raise InvalidParameterError(f"{self} has no exact rational values")
        return self.c / Fraction(n) ** int(self.p)

    def enclose(self, n: int, width: Fraction = DEFAULT_WIDTH) -> Enclosure:
        if self.integral_exponent:
            return Enclosure.point(self.exact(n))
        return rational_power(n, -self.p, width).scale(self.c)

    def scaled(self, factor: Fraction) -> SeqTerm:
        return SeqTerm(self.c * factor, self.p)

    def __str__(self) -> str:
        c = format_rational(self.c)
        if self.p == 0:
            return c
        if self.p == 1:
            return f"{c}/n"
        return f"{c}/n^{format_rational(self.p)}"


@dataclass(frozen=True)
class DivergenceCertificate:
    """Evidence that a nonnegative series diverges.

    Each term from ``from_index`` on is bounded below by ``term`` with exponent at
    most 1; ``checked_prefix`` lists (index, lower bound of the partial sum) pairs that
    were verified while the certificate was built.
    """

    term: SeqTerm
    from_index: int
    checked_prefix: tuple[tuple[int, Fraction], ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        if self.term.p > 1:
            raise InvalidParameterError("comparison certificates need exponent <= 1")
        if self.from_index < 1:
            raise InvalidParameterError("from_index must be >= 1")
        object.__setattr__(self, "checked_prefix", tuple(self.checked_prefix))

    def scaled(self, factor: Fraction) -> DivergenceCertificate:
        return DivergenceCertificate(
            term=self.term.scaled(factor),
            from_index=self.from_index,
            checked_prefix=tuple((n, s * factor) for n, s in self.checked_prefix),
            note=self.note,
        )


@dataclass(frozen=True)
class ComparisonRejected:
    reason: str


@dataclass(frozen=True)
class Finite:
    enclosure: Enclosure


@dataclass(frozen=True)
class ProvenInfinite:
    certificate: DivergenceCertificate


@dataclass(frozen=True)
class UnknownValue:
    reason: str


ExtendedValue = Finite | ProvenInfinite | UnknownValue


def finite(value: object) -> Finite:
    return Finite(_coerce(value))


# The helpers below treat ExtendedValue as a nonnegative quantity (measure, integral
# of |f|, variation), so infinity absorbs anything including Unknown.


def add_extended(a: ExtendedValue, b: ExtendedValue) -> ExtendedValue:
    if isinstance(a, ProvenInfinite):
        return a
    if isinstance(b, ProvenInfinite):
        return b
    if isinstance(a, UnknownValue):
        return a
    if isinstance(b, UnknownValue):
        return b
    return Finite(a.enclosure + b.enclosure)


def sum_extended(values: Iterable[ExtendedValue]) -> ExtendedValue:
    total: ExtendedValue = Finite(ZERO)
    for value in values:
        total = add_extended(total, value)
    return total


def scale_extended(value: ExtendedValue, factor: object) -> ExtendedValue:
    r = abs(as_rational(factor))
    if r == 0:
        raise InvalidParameterError("cannot scale an extended value by 0")
    if isinstance(value, Finite):
        return Finite(value.enclosure.scale(r))
    if isinstance(value, ProvenInfinite):
        return ProvenInfinite(value.certificate.scaled(r))
    return value


def _grid(width: Fraction) -> int:
    target = math.ceil(1 / width)
    return 1 << (target - 1).bit_length()


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) by integer Newton iteration from above."""
    if n < 0:
        raise InvalidParameterError("integer root of a negative number")
    if n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    r = 1 << -(-n.bit_length() // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


def _exact_root(x: Fraction, k: int) -> Fraction | None:
    a = _iroot(x.numerator, k)
    b = _iroot(x.denominator, k)
    if a**k == x.numerator and b**k == x.denominator:
        return Fraction(a, b)
    return None


def root_enclosure(x: object, k: int, width: Fraction = DEFAULT_WIDTH) -> Enclosure:
    """Bracket the k-th root of a nonnegative rational.

    Exact on perfect powers. Otherwise the radicand is lifted onto the grid
    1/S (S a power of two with 1/S <= width) and the integer root is taken by Newton
    iteration, which gives [r/S, (r+1)/S].
    """
    value = as_rational(x)
    if k < 1:
        raise InvalidParameterError(f"root index must be >= 1, got {k}")
    if value < 0:
        raise InvalidParameterError(f"root of a negative number: {value}")
    if k == 1:
        return Enclosure.point(value)
    exact = _exact_root(value, k)
    if exact is not None:
        return Enclosure.point(exact)
    scale = _grid(width)
    r = _iroot(math.floor(value * scale**k), k)
    return Enclosure(Fraction(r, scale), Fraction(r + 1, scale))


def sqrt_enclosure(x: object, width: Fraction = DEFAULT_WIDTH) -> Enclosure:
    return root_enclosure(x, 2, width)


def rational_power(base: object, exponent: object, width: Fraction = DEFAULT_WIDTH) -> Enclosure:
    """Bracket base^exponent for rational base >= 0 and rational exponent."""
    b = as_rational(base)
    e = as_rational(exponent)
    if e == 0:
        return Enclosure.point(1)
    if b == 0:
        if e > 0:
            return Enclosure.point(0)
        raise InvalidParameterError("0 raised to a negative power")
    if b < 0:
        raise InvalidParameterError(f"rational power of a negative base: {b}")
    radicand = b ** abs(e.numerator)
    magnitude = root_enclosure(radicand, e.denominator, width)
    if e > 0:
        return magnitude
    while magnitude.lo == 0:
        width /= 1024
        magnitude = root_enclosure(radicand, e.denominator, width)
    return magnitude.reciprocal()


def _atanh_enclosure(z: Fraction, width: Fraction) -> Enclosure:
    # atanh z = sum z^(2j+1)/(2j+1); the remainder after term j is at most
    # z^(2j+3) / ((2j+3) (1 - z^2)).
    if z == 0:
        return ZERO
    total = Fraction(0)
    power = z
    z2 = z * z
    j = 0
    while True:
        total += power / (2 * j + 1)
        power *= z2
        remainder = power / ((2 * j + 3) * (1 - z2))
        if remainder <= width:
            return Enclosure(total, total + remainder)
        j += 1


def log_enclosure(y: object, width: Fraction = DEFAULT_WIDTH) -> Enclosure:
    """Bracket ln(y) for rational y > 0 with width at most ``width``.

    y is written as 2^e * m with m in [1, 2); ln 2 = 2 atanh(1/3) and
    ln m = 2 atanh((m - 1)/(m + 1)), both series with argument at most 1/3.
    """
    v = as_rational(y)
    if v <= 0:
        raise InvalidParameterError(f"logarithm of a non-positive number: {v}")
    if v == 1:
        return ZERO
    if v < 1:
        return -log_enclosure(1 / v, width)
    e = v.numerator.bit_length() - v.denominator.bit_length()
    m = v / Fraction(2) ** e
    while m >= 2:
        m /= 2
        e += 1
    while m < 1:
        m *= 2
        e -= 1
    share = width / (4 * (abs(e) + 1))
    ln2 = _atanh_enclosure(Fraction(1, 3), share).scale(2)
    ln_m = _atanh_enclosure((m - 1) / (m + 1), share).scale(2)
    return (ln2.scale(e) + ln_m).rounded_out(_grid(width / 4))


def _prefix_lower_sums(
    terms: Sequence[tuple[int, Fraction]],
) -> tuple[tuple[int, Fraction], ...]:
    running = Fraction(0)
    out = []
    for n, b in terms:
        running += b
        out.append((n, running))
    return tuple(out)


def series_tail(
    term: SeqTerm,
    start: int,
    *,
    truncation: int = 100,
    width: Fraction = DEFAULT_WIDTH,
) -> ExtendedValue:
    """Bound sum_{n >= start} c/n^p.

    For p > 1 the partial sum up to N = max(start, truncation) is computed and the
    remainder is bounded by the integral test, c N^(1-p)/(p-1). For p <= 1 the series
    is its own comparison series and a certificate is returned.
    """
    if start < 1:
        raise InvalidParameterError(f"series must start at index >= 1, got {start}")
    if term.p <= 1:
        prefix = _prefix_lower_sums(
            [(n, term.enclose(n, width).lo) for n in range(start, start + truncation)]
        )
        return ProvenInfinite(
            DivergenceCertificate(term, start, prefix, note=f"p-series with p={term.p} <= 1")
        )
    last = max(start, truncation)
    partial = sum((term.enclose(n, width) for n in range(start, last + 1)), ZERO)
    remainder = rational_power(last, 1 - term.p, width).scale(term.c / (term.p - 1))
    return Finite(Enclosure(partial.lo, partial.hi + remainder.hi))


def divergence_by_comparison(
    lower_bounds: Iterable[tuple[int, object]],
    *,
    exponents: Iterable[Fraction] = (Fraction(0), Fraction(1, 2), Fraction(1)),
    width: Fraction = DEFAULT_WIDTH,
) -> DivergenceCertificate | ComparisonRejected:
    """Fit c/n^p (p <= 1) underneath per-term lower bounds.

    For each candidate p, ascending, the scaled values b_n * n^p are formed; p is
    accepted when they do not decay: the minimum over the later half is at least
    (1 - 1/len) times the minimum over the earlier half. c is their overall minimum.
    Scaled values that settle onto a positive limit from above (unit pieces of 1/x
    from a half-integer, say) pass. Scaled values c/n^s drop by about 2^-s across the
    halves and are rejected once 2^-s < 1 - 1/len.
    """
    pairs = [(int(n), as_rational(b)) for n, b in lower_bounds]
    if not pairs:
        raise InvalidParameterError("lower_bounds must be nonempty")
    indices = [n for n, _ in pairs]
    if indices[0] < 1 or any(b <= a for a, b in zip(indices, indices[1:], strict=False)):
        raise InvalidParameterError("indices must be positive and strictly increasing")
    if len(pairs) < 2:
        return ComparisonRejected("a single term cannot show a trend")
    if any(b <= 0 for _, b in pairs):
        return ComparisonRejected("a lower bound is not positive")
    prefix = _prefix_lower_sums(pairs)
    half = len(pairs) // 2
    settle = 1 - Fraction(1, len(pairs))
    for p in sorted(as_rational(e) for e in exponents):
        if p < 0 or p > 1:
            continue
        scaled = [b * rational_power(n, p, width).lo for n, b in pairs]
        head, tail = min(scaled[:half]), min(scaled[half:])
        if tail >= head * settle:
            c = min(head, tail)
            log.debug("comparison.accept", exponent=str(p), constant=str(c), terms=len(pairs))
            return DivergenceCertificate(
                SeqTerm(c, p),
                indices[0],
                prefix,
                note=f"b_n * n^{format_rational(p)} does not decay",
            )
    return ComparisonRejected(
        f"bounds decay faster than c/n under all of {[format_rational(p) for p in sorted(exponents)]}"
    )


def check_certificate(
    certificate: DivergenceCertificate,
    lower_bounds: Iterable[tuple[int, object]],
    *,
    width: Fraction = DEFAULT_WIDTH,
) -> bool:
    """Recheck that the supplied bounds dominate the certificate's term."""
    if certificate.term.p > 1:
        return False
    prefix = dict(certificate.checked_prefix)
    running = Fraction(0)
    for n, raw in lower_bounds:
        b = as_rational(raw)
        if n < certificate.from_index:
            continue
        if b < certificate.term.enclose(n, width).hi:
            return False
        running += b
        if n in prefix and prefix[n] > running:
            return False
    return True


@dataclass(frozen=True)
class Partition:
    """Ordered breakpoints p0 < p1 < ... < pm with p0 = a and pm = b."""

    points: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        pts = tuple(as_rational(p) for p in self.points)
        if len(pts) < 2 or any(b <= a for a, b in zip(pts, pts[1:], strict=False)):
            raise InvalidParameterError("partition points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def pieces(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.points, self.points[1:], strict=False))

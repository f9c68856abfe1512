"""Rational-endpoint interval arithmetic.

All endpoints are exact `Fraction`s and all operations round outward, so an
interval computed from enclosures of exact quantities always contains the
exact value.  `round_out` trims endpoint bit-size (soundly, by widening) to
keep long computations from drowning in huge denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _floor_div2k(x: Fraction, k: int) -> Fraction:
    # largest multiple of 2**-k that is <= x
    return Fraction(x.numerator * (1 << k) // x.denominator, 1 << k)


def _ceil_div2k(x: Fraction, k: int) -> Fraction:
    return Fraction(-((-x.numerator) * (1 << k) // x.denominator), 1 << k)


def sqrt_down(x: Fraction, bits: int = 64) -> Fraction:
    """Lower bound of sqrt(x) with roughly `bits` fractional bits. x >= 0."""
    if x < 0:
        raise ValueError("sqrt of negative rational")
    if x == 0:
        return _ZERO
    scale = 1 << (2 * bits)
    n = x.numerator * scale
    d = x.denominator
    # floor(sqrt(n/d)) / 2**bits <= sqrt(x)
    r = math.isqrt(n // d)
    return Fraction(r, 1 << bits)


def sqrt_up(x: Fraction, bits: int = 64) -> Fraction:
    """Upper bound of sqrt(x) with roughly `bits` fractional bits. x >= 0."""
    if x < 0:
        raise ValueError("sqrt of negative rational")
    if x == 0:
        return _ZERO
    scale = 1 << (2 * bits)
    n = x.numerator * scale
    d = x.denominator
    r = math.isqrt(-(-n // d))  # ceil division before isqrt
    if r * r < -(-n // d):
        r += 1
    return Fraction(r, 1 << bits)


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Interval":
        x = Fraction(x)
        return Interval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(cands), max(cands))

    def scale(self, c: Fraction) -> "Interval":
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    def inverse(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: "Interval") -> "Interval":
        return self * other.inverse()

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def sign(self) -> int | None:
        """Certified sign: +1/-1 when the interval excludes 0, 0 for the
        exact point interval [0,0], None when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def square(self) -> "Interval":
        a, b = abs(self.lo), abs(self.hi)
        hi = max(a, b) ** 2
        lo = _ZERO if self.contains_zero() else min(a, b) ** 2
        return Interval(lo, hi)

    def sqrt(self, bits: int = 64) -> "Interval":
        if self.hi < 0:
            raise ValueError("sqrt of negative interval")
        lo = _ZERO if self.lo <= 0 else sqrt_down(self.lo, bits)
        return Interval(lo, sqrt_up(self.hi, bits))

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def round_out(self, bits: int) -> "Interval":
        """Widen endpoints to multiples of 2**-bits (bounded bit-size)."""
        return Interval(_floor_div2k(self.lo, bits), _ceil_div2k(self.hi, bits))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class Box:
    """Complex interval: re + i*im with rational-endpoint parts."""

    re: Interval
    im: Interval

    @staticmethod
    def point(re, im=0) -> "Box":
        return Box(Interval.point(re), Interval.point(im))

    @staticmethod
    def from_corners(x1, y1, x2, y2) -> "Box":
        x1, y1, x2, y2 = (Fraction(v) for v in (x1, y1, x2, y2))
        return Box(Interval(min(x1, x2), max(x1, x2)), Interval(min(y1, y2), max(y1, y2)))

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def __add__(self, other: "Box") -> "Box":
        return Box(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Box") -> "Box":
        return Box(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Box":
        return Box(-self.re, -self.im)

    def __mul__(self, other: "Box") -> "Box":
        return Box(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, c: Fraction) -> "Box":
        return Box(self.re.scale(c), self.im.scale(c))

    def conjugate(self) -> "Box":
        return Box(self.re, -self.im)

    def __truediv__(self, other: "Box") -> "Box":
        den = other.abs2()
        if den.contains_zero():
            raise ZeroDivisionError("denominator box contains zero")
        num = self * other.conjugate()
        return Box(num.re / den, num.im / den)

    def abs2(self) -> Interval:
        return self.re.square() + self.im.square()

    def abs_upper(self, bits: int = 64) -> Fraction:
        return sqrt_up(self.abs2().hi, bits)

    def abs_lower(self, bits: int = 64) -> Fraction:
        return sqrt_down(self.abs2().lo, bits)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def is_point(self) -> bool:
        return self.re.lo == self.re.hi and self.im.lo == self.im.hi

    def overlaps(self, other: "Box") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def round_out(self, bits: int) -> "Box":
        return Box(self.re.round_out(bits), self.im.round_out(bits))

    def __repr__(self):
        return f"({self.re} + i*{self.im})"


def eval_poly_box(coeffs: list[Box], x: Box) -> Box:
    """Horner evaluation of a polynomial with Box coefficients at a Box."""
    acc = Box.point(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc

"""Rational interval enclosures with outward rounding.

Endpoints are exact ``Fraction`` values, so interval arithmetic on rational
inputs is itself exact; roots and transcendentals round outward via integer
scaling (sqrt, n-th root) or mpmath's interval context (exp, log).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainInputError, InvariantViolation

PRECISION_CAP_BITS = 1 << 16


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of an mpmath mpf (a binary rational) to Fraction."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise DomainInputError(f"non-finite value {x!r}")
    frac = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -frac if sign else frac


def to_fraction(x) -> Fraction:
    """Coerce int/float/str/Fraction/mpf tolerances and bounds to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        return mpf_to_fraction(x)
    raise DomainInputError(f"cannot interpret {x!r} as an exact rational")


def inth_root_floor(m: int, n: int) -> int:
    """floor(m ** (1/n)) for m >= 0, n >= 1, by integer Newton iteration."""
    if m < 0 or n < 1:
        raise DomainInputError("inth_root_floor requires m >= 0, n >= 1")
    if m == 0:
        return 0
    if n == 1:
        return m
    if n == 2:
        return math.isqrt(m)
    x = 1 << ((m.bit_length() + n - 1) // n + 1)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x**n > m:
        x -= 1
    return x


@dataclass(frozen=True)
class RealEnclosure:
    """Closed interval [lo, hi] certified to contain a real value."""

    lo: Fraction
    hi: Fraction
    precision_bits: int = 53

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvariantViolation(f"enclosure endpoints out of order: {self.lo} > {self.hi}")
        if self.precision_bits < 1:
            raise InvariantViolation("precision_bits must be positive")

    @staticmethod
    def exact(value, precision_bits: int = 1) -> "RealEnclosure":
        v = to_fraction(value)
        return RealEnclosure(v, v, precision_bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        v = to_fraction(value)
        return self.lo <= v <= self.hi

    def overlaps(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def entirely_above(self, value) -> bool:
        return self.lo > to_fraction(value)

    def entirely_below(self, value) -> bool:
        return self.hi < to_fraction(value)

    def __mul__(self, other: "RealEnclosure") -> "RealEnclosure":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RealEnclosure(
            min(products), max(products), min(self.precision_bits, other.precision_bits)
        )

    def __add__(self, other: "RealEnclosure") -> "RealEnclosure":
        return RealEnclosure(
            self.lo + other.lo, self.hi + other.hi, min(self.precision_bits, other.precision_bits)
        )

    def max_with_one(self) -> "RealEnclosure":
        return RealEnclosure(max(self.lo, Fraction(1)), max(self.hi, Fraction(1)), self.precision_bits)

    def pow_int(self, k: int) -> "RealEnclosure":
        if k < 0:
            raise DomainInputError("pow_int expects a nonnegative exponent")
        out = RealEnclosure.exact(1, self.precision_bits)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def nth_root(self, n: int, scale_bits: int = 64) -> "RealEnclosure":
        """Outward-rounded n-th root of a nonnegative interval."""
        if self.lo < 0:
            raise DomainInputError("nth_root of an interval reaching below zero")
        return RealEnclosure(
            nth_root_lower(self.lo, n, scale_bits),
            nth_root_upper(self.hi, n, scale_bits),
            self.precision_bits,
        )

    def decimal_bounds(self, digits: int = 15) -> tuple[str, str]:
        """Outward-rounded decimal strings of (lo, hi)."""
        return (
            _decimal_floor(self.lo, digits),
            _decimal_ceil(self.hi, digits),
        )

    def __repr__(self):
        lo, hi = self.decimal_bounds(17)
        return f"RealEnclosure[{lo}, {hi}]"


def sqrt_lower(q: Fraction, scale_bits: int = 64) -> Fraction:
    """A rational r with r <= sqrt(q), within 2^-scale_bits of it."""
    if q < 0:
        raise DomainInputError("sqrt of a negative rational")
    s = 1 << scale_bits
    return Fraction(math.isqrt(q.numerator * s * s // q.denominator), s)


def sqrt_upper(q: Fraction, scale_bits: int = 64) -> Fraction:
    if q < 0:
        raise DomainInputError("sqrt of a negative rational")
    s = 1 << scale_bits
    m = -((-q.numerator * s * s) // q.denominator)  # ceil(q * s^2)
    r = math.isqrt(m)
    if r * r < m:
        r += 1
    return Fraction(r, s)


def nth_root_lower(q: Fraction, n: int, scale_bits: int = 64) -> Fraction:
    if q < 0:
        raise DomainInputError("nth root of a negative rational")
    if n == 1:
        return q
    s = 1 << scale_bits
    return Fraction(inth_root_floor(q.numerator * s**n // q.denominator, n), s)


def nth_root_upper(q: Fraction, n: int, scale_bits: int = 64) -> Fraction:
    if q < 0:
        raise DomainInputError("nth root of a negative rational")
    if n == 1:
        return q
    s = 1 << scale_bits
    m = -((-q.numerator * s**n) // q.denominator)
    r = inth_root_floor(m, n)
    if r**n < m:
        r += 1
    return Fraction(r, s)


def abs_enclosure_of_complex(re: Fraction, im: Fraction, radius: Fraction, scale_bits: int = 64) -> RealEnclosure:
    """Enclosure of |z| over the disk |z - (re + im i)| <= radius."""
    c2 = re * re + im * im
    lo = sqrt_lower(c2, scale_bits) - radius
    hi = sqrt_upper(c2, scale_bits) + radius
    return RealEnclosure(max(lo, Fraction(0)), hi, scale_bits)


def power_enclosure(base: RealEnclosure, exponent: Fraction, scale_bits: int = 64) -> RealEnclosure:
    """Outward base**exponent for a nonnegative base interval and rational exponent."""
    if exponent < 0:
        raise DomainInputError("power_enclosure expects a nonnegative exponent")
    num, den = exponent.numerator, exponent.denominator
    powered = base.pow_int(num)
    return powered.nth_root(den, scale_bits) if den > 1 else powered


def _iv_from_fraction(q: Fraction):
    return mpmath.iv.mpf(q.numerator) / mpmath.iv.mpf(q.denominator)


def exp_log_ratio_enclosure(d: int, c: Fraction, tol: Fraction) -> RealEnclosure:
    """Rigorous enclosure of exp(c * (log log d / log d)^3), width <= tol.

    Requires d >= 3 so that log log d > 0.
    """
    if d < 3:
        raise DomainInputError("needs d >= 3")
    prec = 64
    while prec <= PRECISION_CAP_BITS:
        old = mpmath.iv.prec
        try:
            mpmath.iv.prec = prec
            ld = mpmath.iv.log(mpmath.iv.mpf(d))
            ratio = mpmath.iv.log(ld) / ld
            val = mpmath.iv.exp(_iv_from_fraction(c) * ratio**3)
            lo = mpf_to_fraction(val.a)
            hi = mpf_to_fraction(val.b)
        finally:
            mpmath.iv.prec = old
        if hi - lo <= tol:
            return RealEnclosure(lo, hi, prec)
        prec *= 2
    raise DomainInputError(f"cannot reach tolerance {tol} below the precision cap")


def _decimal_floor(q: Fraction, digits: int) -> str:
    scaled = q.numerator * 10**digits
    n = scaled // q.denominator  # floor
    return _place_point(n, digits)


def _decimal_ceil(q: Fraction, digits: int) -> str:
    scaled = q.numerator * 10**digits
    n = -((-scaled) // q.denominator)  # ceil
    return _place_point(n, digits)


def _place_point(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    n = abs(n)
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"

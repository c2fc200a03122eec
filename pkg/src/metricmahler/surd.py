"""Torsion cosets of surds: formal products of primes with rational exponents.

A coset is the class of prod p^(r_p) modulo roots of unity (sign included);
every quantity computed here (Weil height, minimal degree over Q, strong
metric Mahler measure) is constant on such cosets.  All arithmetic is exact;
ordering of height values reduces to big-integer comparison.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction

from .enclosure import RealEnclosure, nth_root_lower, nth_root_upper, to_fraction
from .errors import DomainInputError, InputSyntaxError
from .exact import factorize_rational, is_prime, parse_rational, format_rational


@dataclass(frozen=True)
class SurdCoset:
    """Canonical formal product prod p^(r_p), primes ascending, exponents
    nonzero reduced rationals; the empty product is the identity coset."""

    exponents: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        seen = set()
        prev = 0
        for p, e in self.exponents:
            if p <= prev:
                raise DomainInputError("primes must be strictly increasing")
            if not is_prime(p):
                raise DomainInputError(f"{p} is not prime")
            if e == 0:
                raise DomainInputError("zero exponent must be dropped")
            seen.add(p)
            prev = p

    @staticmethod
    def from_mapping(mapping) -> "SurdCoset":
        items = tuple(sorted((int(p), Fraction(e)) for p, e in dict(mapping).items() if e != 0))
        return SurdCoset(items)

    @staticmethod
    def identity() -> "SurdCoset":
        return SurdCoset(())

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.exponents)

    def is_identity(self) -> bool:
        return not self.exponents

    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exponents)

    def __str__(self):
        if not self.exponents:
            return "1"
        return " * ".join(f"{p}^{format_rational(e)}" for p, e in self.exponents)


def surd_from_rational(x, d: int = 1) -> SurdCoset:
    """Coset of x^(1/d) for nonzero rational x: exponents e_p/d, sign dropped."""
    x = Fraction(x)
    if x == 0:
        raise DomainInputError("zero is outside the height domain")
    if not isinstance(d, int) or d < 1:
        raise DomainInputError("root order d must be a positive integer")
    return SurdCoset.from_mapping(
        {p: Fraction(e, d) for p, e in factorize_rational(x).items()}
    )


def surd_mul(x: SurdCoset, y: SurdCoset) -> SurdCoset:
    out = x.as_dict()
    for p, e in y.exponents:
        out[p] = out.get(p, Fraction(0)) + e
    return SurdCoset.from_mapping(out)


def surd_inv(x: SurdCoset) -> SurdCoset:
    return SurdCoset.from_mapping({p: -e for p, e in x.exponents})


def surd_pow(x: SurdCoset, r) -> SurdCoset:
    """Exponentwise scaling by a nonzero rational (Q-vector-space action)."""
    r = Fraction(r)
    if r == 0:
        raise DomainInputError("zero power collapses to torsion; use the identity instead")
    return SurdCoset.from_mapping({p: e * r for p, e in x.exponents})


def surd_degree(x: SurdCoset) -> int:
    """Minimal degree over Q among representatives of the coset: the lcm of
    the reduced exponent denominators (1 for the identity)."""
    return math.lcm(*(e.denominator for _, e in x.exponents)) if x.exponents else 1


@dataclass(frozen=True)
class SurdHeightValue:
    """Exact height of a surd coset: the larger of the numerator part
    prod_{r_p > 0} p^(r_p) and denominator part prod_{r_p < 0} p^(-r_p).

    Comparison clears denominators and compares integer products, so ordering
    and equality are exact; the float view is advisory only.
    """

    num_part: tuple[tuple[int, Fraction], ...]
    den_part: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_coset(x: SurdCoset) -> "SurdHeightValue":
        num = tuple((p, e) for p, e in x.exponents if e > 0)
        den = tuple((p, -e) for p, e in x.exponents if e < 0)
        return SurdHeightValue(num, den)

    @staticmethod
    def one() -> "SurdHeightValue":
        return SurdHeightValue((), ())

    def value_exponents(self) -> tuple[tuple[int, Fraction], ...]:
        """The larger of the two parts, as a formal product."""
        return self.num_part if _compare_products(self.num_part, self.den_part) >= 0 else self.den_part

    def is_one(self) -> bool:
        return not self.value_exponents()

    def pow(self, r) -> "SurdHeightValue":
        r = Fraction(r)
        if r < 0:
            raise DomainInputError("height powers must be nonnegative")
        if r == 0:
            return SurdHeightValue.one()
        return SurdHeightValue(
            tuple((p, e * r) for p, e in self.num_part),
            tuple((p, e * r) for p, e in self.den_part),
        )

    def times(self, other: "SurdHeightValue") -> "SurdHeightValue":
        """Product of the two height values as a formal prime product."""
        merged: dict[int, Fraction] = {}
        for p, e in self.value_exponents():
            merged[p] = merged.get(p, Fraction(0)) + e
        for p, e in other.value_exponents():
            merged[p] = merged.get(p, Fraction(0)) + e
        return SurdHeightValue(tuple(sorted(merged.items())), ())

    def compare(self, other: "SurdHeightValue") -> int:
        return _compare_products(self.value_exponents(), other.value_exponents())

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def equals(self, other: "SurdHeightValue") -> bool:
        return self.value_exponents() == other.value_exponents()

    def float_view(self, tol=Fraction(1, 10**12)) -> RealEnclosure:
        return _product_enclosure(self.value_exponents(), to_fraction(tol))

    def __str__(self):
        exps = self.value_exponents()
        if not exps:
            return "1"
        return " * ".join(f"{p}^{format_rational(e)}" for p, e in exps)


def _compare_products(left, right) -> int:
    """Compare prod p^(a_p) with prod q^(b_q), positive rational exponents,
    by clearing denominators and comparing big integers."""
    denoms = [e.denominator for _, e in left] + [e.denominator for _, e in right]
    n = math.lcm(*denoms) if denoms else 1
    lhs = math.prod(p ** int(e * n) for p, e in left) if left else 1
    rhs = math.prod(p ** int(e * n) for p, e in right) if right else 1
    return (lhs > rhs) - (lhs < rhs)


def _product_enclosure(exps, tol: Fraction) -> RealEnclosure:
    if not exps:
        return RealEnclosure.exact(1)
    n = math.lcm(*(e.denominator for _, e in exps))
    integer_power = math.prod(p ** int(e * n) for p, e in exps)
    bits = max(64, (tol.denominator // max(1, tol.numerator)).bit_length() + 8)
    while True:
        lo = nth_root_lower(Fraction(integer_power), n, bits)
        hi = nth_root_upper(Fraction(integer_power), n, bits)
        if hi - lo <= tol:
            return RealEnclosure(lo, hi, bits)
        bits += 16


def surd_weil_height(x: SurdCoset) -> SurdHeightValue:
    """Exact Weil height of the coset: max of numerator and denominator parts."""
    return SurdHeightValue.from_coset(x)


def surd_m_infinity(x: SurdCoset) -> int:
    """Exact strong metric Mahler measure: the largest prime in the support,
    1 for the identity coset (the root-of-unity class)."""
    return x.exponents[-1][0] if x.exponents else 1


def surd_h_to_the_d(x: SurdCoset) -> SurdHeightValue:
    """H(x) raised to the minimal coset degree d(x), exact."""
    return surd_weil_height(x).pow(surd_degree(x))


_SURD_FACTOR = _re.compile(r"^\s*(\d+)\s*\^\s*(-?\d+(?:/\d+)?)\s*$")


def parse_surd(text: str) -> SurdCoset:
    """Parse "p1^e1 * p2^e2 * ..." with rational exponents; "1" is the identity."""
    s = text.strip()
    if s == "1" or s == "":
        return SurdCoset.identity()
    mapping: dict[int, Fraction] = {}
    pos = 0
    for chunk in s.split("*"):
        m = _SURD_FACTOR.match(chunk)
        if not m:
            raise InputSyntaxError(f"bad surd factor {chunk.strip()!r}", text=text, position=pos)
        p = int(m.group(1))
        if not is_prime(p):
            raise InputSyntaxError(f"base {p} is not prime", text=text, position=pos)
        e = parse_rational(m.group(2))
        mapping[p] = mapping.get(p, Fraction(0)) + e
        pos += len(chunk) + 1
    return SurdCoset.from_mapping(mapping)


def format_surd(x: SurdCoset) -> str:
    return str(x)

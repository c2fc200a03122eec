"""Exact arithmetic in real quadratic fields Q(sqrt(D)): minimal polynomials,
field norms, Mahler measures (exact where the field admits it), and bounded
minimum-height enumeration.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction

from .enclosure import RealEnclosure, nth_root_lower, nth_root_upper, to_fraction
from .errors import DomainInputError, EmptySearchError, InputSyntaxError
from .exact import IntPolynomial, factorize, parse_rational, format_rational
from .measure import mahler_measure


def is_squarefree_int(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def _check_disc(disc: int) -> int:
    if not isinstance(disc, int) or disc < 2 or not is_squarefree_int(disc):
        raise DomainInputError(f"discriminant must be a squarefree integer >= 2, got {disc!r}")
    return disc


@dataclass(frozen=True)
class QuadElement:
    """a + b*sqrt(disc) with exact rational a, b and squarefree disc >= 2."""

    a: Fraction
    b: Fraction
    disc: int

    def __post_init__(self):
        _check_disc(self.disc)
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def rational(q, disc: int) -> "QuadElement":
        return QuadElement(Fraction(q), Fraction(0), disc)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadElement":
        return QuadElement(self.a, -self.b, self.disc)

    def _same_field(self, other: "QuadElement"):
        if self.disc != other.disc:
            raise DomainInputError(f"mixed discriminants {self.disc} and {other.disc}")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElement(self.a * other, self.b * other, self.disc)
        self._same_field(other)
        return QuadElement(
            self.a * other.a + self.disc * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.disc,
        )

    __rmul__ = __mul__

    def __add__(self, other):
        self._same_field(other)
        return QuadElement(self.a + other.a, self.b + other.b, self.disc)

    def __sub__(self, other):
        self._same_field(other)
        return QuadElement(self.a - other.a, self.b - other.b, self.disc)

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.disc)

    def inverse(self) -> "QuadElement":
        if self.is_zero():
            raise DomainInputError("zero has no inverse")
        n = qf_norm(self)
        return QuadElement(self.a / n, -self.b / n, self.disc)

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(disc)."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        # opposite signs: compare a^2 with disc * b^2
        lhs, rhs = self.a * self.a, self.disc * self.b * self.b
        if lhs == rhs:
            return 0
        bigger_is_a = lhs > rhs
        return (1 if self.a > 0 else -1) if bigger_is_a else (1 if self.b > 0 else -1)

    def abs_exact(self) -> "QuadElement":
        return self if self.sign() >= 0 else -self

    def compare(self, other) -> int:
        """Sign of self - other; other may be rational."""
        if isinstance(other, (int, Fraction)):
            other = QuadElement.rational(other, self.disc)
        return (self - other).sign()

    def enclosure(self, tol=Fraction(1, 10**12)) -> RealEnclosure:
        tol = to_fraction(tol)
        bits = max(64, (tol.denominator // max(1, tol.numerator)).bit_length() + 8)
        while True:
            root_lo = nth_root_lower(Fraction(self.disc), 2, bits)
            root_hi = nth_root_upper(Fraction(self.disc), 2, bits)
            if self.b >= 0:
                lo = self.a + self.b * root_lo
                hi = self.a + self.b * root_hi
            else:
                lo = self.a + self.b * root_hi
                hi = self.a + self.b * root_lo
            if hi - lo <= tol:
                return RealEnclosure(lo, hi, bits)
            bits += 16

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        w = math.lcm(self.a.denominator, self.b.denominator)
        u, v = self.a * w, self.b * w
        root = f"√{self.disc}"
        vpart = root if v == 1 else (f"-{root}" if v == -1 else f"{v}{root}")
        if u == 0:
            body = vpart
        else:
            body = f"{u}+{vpart}" if v > 0 else f"{u}{vpart}"
        return body if w == 1 else f"({body})/{w}"


def qf_minimal_polynomial(x: QuadElement) -> IntPolynomial:
    """Primitive minimal polynomial over Z: degree 1 for rational x, else the
    cleared-denominator form of t^2 - 2a t + (a^2 - D b^2)."""
    if x.is_zero():
        raise DomainInputError("zero has no height-domain minimal polynomial here")
    if x.b == 0:
        return IntPolynomial([-x.a.numerator, x.a.denominator])
    trace = 2 * x.a
    norm = qf_norm(x)
    den = math.lcm(trace.denominator, norm.denominator)
    return IntPolynomial([int(norm * den), int(-trace * den), den])


def qf_norm(x: QuadElement) -> Fraction:
    """Norm to Q: a^2 - D b^2 (product of the element with its conjugate)."""
    return x.a * x.a - x.disc * x.b * x.b


def qf_trace(x: QuadElement) -> Fraction:
    return 2 * x.a


def qf_mahler_exact(x: QuadElement) -> QuadElement:
    """The Mahler measure of x as an exact element of the same field.

    For rational x this is max(|num|, |den|); for quadratic x it is
    A * prod of the conjugate moduli exceeding 1, where A is the leading
    coefficient of the minimal polynomial -- one of A, |C|, or A|x'|.
    """
    if x.is_zero():
        raise DomainInputError("measure of zero is undefined")
    if x.b == 0:
        return QuadElement.rational(max(abs(x.a.numerator), abs(x.a.denominator)), x.disc)
    poly = qf_minimal_polynomial(x)
    lead = poly.leading
    out = QuadElement.rational(lead, x.disc)
    for root in (x, x.conjugate()):
        mag = root.abs_exact()
        if mag.compare(1) > 0:
            out = out * mag
    return out


def qf_height_squared_exact(x: QuadElement) -> QuadElement:
    """Exact H(x)^2 as a field element: equals the measure for quadratic x and
    the squared measure for rational x (degree-1 minimal polynomial)."""
    m = qf_mahler_exact(x)
    return m if x.b != 0 else m * m


def qf_mahler_measure(x: QuadElement, tol=Fraction(1, 10**12)) -> RealEnclosure:
    """Enclosure of the Mahler measure of x, width <= tol."""
    tol = to_fraction(tol)
    if x.is_zero():
        raise DomainInputError("measure of zero is undefined")
    if x.b == 0:
        return RealEnclosure.exact(max(abs(x.a.numerator), abs(x.a.denominator)))
    m = qf_mahler_exact(x)
    if m.is_rational():
        return RealEnclosure.exact(m.a)
    enc = m.enclosure(tol)
    return enc


def qf_weil_height(x: QuadElement, tol=Fraction(1, 10**12)) -> RealEnclosure:
    """Enclosure of H(x) = M(x)^(1/deg x), width <= tol."""
    tol = to_fraction(tol)
    if x.b == 0:
        return qf_mahler_measure(x, tol)
    bits = max(64, (tol.denominator // max(1, tol.numerator)).bit_length() + 8)
    while True:
        m = qf_mahler_measure(x, tol / 2)
        h = RealEnclosure(
            nth_root_lower(m.lo, 2, bits), nth_root_upper(m.hi, 2, bits), bits
        )
        if h.width <= tol:
            return h
        bits += 16
        tol /= 2


def _canonical_coords(u: int, v: int, w: int) -> tuple[int, int, int]:
    g = math.gcd(math.gcd(abs(u), abs(v)), w)
    return u // g, v // g, w // g


def qf_enumerate_min_height(disc: int, bound: int, tol=Fraction(1, 10**12)):
    """Minimum Weil height strictly above 1 + tol among (u + v*sqrt(D))/w with
    |u|, |v|, w <= bound; an upper estimate of the field's height infimum.

    Returns (element, height enclosure).  Comparison of candidate heights is
    exact (via H^2 as field elements); ties break by lexicographic
    (w, |u|, |v|, u<0, v<0) on reduced coordinates.
    """
    _check_disc(disc)
    if bound < 1:
        raise DomainInputError("bound must be >= 1")
    tol = to_fraction(tol)
    threshold = (1 + tol) * (1 + tol)

    best = None
    seen = set()
    for w in range(1, bound + 1):
        for u in range(-bound, bound + 1):
            for v in range(-bound, bound + 1):
                if u == 0 and v == 0:
                    continue
                cu, cv, cw = _canonical_coords(u, v, w)
                if (cu, cv, cw) in seen:
                    continue
                seen.add((cu, cv, cw))
                x = QuadElement(Fraction(cu, cw), Fraction(cv, cw), disc)
                h2 = qf_height_squared_exact(x)
                if h2.compare(threshold) <= 0:
                    continue
                key = (cw, abs(cu), abs(cv), cu < 0, cv < 0)
                if best is None or h2.compare(best[1]) < 0 or (
                    h2.compare(best[1]) == 0 and key < best[2]
                ):
                    best = (x, h2, key)
    if best is None:
        raise EmptySearchError(
            f"no element of height > 1 + {tol} with coordinates bounded by {bound}"
        )
    return best[0], qf_weil_height(best[0], tol)


_QUAD_RE = _re.compile(
    r"""^\s*
    (?:\(\s*(?P<inner>[^)]*?)\s*\)\s*/\s*(?P<den>\d+)|(?P<bare>.*?))
    \s*$""",
    _re.VERBOSE,
)

_SQRT_TOKEN = _re.compile(r"(?:√|sqrt)\s*(\d+)")


def parse_quad_element(text: str, disc: int | None = None) -> QuadElement:
    """Parse "a", "a+b√D", "b√D", or "(u+v√D)/w"; "sqrt" may replace "√".

    If disc is given, a bare rational is placed in that field and the text's
    discriminant must match.
    """
    m = _QUAD_RE.match(text)
    if not m:
        raise InputSyntaxError("unrecognized field element", text=text, position=0)
    body = m.group("inner") if m.group("inner") is not None else m.group("bare")
    den = int(m.group("den")) if m.group("den") else 1
    if den == 0:
        raise InputSyntaxError("zero denominator", text=text, position=text.find("/"))

    root = _SQRT_TOKEN.search(body)
    if root is None:
        if disc is None:
            raise InputSyntaxError(
                "rational element needs an explicit discriminant", text=text, position=0
            )
        return QuadElement(parse_rational(body) / den, Fraction(0), disc)

    d = int(root.group(1))
    if disc is not None and d != disc:
        raise InputSyntaxError(f"expected discriminant {disc}, found {d}", text=text, position=root.start(1))
    rational_part = body[: root.start()].strip()
    coef_part = rational_part
    # split the b-coefficient (with its sign) off the tail of the rational part
    sign = 1
    b_text = ""
    i = len(coef_part)
    while i > 0 and (coef_part[i - 1].isdigit() or coef_part[i - 1] == "/"):
        i -= 1
    b_text = coef_part[i:]
    head = coef_part[:i].rstrip()
    if head.endswith("+"):
        head = head[:-1]
    elif head.endswith("-"):
        sign = -1
        head = head[:-1]
    elif head:
        raise InputSyntaxError("expected '+' or '-' before the root term", text=text, position=i)
    b = Fraction(sign) * (parse_rational(b_text) if b_text else Fraction(1))
    a = parse_rational(head) if head.strip() else Fraction(0)
    tail = body[root.end():].strip()
    if tail:
        raise InputSyntaxError("trailing input after root term", text=text, position=root.end())
    return QuadElement(a / den, b / den, d)

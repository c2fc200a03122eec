"""Bounded factorization search: certified upper bounds for the metric and
strong metric Mahler measures of rationals, surd cosets, and quadratic-field
elements, paired with independent lower bounds so that pinch certificates
(lower == upper) identify exactly determined values.

Witness products are exact in the ambient representation; measures compare
exactly (rationals, field elements, or formal prime products), so pruning and
tie-breaking are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .enclosure import RealEnclosure, to_fraction
from .errors import DomainInputError, InputSyntaxError, InvariantViolation
from .exact import factorize, parse_rational
from .measure import largest_nonunit_prime
from .quadfield import (
    QuadElement,
    parse_quad_element,
    qf_height_squared_exact,
    qf_mahler_exact,
    qf_mahler_measure,
    qf_minimal_polynomial,
    qf_weil_height,
)
from .surd import (
    SurdCoset,
    SurdHeightValue,
    parse_surd,
    surd_from_rational,
    surd_h_to_the_d,
    surd_m_infinity,
    surd_mul,
    surd_weil_height,
)

MODE_PRODUCT = "product"
MODE_MAX = "max"


# ---------------------------------------------------------------------------
# ambient coercion: every pool lives in exactly one representation
# ---------------------------------------------------------------------------


def _ambient_kind(values) -> str:
    kinds = set()
    for v in values:
        if isinstance(v, QuadElement):
            kinds.add("quad")
        elif isinstance(v, SurdCoset):
            kinds.add("surd")
        elif isinstance(v, (int, Fraction)):
            kinds.add("rational")
        else:
            raise DomainInputError(f"unsupported pool member {v!r}")
    if "quad" in kinds and "surd" in kinds:
        raise DomainInputError("cannot mix quadratic-field elements and surd cosets in one pool")
    if "quad" in kinds:
        return "quad"
    if "surd" in kinds:
        return "surd"
    return "rational"


def _coerce(value, kind: str, disc: int | None):
    if kind == "rational":
        return Fraction(value)
    if kind == "quad":
        if isinstance(value, QuadElement):
            return value
        return QuadElement.rational(Fraction(value), disc)
    if isinstance(value, SurdCoset):
        return value
    return surd_from_rational(Fraction(value), 1)


def _is_identity(value) -> bool:
    if isinstance(value, QuadElement):
        return value.a == 1 and value.b == 0
    if isinstance(value, SurdCoset):
        return value.is_identity()
    return value == 1


def _is_zero(value) -> bool:
    if isinstance(value, QuadElement):
        return value.is_zero()
    if isinstance(value, SurdCoset):
        return False
    return value == 0


def _mul(a, b):
    if isinstance(a, SurdCoset):
        return surd_mul(a, b)
    return a * b


def _measure_key(value):
    """Exact, totally ordered measure representation in the ambient kind."""
    if isinstance(value, QuadElement):
        return qf_mahler_exact(value)
    if isinstance(value, SurdCoset):
        return surd_h_to_the_d(value)
    q = Fraction(value)
    return Fraction(max(abs(q.numerator), abs(q.denominator)))


def _cmp_keys(a, b) -> int:
    if isinstance(a, QuadElement):
        return a.compare(b)
    if isinstance(a, SurdHeightValue):
        return a.compare(b)
    return (a > b) - (a < b)


def _mul_keys(a, b):
    if isinstance(a, SurdHeightValue):
        return a.times(b)
    return a * b


def _measure_enclosure(value, tol: Fraction) -> RealEnclosure:
    if isinstance(value, QuadElement):
        return qf_mahler_measure(value, tol)
    if isinstance(value, SurdCoset):
        return surd_h_to_the_d(value).float_view(tol)
    q = Fraction(value)
    return RealEnclosure.exact(max(abs(q.numerator), abs(q.denominator)))


def _order_key(value):
    """Canonical per-kind ordering used for deterministic tie-breaks."""
    if isinstance(value, QuadElement):
        import math

        w = math.lcm(value.a.denominator, value.b.denominator)
        u, v = int(value.a * w), int(value.b * w)
        return (w, abs(u), abs(v), u < 0, v < 0)
    if isinstance(value, SurdCoset):
        return tuple((p, e.numerator, e.denominator) for p, e in value.exponents)
    q = Fraction(value)
    return (q.denominator, abs(q.numerator), q.numerator < 0)


def member_text(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


@dataclass(frozen=True)
class PoolMember:
    value: object
    measure_key: object
    measure_encl: RealEnclosure


class FactorPool:
    """A finite, duplicate-free set of candidate factors with precomputed
    measures, a witness-length bound, and the enclosure tolerance."""

    def __init__(self, values, max_length: int = 3, tol=Fraction(1, 10**9), disc: int | None = None):
        if max_length < 1:
            raise DomainInputError("max_length must be >= 1")
        tol = to_fraction(tol)
        if tol <= 0:
            raise DomainInputError("tolerance must be positive")
        values = list(values)
        if not values:
            raise DomainInputError("empty factor pool")
        kind = _ambient_kind(values)
        if kind == "quad":
            discs = {v.disc for v in values if isinstance(v, QuadElement)}
            if disc is not None:
                discs.add(disc)
            if len(discs) != 1:
                raise DomainInputError(f"pool mixes discriminants {sorted(discs)}")
            disc = discs.pop()
        coerced = []
        seen = set()
        member_tol = tol / (4 * max_length)
        for v in values:
            cv = _coerce(v, kind, disc)
            if _is_zero(cv):
                raise DomainInputError("zero is not a valid pool member")
            if _is_identity(cv):
                raise DomainInputError("the identity is not a valid pool member")
            marker = cv if not isinstance(cv, QuadElement) else (cv.a, cv.b, cv.disc)
            if marker in seen:
                continue
            seen.add(marker)
            coerced.append(cv)
        members = [
            PoolMember(cv, _measure_key(cv), _measure_enclosure(cv, member_tol)) for cv in coerced
        ]
        members.sort(key=lambda m: _SortAdapter(m))
        self.kind = kind
        self.disc = disc
        self.members = tuple(members)
        self.max_length = max_length
        self.tol = tol

    def __len__(self):
        return len(self.members)


class _SortAdapter:
    """Orders members by exact measure, then canonical coordinates."""

    __slots__ = ("member",)

    def __init__(self, member: PoolMember):
        self.member = member

    def __lt__(self, other: "_SortAdapter"):
        c = _cmp_keys(self.member.measure_key, other.member.measure_key)
        if c != 0:
            return c < 0
        return _order_key(self.member.value) < _order_key(other.member.value)


@dataclass(frozen=True)
class BoundReport:
    """Result of one bounded search: a certified upper bound with the witness
    realizing it, an independent lower bound, and the enumeration trace."""

    mode: str
    upper: RealEnclosure
    witness: tuple
    lower: Fraction
    enumerated: tuple
    trivial_only: bool
    pinned: bool


def _lower_bound_minf(target) -> Fraction:
    if isinstance(target, SurdCoset):
        return Fraction(surd_m_infinity(target))
    if isinstance(target, QuadElement):
        p = largest_nonunit_prime(qf_minimal_polynomial(target))
        return Fraction(p if p is not None else 1)
    q = Fraction(target)
    m = abs(q.numerator) * q.denominator
    return Fraction(max(factorize(m)) if m != 1 else 1)


def _lower_bound_m1(target, tol: Fraction) -> Fraction:
    if isinstance(target, SurdCoset):
        return surd_weil_height(target).float_view(tol).lo
    if isinstance(target, QuadElement):
        return qf_weil_height(target, tol).lo
    q = Fraction(target)
    return Fraction(max(abs(q.numerator), abs(q.denominator)))


def _witness_enclosure(witness_members, mode: str, tol: Fraction) -> RealEnclosure:
    if not witness_members:
        return RealEnclosure.exact(1)
    member_tol = tol / (2 * len(witness_members))
    encls = [_measure_enclosure(m, member_tol) for m in witness_members]
    while True:
        if mode == MODE_MAX:
            out = RealEnclosure(
                max(e.lo for e in encls),
                max(e.hi for e in encls),
                min(e.precision_bits for e in encls),
            )
        else:
            out = encls[0]
            for e in encls[1:]:
                out = out * e
        if out.width <= tol:
            return out
        member_tol /= 16
        encls = [_measure_enclosure(m, member_tol) for m in witness_members]


def _search(target, pool: FactorPool, mode: str, tol) -> BoundReport:
    tol = to_fraction(tol) if tol is not None else pool.tol
    target = _coerce(target, pool.kind, pool.disc)
    if _is_zero(target):
        raise DomainInputError("zero is outside the height domain")

    lower = (
        _lower_bound_minf(target) if mode == MODE_MAX else _lower_bound_m1(target, tol)
    )

    if _is_identity(target):
        upper = RealEnclosure.exact(1)
        return BoundReport(mode, upper, (), Fraction(1), ((),), False, True)

    members = pool.members
    target_key = _measure_key(target)
    incumbent_key = target_key
    incumbent_witness = (target,)
    incumbent_is_trivial = True
    trace = [(target,)]

    def better_than_incumbent(key) -> bool:
        return _cmp_keys(key, incumbent_key) < 0

    for depth in range(1, pool.max_length + 1):
        stack_witness = []

        def rec(start: int, remaining: int, product, metric):
            nonlocal incumbent_key, incumbent_witness, incumbent_is_trivial
            if remaining == 0:
                if product == target:
                    witness = tuple(m.value for m in stack_witness)
                    trace.append(witness)
                    if better_than_incumbent(metric):
                        incumbent_key = metric
                        incumbent_witness = witness
                        incumbent_is_trivial = False
                return
            for i in range(start, len(members)):
                m = members[i]
                if metric is None:
                    new_metric = m.measure_key
                else:
                    if mode == MODE_MAX:
                        new_metric = (
                            m.measure_key if _cmp_keys(m.measure_key, metric) > 0 else metric
                        )
                    else:
                        new_metric = _mul_keys(metric, m.measure_key)
                if not better_than_incumbent(new_metric):
                    break  # members sorted ascending: no later branch can win
                new_product = m.value if product is None else _mul(product, m.value)
                stack_witness.append(m)
                rec(i, remaining - 1, new_product, new_metric)
                stack_witness.pop()

        rec(0, depth, None, None)

    upper = _witness_enclosure(incumbent_witness, mode, tol)
    if lower > upper.hi + tol:
        raise InvariantViolation(
            f"lower bound {lower} exceeds certified upper bound {upper.hi} + tol"
        )
    pinned = _is_pinned(incumbent_key, lower)
    return BoundReport(
        mode, upper, incumbent_witness, lower, tuple(trace), incumbent_is_trivial, pinned
    )


def _is_pinned(upper_key, lower: Fraction) -> bool:
    """True when the exact upper value equals the rational lower bound."""
    if isinstance(upper_key, Fraction):
        return upper_key == lower
    if isinstance(upper_key, QuadElement):
        return upper_key.is_rational() and upper_key.a == lower
    if isinstance(upper_key, SurdHeightValue):
        exps = upper_key.value_exponents()
        if not exps:
            return lower == 1
        if all(e.denominator == 1 for _, e in exps):
            val = 1
            for p, e in exps:
                val *= p ** int(e)
            return Fraction(val) == lower
        return False
    return False


def search_minf_upper(target, pool: FactorPool, tol=None) -> BoundReport:
    """Minimal max-of-measures over products of <= max_length pool members
    equal to the target; lower bound from the largest non-unit prime."""
    return _search(target, pool, MODE_MAX, tol)


def search_m1_upper(target, pool: FactorPool, tol=None) -> BoundReport:
    """Minimal product-of-measures witness; lower bound is the Weil height."""
    return _search(target, pool, MODE_PRODUCT, tol)


def hinf_root_split(x: SurdCoset, n: int, tol=Fraction(1, 10**12)) -> RealEnclosure:
    """Upper bound H(x)^(1/n) realized by writing x as the n-th power of
    x^(1/n); strictly decreasing in n when H(x) > 1, witnessing that the
    strong completion of the Weil height collapses to 1 everywhere."""
    if not isinstance(n, int) or n < 1:
        raise DomainInputError("n must be a positive integer")
    return surd_weil_height(x).pow(Fraction(1, n)).float_view(to_fraction(tol))


# ---------------------------------------------------------------------------
# pool spec files
# ---------------------------------------------------------------------------


def parse_pool_file(text: str) -> FactorPool:
    """Line-oriented pool format::

        disc = 5            # only needed for quadratic members
        max_length = 3
        tol = 1/1000000000
        member = 2
        member = (1+√5)/2
        member = 2^1/2 * 3^-1

    Members may be rationals "a/b", surds "p^e * ...", or quadratic elements
    "a+b√D" (sharing the disc key); '#' starts a comment.
    """
    disc = None
    max_length = 3
    tol = Fraction(1, 10**9)
    member_texts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputSyntaxError(f"line {lineno}: expected 'key = value'", text=raw)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "disc":
            disc = int(value)
        elif key == "max_length":
            max_length = int(value)
        elif key == "tol":
            tol = Fraction(value)
        elif key == "member":
            member_texts.append((lineno, value))
        else:
            raise InputSyntaxError(f"line {lineno}: unknown key {key!r}", text=raw)
    if not member_texts:
        raise InputSyntaxError("pool file lists no members", text=text)
    values = [parse_member_text(v, disc) for _, v in member_texts]
    return FactorPool(values, max_length=max_length, tol=tol, disc=disc)


def parse_member_text(text: str, disc: int | None = None):
    s = text.strip()
    if "√" in s or "sqrt" in s:
        return parse_quad_element(s, disc)
    if "^" in s:
        return parse_surd(s)
    value = parse_rational(s)
    if disc is not None:
        return QuadElement.rational(value, disc)
    return value


def build_quad_pool_values(disc: int, bound: int, height_bound) -> list[QuadElement]:
    """All canonical (u + v*sqrt(D))/w with |u|, |v|, w <= bound and Weil
    height <= height_bound, excluding 0 and 1 (identity); -1 is kept."""
    import math

    hb = Fraction(height_bound)
    hb2 = hb * hb
    out = []
    seen = set()
    for w in range(1, bound + 1):
        for u in range(-bound, bound + 1):
            for v in range(-bound, bound + 1):
                if u == 0 and v == 0:
                    continue
                g = math.gcd(math.gcd(abs(u), abs(v)), w)
                key = (u // g, v // g, w // g)
                if key in seen:
                    continue
                seen.add(key)
                x = QuadElement(Fraction(key[0], key[2]), Fraction(key[1], key[2]), disc)
                if x.a == 1 and x.b == 0:
                    continue
                if qf_height_squared_exact(x).compare(hb2) <= 0:
                    out.append(x)
    return out

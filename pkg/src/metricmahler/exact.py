"""Exact arithmetic substrate: big integers, reduced rationals, prime
factorization, and primitive integer polynomials with a text parser.

Everything here is pure and immutable; no global precision or rounding state.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from .errors import DomainInputError, InputSyntaxError

# The scalar type used throughout the package.  ``fractions.Fraction`` already
# guarantees the reduced-form invariants (gcd(|num|, den) = 1, den >= 1).
ExactRational = Fraction

# Ordered mapping prime -> nonzero signed exponent, primes strictly increasing.
PrimeFactorization = dict


# ---------------------------------------------------------------------------
# primes and factorization
# ---------------------------------------------------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# The witness set above is deterministic for n < 3.317e24 (desk scale is far
# below this); larger inputs fall back to the same witnesses plus a fixed
# extension, which is no longer a proof but has no known counterexample.
_MR_EXTRA = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    witnesses = _MR_WITNESSES if n < 3_317_044_064_679_887_385_961_981 else _MR_WITNESSES + _MR_EXTRA
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


def factorize(n: int) -> PrimeFactorization:
    """Prime factorization of a positive integer as {prime: exponent}.

    Trial division with a Miller-Rabin screen on the remaining cofactor;
    keys are sorted ascending.  factorize(1) == {}.
    """
    if not isinstance(n, int) or n <= 0:
        raise DomainInputError(f"factorize requires a positive integer, got {n!r}")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # 30-wheel trial division; bail out early once the cofactor is prime.
    p = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                e += 1
                n //= p
            factors[p] = e
            if n > 1 and is_prime(n):
                break
        p += increments[i]
        i = (i + 1) % 8
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return dict(sorted(factors.items()))


def factorize_rational(q: Fraction) -> PrimeFactorization:
    """Signed factorization of |q|: numerator primes positive, denominator negative."""
    if q == 0:
        raise DomainInputError("cannot factorize zero")
    factors = dict(factorize(abs(q.numerator)))
    for p, e in factorize(q.denominator).items():
        factors[p] = factors.get(p, 0) - e
    return dict(sorted((p, e) for p, e in factors.items() if e != 0))


def unfactorize(factors: PrimeFactorization) -> Fraction:
    """Rebuild the positive rational represented by a signed factorization."""
    q = Fraction(1)
    for p, e in factors.items():
        q *= Fraction(p) ** e
    return q


def euler_phi(n: int) -> int:
    """Euler's totient via the prime factorization."""
    if n <= 0:
        raise DomainInputError("euler_phi requires a positive integer")
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def parse_rational(text: str) -> Fraction:
    """Parse "a/b" or "a" into a reduced Fraction."""
    s = text.strip()
    try:
        if "/" in s:
            num, _, den = s.partition("/")
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputSyntaxError(f"invalid rational {text!r}: {exc}", text=text) from exc


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------


class IntPolynomial:
    """Integer-coefficient univariate polynomial, coefficients lowest degree
    first, trailing (leading) coefficient nonzero.

    Instances are immutable and hashable.  Construction trims trailing zeros
    but does not normalize content or sign; see :func:`canonicalize_poly`.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coefficients):
        coeffs = [int(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise DomainInputError("the zero polynomial is not representable")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *args):
        raise AttributeError("IntPolynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for c in self.coeffs))

    def is_primitive(self) -> bool:
        return self.content() == 1

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        """Evaluate by Horner's rule; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, re, im):
        """Exact evaluation at re + im*i with Fraction parts; returns (re, im)."""
        acc_re, acc_im = Fraction(0), Fraction(0)
        for c in reversed(self.coeffs):
            acc_re, acc_im = acc_re * re - acc_im * im + c, acc_re * im + acc_im * re
        return acc_re, acc_im

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise DomainInputError("derivative of a constant is the zero polynomial")
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def reverse(self) -> "IntPolynomial":
        """Reversed coefficient sequence x^deg * f(1/x)."""
        return IntPolynomial(self.coeffs[::-1])

    def shift_down(self, k: int) -> "IntPolynomial":
        """Divide by x^k; requires the low k coefficients to vanish."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise DomainInputError("polynomial is not divisible by x^%d" % k)
        return IntPolynomial(self.coeffs[k:])

    def low_zero_count(self) -> int:
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise DomainInputError("multiplying a polynomial by zero")
            return IntPolynomial([other * c for c in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __str__(self):
        return print_polynomial(self)


def canonicalize_poly(f: IntPolynomial) -> IntPolynomial:
    """Primitive part with positive leading coefficient; idempotent."""
    c = f.content()
    sign = 1 if f.leading > 0 else -1
    if c == 1 and sign == 1:
        return f
    return IntPolynomial([x * sign // c for x in f.coeffs])


def print_polynomial(f: IntPolynomial) -> str:
    """Render highest degree first, e.g. "x^2-2x-4"; round-trips with the parser."""
    parts = []
    for exp in range(f.degree, -1, -1):
        c = f.coeffs[exp]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if exp == 0:
            body = str(mag)
        else:
            x = "x" if exp == 1 else f"x^{exp}"
            body = x if mag == 1 else f"{mag}{x}"
        parts.append(sign + body)
    return "".join(parts)


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse a univariate integer polynomial in x, or a comma list of
    coefficients lowest degree first.

    Term grammar: [sign][coefficient][x[^exponent]], whitespace-insensitive,
    implicit coefficient 1 and implicit exponent 1; duplicate exponents sum.
    """
    if text is None or not text.strip():
        raise InputSyntaxError("empty polynomial text", text=text, position=0)
    if "," in text:
        return _parse_coeff_list(text)
    return _parse_terms(text)


def _parse_coeff_list(text: str) -> IntPolynomial:
    coeffs = []
    pos = 0
    for chunk in text.split(","):
        s = chunk.strip()
        if not s:
            raise InputSyntaxError("missing coefficient in comma list", text=text, position=pos)
        try:
            coeffs.append(int(s))
        except ValueError:
            raise InputSyntaxError(
                f"non-integer coefficient {s!r}", text=text, position=pos + chunk.index(s[0])
            ) from None
        pos += len(chunk) + 1
    if all(c == 0 for c in coeffs):
        raise InputSyntaxError("zero polynomial", text=text, position=0)
    return IntPolynomial(coeffs)


def _parse_terms(text: str) -> IntPolynomial:
    terms: dict[int, int] = {}
    n = len(text)
    pos = 0
    first = True

    def skip_ws(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    pos = skip_ws(pos)
    while pos < n:
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        elif not first:
            raise InputSyntaxError("expected '+' or '-' between terms", text=text, position=pos)
        coef_start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        coef = int(text[coef_start:pos]) if pos > coef_start else None
        pos = skip_ws(pos)
        exp = 0
        if pos < n and text[pos] in "xX":
            exp = 1
            pos = skip_ws(pos + 1)
            if pos < n and text[pos] == "^":
                pos = skip_ws(pos + 1)
                exp_start = pos
                if pos < n and text[pos] in "+-":
                    if text[pos] == "-":
                        raise InputSyntaxError("negative exponent", text=text, position=pos)
                    pos += 1
                while pos < n and text[pos].isdigit():
                    pos += 1
                if pos == exp_start:
                    raise InputSyntaxError("missing exponent after '^'", text=text, position=pos)
                exp = int(text[exp_start:pos])
        elif coef is None:
            raise InputSyntaxError("expected coefficient or 'x'", text=text, position=pos)
        if coef is None:
            coef = 1
        terms[exp] = terms.get(exp, 0) + sign * coef
        first = False
        pos = skip_ws(pos)
    if not terms or all(c == 0 for c in terms.values()):
        raise InputSyntaxError("zero polynomial", text=text, position=0)
    coeffs = [0] * (max(terms) + 1)
    for e, c in terms.items():
        coeffs[e] = c
    return IntPolynomial(coeffs)


# ---------------------------------------------------------------------------
# polynomial arithmetic over Q (for gcds, squarefree parts, cyclotomic division)
# ---------------------------------------------------------------------------


def _q_coeffs(f: IntPolynomial) -> list[Fraction]:
    return [Fraction(c) for c in f.coeffs]


def _q_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _q_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        factor = a[i + len(b) - 1] * inv_lead
        q[i] = factor
        if factor:
            for j, bc in enumerate(b):
                a[i + j] -= factor * bc
    return q, _q_trim(a)


def _q_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _q_trim(list(a)), _q_trim(list(b))
    while b:
        _, r = _q_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]  # monic


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z (computed via the monic gcd over Q)."""
    h = _q_gcd(_q_coeffs(f), _q_coeffs(g))
    lcm_den = reduce(math.lcm, (c.denominator for c in h), 1)
    return canonicalize_poly(IntPolynomial([int(c * lcm_den) for c in h]))


def is_squarefree(f: IntPolynomial) -> bool:
    if f.degree == 0:
        return True
    return poly_gcd(f, f.derivative()).degree == 0


def poly_exact_div(f: IntPolynomial, g: IntPolynomial):
    """f / g over Z if the division is exact, else None."""
    q, r = _q_divmod(_q_coeffs(f), _q_coeffs(g))
    if r or any(c.denominator != 1 for c in q):
        return None
    if not q:
        return None
    return IntPolynomial([int(c) for c in q])


def squarefree_decomposition(f: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: pairwise-coprime primitive squarefree factors with
    multiplicities, so that f = prod g_i^i after canonicalizing f.

    Factors of x are included like any other factor.
    """
    f = canonicalize_poly(f)
    if f.degree == 0:
        return []
    a = _q_coeffs(f)
    da = _q_deriv(a)
    g = _q_gcd(a, da)
    if len(g) == 1:
        return [(f, 1)]
    c, _ = _q_divmod(a, g)
    d = _q_sub(_q_divmod(da, g)[0], _q_deriv(c))
    out = []
    i = 1
    while len(c) > 1:
        p = _q_gcd(c, d) if d else [x / c[-1] for x in c]
        if len(p) > 1:
            out.append((canonicalize_poly(_int_from_q(p)), i))
        c, _ = _q_divmod(c, p)
        d = _q_sub(_q_divmod(d, p)[0] if d else [], _q_deriv(c))
        i += 1
    return out


def _q_deriv(c: list[Fraction]) -> list[Fraction]:
    return _q_trim([Fraction(i) * x for i, x in enumerate(c)][1:])


def _q_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _q_trim(out)


def _int_from_q(c: list[Fraction]) -> IntPolynomial:
    lcm_den = reduce(math.lcm, (x.denominator for x in c), 1)
    return IntPolynomial([int(x * lcm_den) for x in c])


_CYCLOTOMIC_CACHE: dict[int, IntPolynomial] = {}


def cyclotomic_polynomial(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, via exact division of x^n - 1."""
    if n <= 0:
        raise DomainInputError("cyclotomic index must be positive")
    if n in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[n]
    poly = IntPolynomial([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            q = poly_exact_div(poly, cyclotomic_polynomial(d))
            assert q is not None
            poly = q
    _CYCLOTOMIC_CACHE[n] = poly
    return poly

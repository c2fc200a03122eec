"""Mahler measure and Weil height of integer polynomials, with certified
enclosures, plus root-of-unity detection, p-adic unit tests, and the
Dobrowolski-style degree lower bound.
"""

from __future__ import annotations

import itertools
import warnings
from fractions import Fraction

from .enclosure import (
    RealEnclosure,
    abs_enclosure_of_complex,
    exp_log_ratio_enclosure,
    to_fraction,
)
from .errors import DomainInputError
from .exact import (
    IntPolynomial,
    canonicalize_poly,
    cyclotomic_polynomial,
    euler_phi,
    factorize,
    is_prime,
    is_squarefree,
    poly_exact_div,
    squarefree_decomposition,
)
from .roots import certified_roots

#: default width target for every enclosure-valued operation
DEFAULT_TOL = Fraction(1, 10**12)


def _measure_of_squarefree(g: IntPolynomial, root_tol: Fraction, scale_bits: int) -> RealEnclosure:
    """|lc| * prod max(1, |root|) from certified root disks."""
    lead = RealEnclosure.exact(abs(g.leading), scale_bits)
    if g.degree == 0:
        return lead
    out = lead
    for box in certified_roots(g, root_tol):
        out = out * abs_enclosure_of_complex(box.re, box.im, box.radius, scale_bits).max_with_one()
    return out


def mahler_measure(f: IntPolynomial, tol=DEFAULT_TOL) -> RealEnclosure:
    """Enclosure of the Mahler measure of f, width <= tol.

    Defined for any nonzero integer polynomial as |lc| times the product of
    the root moduli outside the unit circle; repeated factors are handled
    through an exact squarefree decomposition, roots at zero contribute 1.
    For the value to be the measure of an algebraic number, f must be its
    minimal polynomial (irreducible) -- a documented precondition.
    """
    tol = to_fraction(tol)
    if tol <= 0:
        raise DomainInputError("tolerance must be positive")
    content = f.content()
    g = canonicalize_poly(f)
    g = g.shift_down(g.low_zero_count())
    if g.degree == 0:
        return RealEnclosure.exact(content)
    parts = squarefree_decomposition(g)

    root_tol = tol / (8 * (f.degree + 1))
    scale_bits = max(64, (10**12).bit_length() + (tol.denominator // max(1, tol.numerator)).bit_length())
    while True:
        acc = RealEnclosure.exact(content, scale_bits)
        for factor, mult in parts:
            acc = acc * _measure_of_squarefree(factor, root_tol, scale_bits).pow_int(mult)
        if acc.width <= tol:
            return acc
        root_tol /= 16
        scale_bits += 16


def weil_height(f: IntPolynomial, tol=DEFAULT_TOL, warn_reducible: bool = True) -> RealEnclosure:
    """Enclosure of M(f)^(1/deg f), width <= tol.

    f is expected to be irreducible (the minimal polynomial of the algebraic
    number whose height is wanted); a best-effort screen warns otherwise.
    """
    tol = to_fraction(tol)
    if f.degree < 1:
        raise DomainInputError("Weil height needs degree >= 1")
    if warn_reducible:
        status = irreducibility_status(f)
        if status is False:
            warnings.warn(f"{f} is reducible; the value is M(f)^(1/deg f), not a Weil height")
        elif status is None:
            warnings.warn(f"irreducibility of {f} was not verified (degree too large)")
    deg = f.degree
    scale_bits = max(64, (tol.denominator // max(1, tol.numerator)).bit_length() + 8)
    m = mahler_measure(f, tol / 2)
    h = m.nth_root(deg, scale_bits)
    while h.width > tol:
        m = mahler_measure(f, m.width / 4)
        scale_bits += 16
        h = m.nth_root(deg, scale_bits)
    return h


def is_root_of_unity(f: IntPolynomial) -> bool:
    """True iff the canonicalized polynomial is monic and a product of
    cyclotomic polynomials (trial division by Phi_n for phi(n) <= deg f)."""
    g = canonicalize_poly(f)
    if g.degree == 0 or g.leading != 1 or abs(g.constant) != 1:
        return False
    deg = g.degree
    candidates = [n for n in range(1, 2 * deg * deg + 3) if euler_phi(n) <= deg]
    for n in candidates:
        phi_n = cyclotomic_polynomial(n)
        if phi_n.degree > g.degree:
            continue
        while True:
            q = poly_exact_div(g, phi_n)
            if q is None:
                break
            g = q
            if g.coeffs == (1,):
                return True
    return g.coeffs == (1,)


def is_p_adic_unit(f: IntPolynomial, p: int) -> bool:
    """True iff p divides neither the constant nor the leading coefficient of
    the (primitive) minimal polynomial f."""
    if not is_prime(p):
        raise DomainInputError(f"{p} is not prime")
    g = canonicalize_poly(f)
    if g.constant == 0:
        raise DomainInputError("zero constant coefficient: 0 is outside the height domain")
    return g.constant % p != 0 and g.leading % p != 0


def largest_nonunit_prime(f: IntPolynomial):
    """Largest prime dividing (constant * leading) coefficient, or None."""
    g = canonicalize_poly(f)
    if g.constant == 0:
        raise DomainInputError("zero constant coefficient: 0 is outside the height domain")
    m = abs(g.constant * g.leading)
    if m == 1:
        return None
    return max(factorize(m))


def dobrowolski_lower_bound(d: int, c=Fraction(1, 4), tol=DEFAULT_TOL) -> RealEnclosure:
    """Enclosure of exp(c * (log log d / log d)^3); exactly 1 for d in {1, 2}
    where log log d <= 0 makes the asymptotic shape meaningless."""
    if not isinstance(d, int) or d < 1:
        raise DomainInputError("degree must be a positive integer")
    c = to_fraction(c)
    if c <= 0:
        raise DomainInputError("constant must be positive")
    if d < 3:
        return RealEnclosure.exact(1)
    return exp_log_ratio_enclosure(d, c, to_fraction(tol))


# ---------------------------------------------------------------------------
# best-effort irreducibility screen
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _rational_roots(g: IntPolynomial):
    for p in _divisors(g.constant):
        for q in _divisors(g.leading):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if g(cand) == 0:
                    yield cand


def irreducibility_status(f: IntPolynomial):
    """True = certified irreducible over Q, False = certified reducible,
    None = not determined (degree > 12 with no rational root found).

    Certification for degree <= 12 reconstructs every possible low-degree
    factor from subsets of certified root disks and testing exact division,
    so a True/False answer is never wrong.
    """
    g = canonicalize_poly(f)
    deg = g.degree
    if deg == 0:
        return False
    if deg == 1:
        return True
    if g.constant == 0:
        return False  # divisible by x
    if not is_squarefree(g):
        return False
    for _ in _rational_roots(g):
        return False
    if deg > 12:
        return None

    tol = Fraction(1, 2**48)
    while True:
        boxes = certified_roots(g, tol)
        verdict = _factor_search(g, boxes)
        if verdict is not None:
            return verdict
        tol /= 2**16  # interval coefficients were ambiguous; sharpen


def _factor_search(g: IntPolynomial, boxes):
    """Try all monic-root-subset factors d * prod (x - root_i), sizes up to
    deg/2; returns False if a factor divides exactly, True if none can,
    None if interval widths left an integer coefficient ambiguous."""
    deg = g.degree
    lead_divs = _divisors(g.leading)
    for size in range(2, deg // 2 + 1):
        for subset in itertools.combinations(range(deg), size):
            coeffs = _interval_poly([boxes[i] for i in subset])
            for d in lead_divs:
                cand = _snap_integer_poly(coeffs, d)
                if cand == "ambiguous":
                    return None
                if cand is None:
                    continue
                if poly_exact_div(g, cand) is not None:
                    return False
    return True


def _interval_poly(selected_boxes):
    """Coefficients of prod (x - z_i) as complex rectangle intervals."""
    one = (RealEnclosure.exact(1), RealEnclosure.exact(0))
    zero = (RealEnclosure.exact(0), RealEnclosure.exact(0))
    coeffs = [one]
    for box in selected_boxes:
        neg_re = RealEnclosure(-box.re - box.radius, -box.re + box.radius)
        neg_im = RealEnclosure(-box.im - box.radius, -box.im + box.radius)
        new = [zero] * (len(coeffs) + 1)
        for i, (cre, cim) in enumerate(coeffs):
            sre, sim = new[i + 1]
            new[i + 1] = (sre + cre, sim + cim)
            ore, oim = new[i]
            new[i] = (
                ore + cre * neg_re + _neg(cim * neg_im),
                oim + cre * neg_im + cim * neg_re,
            )
        coeffs = new
    return coeffs


def _neg(e: RealEnclosure) -> RealEnclosure:
    return RealEnclosure(-e.hi, -e.lo, e.precision_bits)


def _snap_integer_poly(coeffs, lead_multiple: int):
    """Scale interval coefficients by lead_multiple and snap each to the
    unique integer it encloses; None if some coefficient cannot be an integer
    or is not real, "ambiguous" if an interval holds several integers."""
    out = []
    scale = RealEnclosure.exact(lead_multiple)
    for cre, cim in coeffs:
        if not cim.contains(0):
            return None
        s = cre * scale
        lo_int = -((-s.lo.numerator) // s.lo.denominator)  # ceil(lo)
        hi_int = s.hi.numerator // s.hi.denominator  # floor(hi)
        if lo_int > hi_int:
            return None
        if lo_int != hi_int:
            return "ambiguous"
        out.append(lo_int)
    if not out or out[-1] == 0:
        return None
    return IntPolynomial(out)

"""Certified complex root isolation for squarefree integer polynomials.

Approximations come from simultaneous iteration at doubling working precision
(mpmath's polyroots); certification is exact rational arithmetic.  For an
approximation z of a degree-n polynomial f with f'(z) != 0, the disk around z
of radius n*|f(z)/f'(z)| contains at least one root (partial-fraction bound on
f'/f).  If the n disks are pairwise disjoint, each contains exactly one root
and together they cover all of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .enclosure import PRECISION_CAP_BITS, mpf_to_fraction, sqrt_upper, to_fraction
from .errors import DomainInputError, NonSquarefreeError, PrecisionError
from .exact import IntPolynomial, is_squarefree


@dataclass(frozen=True)
class RootBox:
    """A disk |z - (re + im*i)| <= radius certified to hold `multiplicity` roots."""

    re: Fraction
    im: Fraction
    radius: Fraction
    multiplicity: int = 1

    def abs_center_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im


def _approximate_roots(f: IntPolynomial, prec_bits: int):
    coeffs_desc = list(reversed(f.coeffs))
    with mpmath.workprec(prec_bits):
        try:
            roots = mpmath.polyroots(coeffs_desc, maxsteps=200, extraprec=prec_bits // 2)
        except mpmath.libmp.NoConvergence:
            return None
        return [(mpf_to_fraction(mpmath.re(r)), mpf_to_fraction(mpmath.im(r))) for r in roots]


def _certify(f: IntPolynomial, points, tol: Fraction, scale_bits: int):
    """Return certified radii for the candidate points, or None."""
    deg = f.degree
    fprime = f.derivative()
    radii = []
    for re, im in points:
        fr, fi = f.eval_complex(re, im)
        pr, pi = fprime.eval_complex(re, im)
        dsq = pr * pr + pi * pi
        if dsq == 0:
            return None
        rsq = Fraction(deg * deg) * (fr * fr + fi * fi) / dsq
        radius = sqrt_upper(rsq, scale_bits)
        if radius > tol:
            return None
        radii.append(radius)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            dre = points[i][0] - points[j][0]
            dim = points[i][1] - points[j][1]
            rr = radii[i] + radii[j]
            if dre * dre + dim * dim <= rr * rr:
                return None
    return radii


def certified_roots(f: IntPolynomial, tol) -> list[RootBox]:
    """Disjoint certified root disks of a squarefree polynomial, radius <= tol,
    sorted by (real, imaginary) part of the centers.

    Raises NonSquarefreeError for repeated roots and PrecisionError if the
    target radius cannot be certified below the precision cap.
    """
    tol = to_fraction(tol)
    if tol <= 0:
        raise DomainInputError("tolerance must be positive")
    if f.degree < 1:
        raise DomainInputError("root isolation needs degree >= 1")
    if not is_squarefree(f):
        raise NonSquarefreeError(f"{f} has repeated roots (gcd with derivative is nonconstant)")

    if f.degree == 1:
        root = Fraction(-f.coeffs[0], f.coeffs[1])
        return [RootBox(root, Fraction(0), Fraction(0))]

    tol_bits = max(1, (tol.denominator // max(1, tol.numerator)).bit_length())
    scale_bits = tol_bits + 16
    prec = max(80, tol_bits + 48)
    while prec <= PRECISION_CAP_BITS:
        points = _approximate_roots(f, prec)
        if points is not None:
            radii = _certify(f, points, tol, scale_bits)
            if radii is not None:
                boxes = [
                    RootBox(re, im, r) for (re, im), r in zip(points, radii)
                ]
                boxes.sort(key=lambda b: (b.re, b.im))
                return boxes
        prec *= 2
        scale_bits += 16
    raise PrecisionError(
        f"could not certify roots of {f} to radius {tol} within {PRECISION_CAP_BITS} bits"
    )

import random
from fractions import Fraction

import pytest

from metricmahler.errors import DomainInputError, InputSyntaxError
from metricmahler.exact import (
    IntPolynomial,
    canonicalize_poly,
    cyclotomic_polynomial,
    euler_phi,
    factorize,
    factorize_rational,
    is_prime,
    is_squarefree,
    parse_polynomial,
    parse_rational,
    poly_exact_div,
    poly_gcd,
    print_polynomial,
    sieve_primes,
    squarefree_decomposition,
    unfactorize,
)


class TestFactorize:
    def test_examples(self):
        assert factorize(12) == {2: 2, 3: 1}
        assert factorize(1) == {}
        assert factorize(97) == {97: 1}

    def test_rejects_nonpositive(self):
        for bad in (0, -5, -1):
            with pytest.raises(DomainInputError):
                factorize(bad)

    def test_recomposition_exhaustive(self):
        for n in range(1, 10_001):
            fac = factorize(n)
            prod = 1
            for p, e in fac.items():
                assert e > 0
                prod *= p**e
            assert prod == n
            assert list(fac) == sorted(fac)

    def test_keys_are_prime(self):
        for n in (2 * 3 * 5 * 7 * 11, 2**10, 999_983 * 4):
            assert all(is_prime(p) for p in factorize(n))

    def test_large_semiprime(self):
        p, q = 1_000_003, 1_000_033
        assert factorize(p * q) == {p: 1, q: 1}

    def test_rational_factorization(self):
        assert factorize_rational(Fraction(-8, 9)) == {2: 3, 3: -2}
        assert unfactorize({2: 3, 3: -2}) == Fraction(8, 9)
        with pytest.raises(DomainInputError):
            factorize_rational(Fraction(0))


class TestPrimes:
    def test_is_prime_against_sieve(self):
        primes = set(sieve_primes(2000))
        for n in range(2000):
            assert is_prime(n) == (n in primes)

    def test_euler_phi(self):
        expected = {1: 1, 2: 1, 3: 2, 4: 2, 6: 2, 12: 4, 30: 8, 97: 96}
        for n, phi in expected.items():
            assert euler_phi(n) == phi


class TestParsePolynomial:
    def test_paper_style_examples(self):
        assert parse_polynomial("x^2-2x-4").coeffs == (-4, -2, 1)
        lehmer = parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
        assert lehmer.coeffs == (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)
        assert parse_polynomial("7").coeffs == (7,)

    def test_comma_list(self):
        assert parse_polynomial("-4,-2,1").coeffs == (-4, -2, 1)
        assert parse_polynomial(" 1, 0,  3 ").coeffs == (1, 0, 3)

    def test_implicit_coefficient_and_exponent(self):
        assert parse_polynomial("x").coeffs == (0, 1)
        assert parse_polynomial("-x").coeffs == (0, -1)
        assert parse_polynomial("2x").coeffs == (0, 2)
        assert parse_polynomial("x^3").coeffs == (0, 0, 0, 1)

    def test_duplicate_exponents_sum(self):
        assert parse_polynomial("x+x").coeffs == (0, 2)
        assert parse_polynomial("x^2+3-x^2+x").coeffs == (3, 1)

    def test_whitespace_insensitive(self):
        assert parse_polynomial(" x ^ 2 - 2 x - 4 ").coeffs == (-4, -2, 1)

    def test_syntax_error_carries_position(self):
        with pytest.raises(InputSyntaxError) as exc:
            parse_polynomial("x^2 + @")
        assert exc.value.position is not None

    def test_rejects_zero_polynomial(self):
        for bad in ("0", "x-x", "0,0,0", ""):
            with pytest.raises(InputSyntaxError):
                parse_polynomial(bad)

    def test_rejects_non_integer_coefficient(self):
        with pytest.raises(InputSyntaxError):
            parse_polynomial("3/2,1")
        with pytest.raises(InputSyntaxError):
            parse_polynomial("1.5x")

    def test_rejects_negative_exponent(self):
        with pytest.raises(InputSyntaxError):
            parse_polynomial("x^-2+1")

    def test_missing_operator_between_terms(self):
        with pytest.raises(InputSyntaxError):
            parse_polynomial("x^2 2x")

    def test_print_parse_round_trip_random(self):
        rng = random.Random(20260810)
        for _ in range(1000):
            degree = rng.randint(0, 20)
            coeffs = [rng.randint(-50, 50) for _ in range(degree + 1)]
            coeffs[-1] = rng.choice([c for c in range(-50, 51) if c != 0])
            f = canonicalize_poly(IntPolynomial(coeffs))
            assert parse_polynomial(print_polynomial(f)) == f


class TestCanonicalize:
    def test_examples(self):
        assert canonicalize_poly(IntPolynomial([-8, -4, 2])).coeffs == (-4, -2, 1)
        assert canonicalize_poly(IntPolynomial([4, 2, -1])).coeffs == (-4, -2, 1)
        assert canonicalize_poly(IntPolynomial([-4, -2, 1])).coeffs == (-4, -2, 1)

    def test_idempotent(self):
        rng = random.Random(7)
        for _ in range(200):
            coeffs = [rng.randint(-20, 20) for _ in range(rng.randint(1, 8))]
            if all(c == 0 for c in coeffs):
                coeffs[-1] = 3
            f = IntPolynomial(coeffs)
            once = canonicalize_poly(f)
            assert canonicalize_poly(once) == once

    def test_preserves_roots(self):
        # canonical * content * sign reproduces the original exactly, so the
        # root set cannot change
        f = IntPolynomial([-8, -4, 2])
        g = canonicalize_poly(f)
        sign = 1 if f.leading > 0 else -1
        assert (sign * f.content() * g) == f

    def test_zero_rejected(self):
        with pytest.raises(DomainInputError):
            IntPolynomial([0, 0, 0])


class TestPolyArithmetic:
    def test_mul_and_eval(self):
        f = parse_polynomial("x^2+1") * parse_polynomial("x-3")
        assert f.coeffs == (-3, 1, -3, 1)
        assert f(Fraction(3)) == 0
        assert f(2) == -5

    def test_eval_complex_exact(self):
        f = parse_polynomial("x^2+1")
        re, im = f.eval_complex(Fraction(0), Fraction(1))
        assert (re, im) == (0, 0)

    def test_gcd_and_squarefree(self):
        f = parse_polynomial("x^2-1")
        g = parse_polynomial("x^2-2x+1")
        assert poly_gcd(f, g).coeffs == (-1, 1)
        assert is_squarefree(f)
        assert not is_squarefree(g)

    def test_exact_division(self):
        f = parse_polynomial("x^4-1")
        assert poly_exact_div(f, parse_polynomial("x^2+1")).coeffs == (-1, 0, 1)
        assert poly_exact_div(f, parse_polynomial("x+3")) is None

    def test_squarefree_decomposition(self):
        f = parse_polynomial("x-1") * parse_polynomial("x-1") * parse_polynomial("x+2")
        assert squarefree_decomposition(f) == [
            (IntPolynomial([2, 1]), 1),
            (IntPolynomial([-1, 1]), 2),
        ]
        cube = parse_polynomial("x-1") * parse_polynomial("x-1") * parse_polynomial("x-1")
        assert squarefree_decomposition(cube) == [(IntPolynomial([-1, 1]), 3)]
        assert squarefree_decomposition(parse_polynomial("x^2-2")) == [
            (IntPolynomial([-2, 0, 1]), 1)
        ]

    def test_squarefree_decomposition_recomposes(self):
        rng = random.Random(11)
        for _ in range(50):
            factors = []
            for _ in range(rng.randint(1, 3)):
                factors.append(IntPolynomial([rng.randint(-4, 4), rng.randint(1, 3)]))
            f = factors[0]
            for g in factors[1:]:
                f = f * g
            f = canonicalize_poly(f)
            recomposed = IntPolynomial([1])
            for g, mult in squarefree_decomposition(f):
                for _ in range(mult):
                    recomposed = recomposed * g
            assert recomposed == f


class TestCyclotomic:
    def test_small_cases(self):
        assert cyclotomic_polynomial(1).coeffs == (-1, 1)
        assert cyclotomic_polynomial(2).coeffs == (1, 1)
        assert cyclotomic_polynomial(3).coeffs == (1, 1, 1)
        assert cyclotomic_polynomial(12).coeffs == (1, 0, -1, 0, 1)

    def test_product_over_divisors(self):
        for n in range(1, 31):
            prod = IntPolynomial([1])
            for d in range(1, n + 1):
                if n % d == 0:
                    prod = prod * cyclotomic_polynomial(d)
            assert prod.coeffs == tuple([-1] + [0] * (n - 1) + [1])

    def test_degrees_match_totient(self):
        for n in range(1, 40):
            assert cyclotomic_polynomial(n).degree == euler_phi(n)


class TestParseRational:
    def test_forms(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("-7") == Fraction(-7)
        assert parse_rational(" 10/4 ") == Fraction(5, 2)

    def test_errors(self):
        for bad in ("a/b", "1/0", "", "1.5.2"):
            with pytest.raises(InputSyntaxError):
                parse_rational(bad)

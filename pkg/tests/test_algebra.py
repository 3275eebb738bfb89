"""Exact polynomial and rational-function arithmetic."""

import random
from fractions import Fraction

import pytest

from gbtcycles.algebra import (
    DomainError,
    PoleError,
    Polynomial,
    RationalFunction,
    exact_div,
    poly_gcd,
)

X = Polynomial.variable("x")
Y = Polynomial.variable("y")


def rand_poly(rng, nterms=6, nvars=2, max_exp=4, bound=9):
    names = ("x", "y", "z")[:nvars]
    terms = {}
    for _ in range(nterms):
        exp = tuple(rng.randrange(max_exp + 1) for _ in range(nvars))
        terms[exp] = Fraction(rng.randrange(-bound, bound + 1), rng.randrange(1, 5))
    return Polynomial(names, terms)


class TestPolynomialBasics:
    def test_zero_terms_dropped(self):
        p = Polynomial(("x",), {(1,): Fraction(0), (0,): Fraction(3)})
        assert p == Polynomial.constant(3, ("x",))
        assert len(p.terms) == 1

    def test_float_coefficients_rejected(self):
        with pytest.raises(TypeError):
            Polynomial(("x",), {(1,): 0.5})

    def test_binomial_power(self):
        p = (X + 1) ** 5
        coeffs = {e[0]: c for e, c in p.terms.items()}
        assert coeffs == {0: 1, 1: 5, 2: 10, 3: 10, 4: 5, 5: 1}

    def test_square_of_sum(self):
        assert (X + Y) ** 2 == X**2 + 2 * X * Y + Y**2

    def test_pow_zero_is_one(self):
        assert (X + Y) ** 0 == Polynomial.one(("x", "y"))

    def test_evaluate_exact(self):
        p = 3 * X**2 * Y - 7 * Y**3 + X
        v = p.evaluate({"x": Fraction(1, 2), "y": Fraction(-2)})
        # 3*(1/4)*(-2) - 7*(-8) + 1/2 = -3/2 + 56 + 1/2 = 55
        assert v == 55

    def test_total_degree(self):
        assert (X**2 * Y + Y).total_degree() == 3
        assert Polynomial.zero(("x",)).total_degree() == -1


class TestCalculus:
    def test_diff_x(self):
        p = 3 * X**2 * Y - 7 * Y**3 + X
        assert p.diff("x") == 6 * X * Y + 1

    def test_diff_y(self):
        p = 3 * X**2 * Y - 7 * Y**3 + X
        assert p.diff("y") == 3 * X**2 - 21 * Y**2

    def test_diff_product_rule_randomized(self):
        rng = random.Random(91)
        for _ in range(25):
            a, b = rand_poly(rng), rand_poly(rng)
            lhs = (a * b).diff("x")
            rhs = a.diff("x") * b + a * b.diff("x")
            assert lhs == rhs


class TestGcdDivision:
    def test_gcd_univariate(self):
        assert poly_gcd(X**2 - 1, (X + 1) ** 2) == X + 1

    def test_gcd_bivariate(self):
        assert poly_gcd((X + Y) * (X - Y), (X + Y) ** 2) == X + Y

    def test_gcd_coprime_is_constant(self):
        assert poly_gcd(X + 1, X - 1).is_constant()

    def test_content_primitive(self):
        p = Polynomial(("x",), {(1,): Fraction(3, 2), (0,): Fraction(-9, 4)})
        content, primitive = p.content_primitive()
        assert content == Fraction(3, 4)
        assert primitive == 2 * X - 3

    def test_exact_div(self):
        assert exact_div(X**2 - Y**2, X - Y) == X + Y

    def test_exact_div_rejects_remainder(self):
        with pytest.raises(DomainError):
            exact_div(X**2 + 1, X - 1)

    def test_gcd_divides_both_randomized(self):
        rng = random.Random(4821)
        for _ in range(15):
            common = rand_poly(rng, nterms=3, max_exp=2)
            if common.is_zero():
                continue
            a = rand_poly(rng, nterms=4, max_exp=3) * common
            b = rand_poly(rng, nterms=4, max_exp=3) * common
            g = poly_gcd(a, b)
            if a.is_zero() or b.is_zero():
                continue
            assert exact_div(a, g) * g == a
            assert exact_div(b, g) * g == b
            # the planted factor must survive in the gcd
            assert exact_div(g, poly_gcd(g, common)) is not None


class TestRingAxioms:
    def test_distributive_randomized(self):
        rng = random.Random(7)
        for _ in range(30):
            a, b, c = rand_poly(rng), rand_poly(rng), rand_poly(rng)
            assert (a + b) * c == a * c + b * c

    def test_mul_commutes_randomized(self):
        rng = random.Random(8)
        for _ in range(30):
            a, b = rand_poly(rng), rand_poly(rng)
            assert a * b == b * a

    def test_eval_hom_randomized(self):
        # evaluation is a ring homomorphism
        rng = random.Random(9)
        point = {"x": Fraction(3, 7), "y": Fraction(-5, 2)}
        for _ in range(20):
            a, b = rand_poly(rng), rand_poly(rng)
            assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point)
            assert (a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point)


class TestRationalFunction:
    def test_canonical_reduction(self):
        rf = RationalFunction(2 * X + 2, 4 * X - 4)
        # denominator primitive with positive lead, content in the numerator
        assert rf.denominator == X - 1
        assert rf.numerator == Polynomial(("x",), {(1,): Fraction(1, 2),
                                                   (0,): Fraction(1, 2)})
        assert poly_gcd(rf.numerator, rf.denominator).is_constant()

    def test_zero_denominator_rejected(self):
        with pytest.raises(DomainError):
            RationalFunction(X, Polynomial.zero(("x",)))

    def test_partial_fraction_recombination(self):
        one = Polynomial.one(("x",))
        h = RationalFunction(one, X * (X + 1)) + RationalFunction(one, X * (X - 1))
        assert h == RationalFunction(Polynomial.constant(2, ("x",)), X**2 - 1)

    def test_evaluate_pole(self):
        rf = RationalFunction(Polynomial.one(("x",)), X - 1)
        with pytest.raises(PoleError):
            rf.evaluate({"x": Fraction(1)})
        assert rf.evaluate({"x": Fraction(3)}) == Fraction(1, 2)

    def test_field_axioms_randomized(self):
        rng = random.Random(303)
        for _ in range(12):
            na, da = rand_poly(rng), rand_poly(rng, nterms=3)
            nb, db = rand_poly(rng), rand_poly(rng, nterms=3)
            if da.is_zero() or db.is_zero():
                continue
            a = RationalFunction(na, da)
            b = RationalFunction(nb, db)
            assert a + b == b + a
            assert a * b == b * a
            assert a - a == RationalFunction(Polynomial.zero(("x", "y")),
                                             Polynomial.one(("x", "y")))

    def test_quotient_derivative(self):
        rf = RationalFunction(X**2, X + 1)
        d = rf.diff("x")
        # (x^2/(x+1))' = (x^2 + 2x)/(x+1)^2
        assert d == RationalFunction(X**2 + 2 * X, (X + 1) ** 2)

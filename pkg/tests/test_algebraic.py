"""Algebraic number layer: construction, refinement, exact comparisons."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recpos import AlgebraicNumber, UniPoly, compare_modulus, make_algebraic, sign
from recpos.algebraic import NotIsolatingError, NotRealError
from recpos.intervals import Box


def poly(*asc):
    return UniPoly.make(asc, "x")


SQRT2 = make_algebraic(poly(-2, 0, 1), Box.from_corners(1, 0, 2, 0))
OMEGA = make_algebraic(poly(1, 1, 1), Box.from_corners(-2, 0, 2, 2))  # (-1+i sqrt3)/2


class TestMakeAlgebraic:
    def test_sqrt2(self):
        assert SQRT2.minpoly == poly(-2, 0, 1)
        assert SQRT2.is_real()

    def test_primitive_cube_root(self):
        e = OMEGA.refine(F(1, 100))
        assert F(-51, 100) <= e.re.lo and e.re.hi <= F(-49, 100)
        assert F(86, 100) <= e.im.lo and e.im.hi <= F(87, 100)

    def test_rational_fast_path(self):
        r = make_algebraic(poly(F(-3, 4), 1), Box.from_corners(0, 0, 1, 0))
        assert r.is_rational() and r.as_rational() == F(3, 4)

    def test_not_isolating(self):
        with pytest.raises(NotIsolatingError):
            make_algebraic(poly(-2, 0, 1), Box.from_corners(-2, 0, 2, 0))

    def test_reducible_input_selects_factor(self):
        # (x^2-2)(x^2-3) with a box around sqrt(3)
        p = poly(-2, 0, 1) * poly(-3, 0, 1)
        a = make_algebraic(p, Box.from_corners(F(17, 10), 0, F(18, 10), 0))
        assert a.minpoly == poly(-3, 0, 1)


class TestRefinement:
    def test_known_digits(self):
        e = SQRT2.refine(F(1, 1000))
        assert F(1414, 1000) <= e.re.lo and e.re.hi <= F(14143, 10000)

    def test_rational_point_interval(self):
        r = AlgebraicNumber.from_rational(F(5, 7))
        e = r.refine(F(1, 10**9))
        assert e.re.lo == e.re.hi == F(5, 7)

    def test_nesting(self):
        a = make_algebraic(poly(-1, -1, 0, 1), Box.from_corners(1, 0, 2, 0))
        prev = a.enclosure()
        for k in (8, 16, 32, 64):
            cur = a.refine(F(1, 2**k))
            assert prev.re.lo <= cur.re.lo and cur.re.hi <= prev.re.hi
            prev = cur


class TestCompareModulus:
    def test_examples(self):
        one = AlgebraicNumber.from_rational(1)
        assert compare_modulus(SQRT2, one) == 1
        assert compare_modulus(OMEGA, OMEGA.conjugate()) == 0
        assert compare_modulus(
            AlgebraicNumber.from_rational(F(7, 10)),
            AlgebraicNumber.from_rational(F(9, 10)),
        ) == -1

    def test_total_order_on_samples(self):
        rng = random.Random(5)
        pool = [SQRT2, OMEGA, OMEGA.conjugate(), AlgebraicNumber.from_rational(1),
                AlgebraicNumber.from_rational(F(-3, 2)), SQRT2 + AlgebraicNumber.from_rational(-2)]
        for _ in range(30):
            a, b, c = rng.sample(pool, 3)
            ab, ba = a.compare_modulus(b), b.compare_modulus(a)
            assert ab == -ba  # antisymmetric
            if ab >= 0 and b.compare_modulus(c) >= 0:
                assert a.compare_modulus(c) >= 0  # transitive through ties


class TestSign:
    def test_examples(self):
        assert sign(SQRT2 + AlgebraicNumber.from_rational(-1)) == 1
        assert sign(AlgebraicNumber.from_rational(0)) == 0
        # the worked cone generator's entry: -2 + 3 sqrt(2) > 0
        assert sign(SQRT2.scale(3).shift(-2)) == 1

    def test_not_real(self):
        with pytest.raises(NotRealError):
            OMEGA.sign()

    @given(st.fractions(min_value=-3, max_value=3, max_denominator=8))
    @settings(max_examples=30, deadline=None)
    def test_sign_laws_rational(self, r):
        a = AlgebraicNumber.from_rational(r)
        assert a.sign() * (-a).sign() in (0, -1)
        assert (a * a).sign() >= 0

    def test_sign_laws_irrational(self):
        for a in (SQRT2, SQRT2.shift(-2), SQRT2.scale(-1)):
            assert a.sign() * (-a).sign() in (0, -1)
            assert (a * a).sign() >= 0


class TestArithmetic:
    def test_field_ops(self):
        two = SQRT2 * SQRT2
        assert two.as_rational() == 2
        s = OMEGA + OMEGA.conjugate()
        assert s.as_rational() == -1
        prod = OMEGA * OMEGA.conjugate()
        assert prod.as_rational() == 1
        assert (SQRT2.inverse() * SQRT2).as_rational() == 1

    def test_equality_and_hashing(self):
        other = AlgebraicNumber.from_rational(2).sqrt_positive()
        assert other == SQRT2
        assert (OMEGA == OMEGA.conjugate()) is False

    def test_abs_squared(self):
        assert OMEGA.abs_squared().as_rational() == 1
        assert SQRT2.abs_squared().as_rational() == 2

"""Recurrence layer: validation, companion convention, exact unrolling."""

import random
from fractions import Fraction as F

import pytest

from recpos import InvalidRecurrence, Recurrence, UniPoly, companion, limit_matrix, unroll
from recpos.polys import RationalFunction
from recpos.recurrence import state_vector


class TestValidation:
    def test_leading_integer_root_rejected(self):
        # p_d = n - 3 vanishes at n = 3
        with pytest.raises(InvalidRecurrence, match="n = 3"):
            Recurrence.make([[1], [-3, 1]], [F(1)])

    def test_poincare_violation(self):
        with pytest.raises(InvalidRecurrence, match="Poincare"):
            Recurrence.make([[0, 0, 1], [1, 1]], [F(1)])

    def test_negative_roots_fine(self):
        Recurrence.make([[1], [3, 1]], [F(1)])  # p_d = n + 3


class TestCompanion:
    def test_worked_example_bottom_row(self, sec3_rec):
        a = companion(sec3_rec)
        assert a[0][0].is_zero() and a[0][1].eval(17) == 1
        # entries reduce: (n+3) cancels in the u_{n+1} coefficient
        n = 5
        p0 = -(n + 2) * (2 * n + 5) ** 2
        p1 = (n + 3) * (8 * n * n + 48 * n + 73)
        p2 = 4 * (n + 3) * (n + 4) ** 2
        assert a[1][0].eval(n) == F(p0, p2)
        assert a[1][1].eval(n) == F(p1, p2)
        # reduced denominator is monic of degree 2 for the second entry
        assert a[1][1].den.degree == 2 and a[1][1].den.lc == 1

    def test_identity_recurrence(self):
        rec = Recurrence.make([[1], [1]], [F(5)])
        a = companion(rec)
        assert len(a) == 1 and a[0][0].eval(12) == 1

    def test_limit_matrix(self, sec3_rec):
        lm = limit_matrix(companion(sec3_rec))
        assert lm == [[F(0), F(1)], [F(-1), F(2)]]

    def test_limit_matrix_error(self):
        bad = [[RationalFunction.make(UniPoly.make([1, 0, 1]), UniPoly.make([0, 1]))]]
        with pytest.raises(ValueError):
            limit_matrix(bad)


class TestUnroll:
    def test_worked_example_values(self, sec3_rec):
        assert unroll(sec3_rec, 3) == [F(1, 64), F(11, 768), F(201, 16384)]

    def test_constant(self):
        rec = Recurrence.make([[1], [1]], [F(5)])
        assert unroll(rec, 6) == [F(5)] * 6

    def test_fibonacci(self):
        rec = Recurrence.make([[1], [1], [1]], [F(0), F(1)])
        assert unroll(rec, 6) == [0, 1, 1, 2, 3, 5]

    def test_companion_consistency_random(self):
        rng = random.Random(11)
        for _ in range(8):
            d = rng.randint(1, 3)
            coeffs = [
                [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))] for _ in range(d)
            ]
            lead = [rng.randint(1, 4) + 2, rng.randint(0, 2), 1]  # no nonneg roots
            try:
                rec = Recurrence.make(coeffs + [lead], [F(rng.randint(-5, 5)) for _ in range(d)])
            except InvalidRecurrence:
                continue
            a = companion(rec)
            vals = unroll(rec, 40 + d)
            for n in range(0, 40 - 1):
                u = vals[n : n + d]
                expected = vals[n + 1 : n + 1 + d]
                image = [
                    sum(a[i][j].eval(n) * u[j] for j in range(d)) for i in range(d)
                ]
                assert image == expected

    def test_state_vector(self, sec3_rec):
        u3 = state_vector(sec3_rec, 3)
        vals = unroll(sec3_rec, 5)
        assert u3 == (vals[3], vals[4])

"""Cone construction, membership, positivity/inclusion certification."""

import random
from fractions import Fraction as F

import pytest

from recpos import (
    UniPoly,
    build_basis,
    choose_epsilon,
    companion,
    contraction_margin,
    membership,
    modulus_groups,
    order_branches,
    positivity_index,
    inclusion_index,
    reversed_char_poly,
)
from recpos.cones import (
    edge_generators_2d,
    image_in_cone,
    row_dominance_at,
    sample_cone_coefficients,
    combination_vector,
)
from recpos.numfield import kp_eval_rational, kp_from_unipoly, NumberField
from recpos.recurrence import Recurrence, state_vector
from recpos.tails import TailFailure, certify_kpoly_positive
from recpos.intervals import Box
from recpos.algebraic import make_algebraic


@pytest.fixture(scope="module")
def sec3_setup(sec3_rec):
    q = reversed_char_poly(companion(sec3_rec))
    report = order_branches(modulus_groups(q), q)
    basis = build_basis(report, 1, 0)
    return report, basis


@pytest.fixture(scope="module")
def cfinite_setup(cfinite_21_rec):
    q = reversed_char_poly(companion(cfinite_21_rec))
    report = order_branches(modulus_groups(q), q)
    basis = build_basis(report, 1, 0)
    return report, basis


class TestChooseEpsilon:
    def test_all_simple_zero(self, sec3_setup):
        report, _ = sec3_setup
        assert choose_epsilon(report).value == 0

    def test_jordan_midpoint(self, jordan_rec):
        # limits 2 > 1 > 1/2 (double): gap |lambda_2| - |lambda_3| = 1/2
        q = reversed_char_poly(companion(jordan_rec))
        report = order_branches(modulus_groups(q), q)
        eps = choose_epsilon(report).value
        assert eps == F(1, 4)


class TestBuildBasis:
    def test_worked_example_edges(self, sec3_setup):
        _, basis = sec3_setup
        f = basis.field
        sqrt2 = f.embed(make_algebraic(UniPoly.make([-2, 0, 1], "x"), Box.from_corners(1, 0, 2, 0)))
        plus, minus = edge_generators_2d(basis)
        assert plus[0] == [f.from_rational(3)]
        assert plus[1] == [f.from_rational(3), f.sub(sqrt2, f.from_rational(6))]
        assert minus[0] == [f.from_rational(1)]
        assert minus[1] == [f.from_rational(1), f.sub(f.scale(sqrt2, 3), f.from_rational(2))]

    def test_dimension_one(self):
        rec = Recurrence.make([[1], [1]], [F(5)])
        q = reversed_char_poly(companion(rec))
        report = order_branches(modulus_groups(q), q)
        basis = build_basis(report, 1, 0)
        assert basis.dimension == 1
        assert basis.columns[0][0] == [basis.field.one()]

    def test_cfinite_y_free(self, cfinite_setup):
        _, basis = cfinite_setup
        for col in basis.columns:
            for entry in col:
                assert len(entry) <= 1  # constants only: K_n == K

    def test_jordan_columns(self, jordan_rec):
        q = reversed_char_poly(companion(jordan_rec))
        report = order_branches(modulus_groups(q), q)
        basis = build_basis(report, 1, F(1, 4))
        assert basis.dimension == 4
        assert basis.labels == [(0, 1), (1, 1), (2, 1), (2, 2)]
        f = basis.field
        # V_{3,2} = eps * (binom(l,1) * (1/2)^(l-1)): (0, 1, 1, 3/4) scaled
        col = basis.columns[3]
        expect = [F(0), F(1, 4), F(1, 4), F(3, 16)]
        got = [kp_eval_rational(f, e, F(1, 7)) for e in col]
        assert [g[0] for g in got] == expect


class TestMembership:
    def test_worked_example_u3(self, sec3_rec, sec3_setup):
        _, basis = sec3_setup
        assert membership(state_vector(sec3_rec, 3), 3, basis) == "In"

    def test_basis_vector_interior(self, cfinite_setup):
        _, basis = cfinite_setup
        # V_{1,1} = 2*(1, 2) is rational here: interior point at every n
        for n in (1, 2, 5, 9):
            assert membership((F(2), F(4)), n, basis) == "In"

    def test_negated_out(self, cfinite_setup):
        _, basis = cfinite_setup
        assert membership((F(-2), F(-4)), 3, basis) == "Out"

    def test_below_valid_from_raises(self, sec3_setup):
        _, basis = sec3_setup
        if basis.basis_valid_from > 1:
            with pytest.raises(ValueError):
                membership((F(1), F(1)), basis.basis_valid_from - 1, basis)

    def test_boundary_exact(self, cfinite_setup):
        _, basis = cfinite_setup
        # V_{1,1} + V_{2,1} = (3, 5) lies on the boundary (alpha = (1, 1))
        assert membership((F(3), F(5)), 4, basis) == "Boundary"


class TestPositivityIndex:
    def test_worked_example_npos2(self, sec3_setup):
        _, basis = sec3_setup
        n_pos, certs = positivity_index(basis)
        assert n_pos == 2  # 3 + (sqrt2-6)/n > 0 iff n >= 2
        assert "cone-positivity-coord-1" in certs

    def test_dimension_one(self):
        rec = Recurrence.make([[1], [1]], [F(5)])
        q = reversed_char_poly(companion(rec))
        report = order_branches(modulus_groups(q), q)
        basis = build_basis(report, 1, 0)
        assert positivity_index(basis)[0] == 1


class TestInclusionIndex:
    def test_cfinite_reduces_to_contraction(self, cfinite_21_rec, cfinite_setup):
        _, basis = cfinite_setup
        res = inclusion_index(basis, cfinite_21_rec)
        assert res.index == basis.basis_valid_from

    def test_worked_example_certified_tight(self, sec3_rec, sec3_setup):
        _, basis = sec3_setup
        res = inclusion_index(basis, sec3_rec)
        assert res.index == 29  # true onset for order-1 truncated cones
        assert row_dominance_at(basis, sec3_rec, res.index)
        assert not row_dominance_at(basis, sec3_rec, res.index - 1)

    def test_order2_shrinks_index(self, sec3_rec, sec3_setup):
        report, _ = sec3_setup
        basis2 = build_basis(report, 2, 0)
        res = inclusion_index(basis2, sec3_rec)
        assert res.index == 5


class TestSampling:
    def test_generator_soundness(self, sec3_rec, sec3_setup):
        _, basis = sec3_setup
        n_pos, _ = positivity_index(basis)
        rng = random.Random(99)
        kf = None
        for n in (n_pos, n_pos + 3, n_pos + 11):
            for _ in range(20):
                alpha = sample_cone_coefficients(basis, rng)
                kf, vec = combination_vector(basis, alpha, n)
                assert all(kf.sign_real(v) > 0 for v in vec)

    def test_inclusion_soundness(self, sec3_rec, sec3_setup):
        _, basis = sec3_setup
        res = inclusion_index(basis, sec3_rec)
        rng = random.Random(3)
        for n in (res.index, res.index + 7):
            for _ in range(10):
                alpha = sample_cone_coefficients(basis, rng)
                assert image_in_cone(basis, sec3_rec, alpha, n)

    def test_bad_truncation_fails_not_lies(self, sec3_rec, sec3_setup):
        """A deliberately corrupted basis must fail certification rather
        than certify something unsound."""
        report, basis = sec3_setup
        import copy

        bad = copy.copy(basis)
        f = bad.field
        bad.columns = [list(map(list, col)) for col in basis.columns]
        # corrupt the slope of the second basis vector grossly
        bad.columns[1][1] = [f.one(), f.from_rational(10)]
        try:
            res = inclusion_index(bad, sec3_rec)
        except TailFailure:
            return  # honest failure
        # if it certifies, the certified statement must actually hold
        for n in (res.index, res.index + 5):
            assert row_dominance_at(bad, sec3_rec, n)


class TestDiagnostics:
    def test_margin_worked_example(self, sec3_setup):
        report, _ = sec3_setup
        box = contraction_margin(report, 100)
        # ~ sqrt(2)/100
        assert box.lo < F(1415, 100000) < box.hi or abs(
            (box.lo + box.hi) / 2 - F(1414, 100000)
        ) < F(1, 10000)

    def test_margin_cfinite(self, cfinite_setup):
        report, _ = cfinite_setup
        box = contraction_margin(report, 77)
        assert box.lo <= F(1, 2) <= box.hi

    def test_margin_turan(self, turan_report):
        box = contraction_margin(turan_report, 100)
        mid = (box.lo + box.hi) / 2
        assert abs(mid - F(1, 100)) < F(1, 500)


class TestTailSurface:
    def test_spec_examples(self):
        q = NumberField.rationals()
        f1 = kp_from_unipoly(q, UniPoly.make([0, 2, -5], "Y"))
        y1, _ = certify_kpoly_positive(q, f1, F(1))
        assert F(1, 3) <= y1 < F(2, 5)
        f2 = kp_from_unipoly(q, UniPoly.make([1, 1], "Y"))
        assert certify_kpoly_positive(q, f2, F(1))[0] == 1
        with pytest.raises(TailFailure):
            certify_kpoly_positive(q, kp_from_unipoly(q, UniPoly.make([0, -1, 1], "Y")), F(1))

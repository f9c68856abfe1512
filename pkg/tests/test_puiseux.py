"""Newton-polygon expansion: worked-example branches, ramified cases,
prefix stability, residual and closure invariants."""

from fractions import Fraction as F

import pytest

from recpos import (
    BiPoly,
    UniPoly,
    branch_step_order,
    companion,
    evaluate_branch,
    extend_branch,
    puiseux_expand,
    reversed_char_poly,
)
from recpos.puiseux import NotSquareFreeError, branch_residual_valuation


def xpoly(terms):
    return BiPoly({k: F(v) for k, v in terms.items()})


@pytest.fixture(scope="module")
def sec3_q(sec3_rec):
    return reversed_char_poly(companion(sec3_rec))


class TestWorkedExample:
    def test_order_one_branches(self, sec3_q):
        bs = puiseux_expand(sec3_q, 1)
        assert len(bs) == 2
        seen = set()
        for b in bs:
            terms = b.coefficients_algebraic()
            assert terms[0][0] == 0 and terms[0][1].as_rational() == 1
            e1, c1 = terms[1]
            assert e1 == 1
            # coefficients -2 +- sqrt(2): minimal polynomial x^2 + 4x + 2
            assert [int(v) for v in c1.minpoly.integer_primitive()[1].coeffs] == [2, 4, 1]
            seen.add(c1.sign())
        assert seen == {-1}  # both coefficients negative

    def test_residual_order(self, sec3_q):
        for b in puiseux_expand(sec3_q, 1):
            res = branch_residual_valuation(sec3_q, b)
            assert res is not None and res > b.truncation_order

    def test_extension_prefix_stable(self, sec3_q):
        bs = puiseux_expand(sec3_q, 1)
        b2 = extend_branch(bs.branches[0], 2, sec3_q)
        assert b2.terms[0][0] == 0 and b2.terms[1][0] == 1
        assert len(b2.terms) >= 3  # a Y^2 term appeared
        old = bs.branches[0].coefficients_algebraic()
        new = b2.coefficients_algebraic()[: len(old)]
        assert all(e1 == e2 and a1 == a2 for (e1, a1), (e2, a2) in zip(old, new))


class TestSimpleShapes:
    def test_square_root_branches(self):
        q = xpoly({(0, 2): 1, (1, 0): -1})  # X^2 - Y
        bs = puiseux_expand(q, 1)
        assert len(bs) == 2
        for b in bs:
            assert b.ramification == 2
            (e, a), = b.coefficients_algebraic()
            assert e == F(1, 2) and abs(a.as_rational()) == 1
        # extension to order 3/2 keeps the prefix
        ext = extend_branch(bs.branches[0], F(3, 2), q)
        assert ext.coefficients_algebraic()[0] == bs.branches[0].coefficients_algebraic()[0]

    def test_polynomial_branch(self):
        q = xpoly({(0, 1): 1, (2, 0): -1})  # X - Y^2
        bs = puiseux_expand(q, 3)
        (b,) = bs.branches
        assert [(e, a.as_rational()) for e, a in b.coefficients_algebraic()] == [(2, 1)]
        ext = extend_branch(b, 5, q)
        assert [(e, a.as_rational()) for e, a in ext.coefficients_algebraic()] == [(2, 1)]

    def test_not_squarefree_rejected(self):
        q = xpoly({(0, 1): 1, (0, 0): -1})
        with pytest.raises(NotSquareFreeError):
            puiseux_expand(q * q, 1)

    def test_branch_count_and_conjugate_closure(self):
        # X^3 - (1+Y): three branches, one real + conjugate pair
        q = xpoly({(0, 3): 1, (0, 0): -1, (1, 0): -1})
        bs = puiseux_expand(q, 2)
        assert len(bs) == 3
        pairing = bs.conjugate_pairs()
        fixed = [i for i, j in pairing.items() if i == j]
        assert len(fixed) == 1
        assert all(pairing[pairing[i]] == i for i in pairing)


class TestEvaluation:
    def test_linear_branch_value(self, sec3_q):
        bs = puiseux_expand(sec3_q, 1)
        # 1 + (-2+sqrt2)/4 ~ 0.8536
        vals = []
        for b in bs.branches:
            box = evaluate_branch(b, 4, F(1, 10**6))
            vals.append((box.re.lo + box.re.hi) / 2)
        assert any(abs(v - F(8536, 10000)) < F(1, 1000) for v in vals)

    def test_point_values(self):
        q = xpoly({(0, 1): 1, (2, 0): -1})
        (b,) = puiseux_expand(q, 3).branches
        box = evaluate_branch(b, 10, F(1, 10**9))
        assert box.re.lo <= F(1, 100) <= box.re.hi
        assert box.width <= F(1, 10**9)

    def test_sqrt_branch_value(self):
        q = xpoly({(0, 2): 1, (1, 0): -1})
        bs = puiseux_expand(q, 1)
        boxes = [evaluate_branch(b, 4, F(1, 10**6)) for b in bs.branches]
        mids = sorted((bx.re.lo + bx.re.hi) / 2 for bx in boxes)
        assert abs(mids[0] + F(1, 2)) < F(1, 1000)
        assert abs(mids[1] - F(1, 2)) < F(1, 1000)


class TestStepOrder:
    def test_from_expansions(self, sec3_q):
        for b in puiseux_expand(sec3_q, 1):
            assert branch_step_order(b) == 2  # lowest nonconstant exponent 1

    def test_skipped_exponents(self):
        # branch 1 - Y + 5Y^3 built as an exact root
        q = xpoly({(0, 1): 1}) - BiPoly({(0, 0): F(1), (1, 0): F(-1), (3, 0): F(5)})
        (b,) = puiseux_expand(q, 4).branches
        assert branch_step_order(b) == 2

    def test_fractional(self):
        q = xpoly({(0, 2): 1, (1, 0): -1})
        assert branch_step_order(puiseux_expand(q, 1).branches[0]) == F(3, 2)

    def test_constant_branch_error(self):
        q = xpoly({(0, 1): 1, (0, 0): -5})
        (b,) = puiseux_expand(q, 2).branches
        with pytest.raises(ValueError):
            branch_step_order(b)

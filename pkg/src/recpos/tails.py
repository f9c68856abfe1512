"""Exact tail certificates for scalar inequalities in Y = 1/n.

Every "for n large enough" claim is reduced to a statement of the form

    F(Y) = R(Y) + sum_j w_j |h_j(Y)|  {>, >=}  0   for all Y in (0, Y*],

with R and h_j polynomials over the problem's number field and integer
weights w_j.  Zeros of F are contained in the zeros of the radical
elimination polynomial Phi (the product of R + sum_j w_j s_j over all sign
choices s_j = +-|h_j|, a polynomial in Y since it is even in each radical),
whose norm down to Q[Y] is isolated exactly.  On a root-free interval the
sign of F is constant, so one exact sample evaluation certifies the whole
tail; the finitely many integers above the threshold are checked one by one,
also exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from sympy import QQ
from sympy.polys.rootisolation import dup_isolate_real_roots_sqf

from .algebraic import AlgebraicNumber
from .config import DegreeCapExceeded
from .intervals import Box, Interval
from .numfield import (
    NumberField,
    Vec,
    kp_add,
    kp_conj,
    kp_eval_rational,
    kp_is_real,
    kp_is_zero,
    kp_mul,
    kp_neg,
    kp_norm,
    kp_scale,
    kp_trim,
    kp_valuation,
)
from .polys import UniPoly, sympy_dup_gcd, unipoly_to_dup

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)


class TailFailure(Exception):
    """The inequality could not be certified (reason in args)."""


@dataclass
class TailCertificate:
    """Replayable transcript: positivity of one scalar inequality on
    (0, 1/threshold] together with the individually checked integers."""

    inequality_id: str
    threshold: int  # holds for all n >= threshold
    leading_sign: int  # sign of F as Y -> 0+ (constant on the tail)
    elimination_poly: list[int]  # integer coefficients, ascending
    y_star: Fraction  # F has constant sign on (0, y_star]
    sample_point: Fraction
    checked_integers: list[int]  # n values verified individually
    strict: bool


@dataclass
class AbsIneq:
    """F = R + sum w_j |h_j| over a number field."""

    field: NumberField
    rhs: list[Vec]  # R, real-valued coefficients
    terms: list[tuple[int, list[Vec]]]  # (weight, h_j)
    ineq_id: str = "ineq"
    strict: bool = True


# ---------------------------------------------------------------------------
# Radical elimination
# ---------------------------------------------------------------------------


def _radical_eliminate(f: NumberField, rhs: list[Vec], terms) -> list[Vec]:
    """Product of R + sum_j (+-w_j) s_j over all sign choices, with
    s_j^2 = h_j conj(h_j); an honest polynomial over the field containing
    every zero of F."""
    bees = [kp_mul(f, h, kp_conj(f, h)) for _, h in terms]
    # sparse polynomial in the radicals: {frozenset of radical indices: KPoly};
    # exponents stay 0/1 because s_j^2 is replaced by b_j on the fly
    poly: dict[frozenset, list[Vec]] = {frozenset(): list(rhs)}
    for j, (w, _h) in enumerate(terms):
        poly[frozenset([j])] = [f.from_rational(w)]
    for j in range(len(terms)):
        even: dict[frozenset, list[Vec]] = {}
        odd: dict[frozenset, list[Vec]] = {}
        for key, kp in poly.items():
            if j in key:
                odd[key - {j}] = kp
            else:
                even[key] = kp
        sq_even = _sparse_square(f, even, bees)
        sq_odd = _sparse_square(f, odd, bees)
        for key, kp in sq_odd.items():
            sq_odd[key] = kp_mul(f, kp, bees[j])
        poly = _sparse_sub(f, sq_even, sq_odd)
    if list(poly.keys()) not in ([frozenset()], []):
        raise AssertionError("radicals not fully eliminated")
    return poly.get(frozenset(), [])


def _sparse_square(f, p: dict, bees) -> dict:
    out: dict[frozenset, list[Vec]] = {}
    items = list(p.items())
    for a, (ka, pa) in enumerate(items):
        for kb, pb in items[a:]:
            prod = kp_mul(f, pa, pb)
            inter = ka & kb
            for j in inter:
                prod = kp_mul(f, prod, bees[j])
            key = (ka | kb) - inter
            if not (ka == kb):
                prod = kp_scale(f, prod, f.from_rational(2))
            out[key] = kp_add(f, out.get(key, []), prod)
    return out


def _sparse_sub(f, a: dict, b: dict) -> dict:
    out = dict(a)
    for k, kp in b.items():
        out[k] = kp_add(f, out.get(k, []), kp_neg(f, kp))
    return {k: v for k, v in out.items() if not kp_is_zero(v)}


# ---------------------------------------------------------------------------
# Exact point signs
# ---------------------------------------------------------------------------


def abs_sum_sign(
    f: NumberField, r: Vec, parts: list[tuple[int, Vec]], max_bits: int = 4000
) -> int:
    """Exact sign of r + sum_j w_j sqrt(b_j) (b_j real >= 0), by interval
    refinement with an exact algebraic zero test as the backstop."""
    width = Fraction(1, 2**24)
    tested_zero = False
    while True:
        total = f.enclosure(r, width).re
        for w, b in parts:
            bb = f.enclosure(b, width).re
            lo = bb.lo if bb.lo > 0 else _ZERO
            root = Interval(lo, bb.hi if bb.hi > 0 else _ZERO).sqrt(96)
            total = total + root.scale(Fraction(w))
        s = total.sign()
        if s is not None:
            return s
        if not tested_zero:
            tested_zero = True
            if _abs_sum_is_zero(f, r, parts):
                return 0
        width /= 2**16
        if width < Fraction(1, 2**max_bits):
            raise TailFailure("point sign undecided at maximum precision")


def _abs_sum_is_zero(f: NumberField, r: Vec, parts) -> bool:
    total = f.to_algebraic(r)
    for w, b in parts:
        balg = f.to_algebraic(b)
        if balg.sign() < 0:
            raise AssertionError("negative radicand in |.| term")
        total = total + balg.sqrt_positive().scale(w)
    return total.is_zero()


# ---------------------------------------------------------------------------
# Tail + integer-walk certification
# ---------------------------------------------------------------------------


def _positive_root_threshold(norm: UniPoly, y_max: Fraction) -> Fraction:
    """Rational y* <= y_max with no root of `norm` in (0, y*]."""
    coeffs = list(norm.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    p = UniPoly.make(coeffs, "Y")
    if p.degree < 1:
        return y_max
    g = sympy_dup_gcd(p, p.derivative())
    sqf = p.divmod(g)[0] if g.degree > 0 else p
    best = y_max
    roots = dup_isolate_real_roots_sqf(
        unipoly_to_dup(sqf), QQ, inf=QQ(0), sup=QQ(y_max.numerator, y_max.denominator)
    )
    for a, b in roots:
        lo = Fraction(int(a.numerator), int(a.denominator))
        hi = Fraction(int(b.numerator), int(b.denominator))
        if hi <= 0:
            continue
        # refine until the lower bound is positive and tight (so the
        # certified region reaches close to the first root)
        while lo <= 0 or (hi - lo) * 256 > hi:
            if lo == hi:
                break
            width = (hi - lo) / 8
            res = dup_isolate_real_roots_sqf(
                unipoly_to_dup(sqf),
                QQ,
                inf=QQ(lo.numerator, lo.denominator),
                sup=QQ(hi.numerator, hi.denominator),
                eps=QQ(width.numerator, width.denominator),
            )
            (a2, b2) = res[0]
            lo = Fraction(int(a2.numerator), int(a2.denominator))
            hi = Fraction(int(b2.numerator), int(b2.denominator))
        cand = lo * Fraction(1023, 1024)  # strictly below the root
        if cand < best:
            best = cand
    return best


def certify_abs_inequality(
    ineq: AbsIneq,
    y_max: Fraction = _HALF,
    n_cap: int = 100_000,
    start_walk: int | None = None,
) -> tuple[int, TailCertificate]:
    """Least certified N with F(1/n) {>,>=} 0 for all integers n >= N.

    Raises TailFailure when the inequality fails on the tail or cannot be
    decided within caps.
    """
    f = ineq.field
    if not kp_is_real(f, ineq.rhs):
        raise AssertionError("rhs of inequality is not real-valued")
    phi = _radical_eliminate(f, ineq.rhs, ineq.terms)
    if kp_is_zero(phi):
        raise TailFailure("degenerate inequality: elimination polynomial vanishes")
    val = kp_valuation(f, phi)
    stripped = phi[val:]
    norm = kp_norm(f, stripped, "Y")
    if norm.is_zero():
        raise AssertionError("norm of a nonzero polynomial vanished")
    y_star = _positive_root_threshold(norm, y_max)
    sample = y_star
    s = _f_sign_at(ineq, sample)
    if s <= 0:
        raise TailFailure(f"inequality fails on the tail (sign {s} at Y={sample})")
    n_tail = int(1 / y_star) + 1
    if n_tail > n_cap:
        raise TailFailure("tail threshold beyond integer-walk cap")
    checked: list[int] = []
    n = n_tail - 1
    least = n_tail
    lo_walk = 1 if start_walk is None else start_walk
    while n >= lo_walk:
        sn = _f_sign_at(ineq, Fraction(1, n))
        ok = sn > 0 or (sn == 0 and not ineq.strict)
        if not ok:
            break
        checked.append(n)
        least = n
        n -= 1
    cert = TailCertificate(
        inequality_id=ineq.ineq_id,
        threshold=least,
        leading_sign=1,
        elimination_poly=_int_coeffs(norm),
        y_star=y_star,
        sample_point=sample,
        checked_integers=checked,
        strict=ineq.strict,
    )
    return least, cert


def _f_sign_at(ineq: AbsIneq, y: Fraction) -> int:
    f = ineq.field
    r = kp_eval_rational(f, ineq.rhs, y)
    parts = []
    for w, h in ineq.terms:
        hv = kp_eval_rational(f, h, y)
        parts.append((w, f.mul(hv, f.conj(hv))))
    return abs_sum_sign(f, r, parts)


def _int_coeffs(p: UniPoly) -> list[int]:
    _, prim = p.integer_primitive()
    return [int(c) for c in prim.coeffs]


def verify_tail_certificate(ineq: AbsIneq, cert: TailCertificate) -> bool:
    """Independent replay: re-derive the elimination polynomial, re-check
    the root-free region, the sample sign and the individually checked
    integers."""
    f = ineq.field
    try:
        phi = _radical_eliminate(f, ineq.rhs, ineq.terms)
        if kp_is_zero(phi):
            return False
        val = kp_valuation(f, phi)
        norm = kp_norm(f, phi[val:], "Y")
        if _int_coeffs(norm) != cert.elimination_poly:
            return False
        if _positive_root_threshold(norm, cert.y_star) < cert.y_star:
            return False
        if _f_sign_at(ineq, cert.sample_point) <= 0:
            return False
        n_tail = int(1 / cert.y_star) + 1
        if cert.threshold > n_tail:
            return False
        # integers in [threshold, n_tail) must have been checked one by one;
        # n >= n_tail is covered by the root-free tail
        need = set(range(cert.threshold, n_tail))
        if not need.issubset(set(cert.checked_integers)):
            return False
        for n in cert.checked_integers:
            sn = _f_sign_at(ineq, Fraction(1, n))
            if not (sn > 0 or (sn == 0 and not cert.strict)):
                return False
        return True
    except (TailFailure, DegreeCapExceeded):
        return False


def certify_kpoly_positive(
    f: NumberField, p: list[Vec], y_max: Fraction, ineq_id: str = "poly"
) -> tuple[Fraction, TailCertificate]:
    """Spec surface: certify p(Y) > 0 for all Y in (0, Y*], Y* <= y_max.

    Checks the lowest-order coefficient sign (must be positive), bounds the
    positive-root-free region exactly and returns the threshold with a
    replayable transcript."""
    if kp_is_zero(p):
        raise TailFailure("zero polynomial")
    val = kp_valuation(f, p)
    lead = f.sign_real(p[val])
    if lead <= 0:
        raise TailFailure("lowest-order coefficient is not positive")
    norm = kp_norm(f, p[val:], "Y")
    y_star = _positive_root_threshold(norm, y_max)
    sample = y_star
    v = f.sign_real(kp_eval_rational(f, p, sample))
    if v <= 0:
        raise AssertionError("sample sign contradicts root-free region")
    cert = TailCertificate(
        inequality_id=ineq_id,
        threshold=int(1 / y_star) + 1,
        leading_sign=lead,
        elimination_poly=_int_coeffs(norm),
        y_star=y_star,
        sample_point=sample,
        checked_integers=[],
        strict=True,
    )
    return y_star, cert

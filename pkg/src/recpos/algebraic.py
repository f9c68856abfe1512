"""Exact algebraic numbers: minimal polynomial + isolating box.

An `AlgebraicNumber` designates one root of an irreducible integer
polynomial by a rational-corner rectangle containing exactly that root.
Refinement shrinks the rectangle without ever changing which root is
designated.  Ring operations go through resultants and re-selection, so the
results are again exact; comparisons bottom out in exact zero tests, never
in epsilon thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from sympy import QQ
from sympy.polys.factortools import dup_factor_list
from sympy.polys.rootisolation import (
    dup_count_complex_roots,
    dup_isolate_complex_roots_sqf,
    dup_isolate_real_roots_sqf,
)

from .config import ALGEBRAIC_DEGREE_CAP, DegreeCapExceeded
from .intervals import Box, Interval
from .polys import BiPoly, UniPoly, resultant_x, unipoly_from_dup, unipoly_to_dup

# The spec-level name for a complex enclosure.
ComplexInterval = Box

_ZERO = Fraction(0)


class NotIsolatingError(ValueError):
    """The supplied rectangle does not contain exactly one root."""


class NotRealError(ValueError):
    """Sign requested for a provably non-real algebraic number."""


def _canonical_minpoly(p: UniPoly) -> UniPoly:
    _, prim = p.integer_primitive()
    return UniPoly(prim.coeffs, "x")


@lru_cache(maxsize=4096)
def _factor_cached(coeffs: tuple[Fraction, ...]) -> tuple[tuple[UniPoly, int], ...]:
    p = UniPoly(coeffs, "x")
    _, factors = dup_factor_list(unipoly_to_dup(p), QQ)
    return tuple((_canonical_minpoly(unipoly_from_dup(f, "x")), m) for f, m in factors)


def factor_rational_poly(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Irreducible factorization over Q (content dropped, factors canonical)."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    return list(_factor_cached(_canonical_minpoly(p).coeffs))


def _qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def _fr(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _trim_axis_edge(p: UniPoly, box: Box) -> Box:
    """Shrink an axis-touching complex rectangle until the *closed* box
    contains exactly the one non-real root it isolates (a real root sitting
    on the im=0 edge would otherwise be counted too)."""
    lower_half = box.im.hi == 0
    anchor = box.im.lo if lower_half else box.im.hi
    for k in range(1, 400):
        edge = anchor * Fraction(1, 2**k)
        cand = Box(box.re, Interval(box.im.lo, edge) if lower_half else Interval(edge, box.im.hi))
        # the closed candidate excludes im = 0, so it contains either the
        # designated non-real root (once the edge passed it) or nothing yet
        if _count_roots_in_box(p, cand) == 1:
            return cand
    raise NotIsolatingError("could not trim a real-axis boundary root away")


@lru_cache(maxsize=4096)
def _isolate_cached(coeffs: tuple[Fraction, ...]) -> tuple[Box, ...]:
    """Isolating boxes for all distinct roots of an irreducible polynomial.

    Boxes are pre-refined in the isolation sweep itself (cheap) so that the
    interval-Newton refinement can take over immediately afterwards."""
    p = UniPoly(coeffs, "x")
    dup = unipoly_to_dup(p)
    eps = QQ(1, 2**16)
    boxes: list[Box] = []
    reals = dup_isolate_real_roots_sqf(dup, QQ, eps=eps)
    real_spans = []
    for a, b in reals:
        span = Interval(_fr(a), _fr(b))
        real_spans.append(span)
        boxes.append(Box(span, Interval.point(0)))
    if p.degree > len(reals):
        comps = dup_isolate_complex_roots_sqf(dup, QQ, eps=eps)
        for (x1, y1), (x2, y2) in comps:
            box = Box.from_corners(_fr(x1), _fr(y1), _fr(x2), _fr(y2))
            touches_axis = box.im.lo == 0 or box.im.hi == 0
            if touches_axis and any(s.overlaps(box.re) for s in real_spans):
                # a real root may sit on the closed im=0 edge: trim it away
                box = _trim_axis_edge(p, box)
            boxes.append(box)
    return tuple(boxes)


def isolate_roots(p: UniPoly) -> list[Box]:
    return list(_isolate_cached(_canonical_minpoly(p).coeffs))


def _count_roots_in_box(p: UniPoly, box: Box) -> int:
    """Number of distinct roots of the square-free part of p inside box."""
    dup = unipoly_to_dup(p)
    if box.im.lo == box.im.hi == 0:
        reals = dup_isolate_real_roots_sqf(dup, QQ, inf=_qq(box.re.lo), sup=_qq(box.re.hi))
        return len(reals)
    return dup_count_complex_roots(
        dup, QQ, (_qq(box.re.lo), _qq(box.im.lo)), (_qq(box.re.hi), _qq(box.im.hi))
    )


def _split_once(p: UniPoly, box: Box) -> Box:
    """One certified bisection step: halve the wider dimension, keeping the
    half that provably contains the single root (split line perturbed when a
    root sits on it)."""
    horizontal = box.re.width >= box.im.width
    span = box.re if horizontal else box.im
    for num, den in ((1, 2), (3, 7), (4, 7), (5, 11), (6, 11)):
        cut = span.lo + span.width * Fraction(num, den)
        if horizontal:
            lo_part = Box(Interval(span.lo, cut), box.im)
            hi_part = Box(Interval(cut, span.hi), box.im)
        else:
            lo_part = Box(box.re, Interval(span.lo, cut))
            hi_part = Box(box.re, Interval(cut, span.hi))
        n_lo = _count_roots_in_box(p, lo_part)
        if n_lo == 1:
            if _count_roots_in_box(p, hi_part) == 0:
                return lo_part
            continue  # root on the cut line; perturb
        if n_lo == 0:
            return hi_part
    raise NotIsolatingError("bisection could not separate the root from the cut line")


def _newton_step(p: UniPoly, dp: UniPoly, box: Box) -> Box | None:
    """One interval-Newton contraction: every root of p in `box` also lies
    in mid - p(mid)/p'(box), so intersecting is sound."""
    dfb = dp.eval_box(box)
    if dfb.abs2().contains_zero():
        return None
    mid = Box.point(box.re.mid, box.im.mid)
    n = mid - p.eval_box(mid) / dfb
    if not n.overlaps(box):
        return None
    new = Box(n.re.intersect(box.re), n.im.intersect(box.im))
    # keep endpoint bit-size proportional to the achieved precision
    bits = max(16, 2 * _width_bits(new.width) + 16)
    return new.round_out(bits)


def _width_bits(w: Fraction) -> int:
    if w <= 0:
        return 4096
    return max(0, (w.denominator.bit_length() - w.numerator.bit_length()))


def _refine_box(p: UniPoly, box: Box, eps: Fraction) -> Box:
    """Shrink an isolating box to width <= eps, same designated root."""
    if box.width <= eps or box.is_point():
        return box
    dup = unipoly_to_dup(p)
    dp = p.derivative()
    # interval Newton is the fast path once the box is reasonably small
    for _ in range(4096):
        if box.width <= eps:
            return box
        nb = _newton_step(p, dp, box)
        if nb is not None and nb.width <= box.width * Fraction(3, 4):
            box = nb
            continue
        # Newton stalled: take certified shrinking steps
        if box.im.lo == box.im.hi == 0:
            res = dup_isolate_real_roots_sqf(
                dup,
                QQ,
                inf=_qq(box.re.lo),
                sup=_qq(box.re.hi),
                eps=_qq(max(eps, box.width / 64)),
            )
            if len(res) != 1:
                raise NotIsolatingError(
                    f"box not isolating during refinement ({len(res)} roots)"
                )
            a, b = res[0]
            box = Box(Interval(_fr(a), _fr(b)), Interval.point(0))
        else:
            box = _split_once(p, box)
    raise AssertionError("refinement failed to converge")


@dataclass
class AlgebraicNumber:
    """One designated root of an irreducible rational polynomial."""

    minpoly: UniPoly
    box: Box
    _cache: Box | None = field(default=None, repr=False, compare=False)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(r) -> "AlgebraicNumber":
        r = Fraction(r)
        mp = _canonical_minpoly(UniPoly.make([-r, 1], "x"))
        return AlgebraicNumber(mp, Box.point(r))

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return -self.minpoly.coeffs[0] / self.minpoly.coeffs[1]

    def is_zero(self) -> bool:
        return self.is_rational() and self.as_rational() == 0

    # -- refinement ---------------------------------------------------------

    def enclosure(self, width: Fraction | None = None) -> Box:
        """Complex enclosure of the designated root, width <= `width` in both
        parts when given.  Successive enclosures nest."""
        if self.is_rational():
            return Box.point(self.as_rational())
        box = self._cache if self._cache is not None else self.box
        if width is not None and box.width > width:
            # aim well inside the requested width so callers get a
            # comfortably centered enclosure
            box = _refine_box(self.minpoly, box, width / 8)
            self._cache = box
        return box

    def refine(self, width) -> Box:
        return self.enclosure(Fraction(width))

    # -- structure ----------------------------------------------------------

    def root_index(self) -> int:
        """Index of the designated root among the minimal polynomial's
        isolated roots (stable, used for exact equality)."""
        boxes = isolate_roots(self.minpoly)
        if len(boxes) == 1:
            return 0
        mine = self.enclosure()
        while True:
            hits = [i for i, b in enumerate(boxes) if b.overlaps(mine)]
            if len(hits) == 1:
                return hits[0]
            mine = self.enclosure(mine.width / 4)
            boxes = [_refine_box(self.minpoly, b, mine.width) for b in boxes]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        if self.minpoly.coeffs != other.minpoly.coeffs:
            return False
        if self.is_rational():
            return True
        return self.root_index() == other.root_index()

    def __hash__(self):
        return hash(self.minpoly.coeffs)

    def is_real(self) -> bool:
        """Exact realness test (no refinement loop needed)."""
        if self.is_rational():
            return True
        box = self.enclosure()
        if not box.im.contains_zero():
            return False
        reals = dup_isolate_real_roots_sqf(
            unipoly_to_dup(self.minpoly), QQ, inf=box.re.lo, sup=box.re.hi
        )
        return len(reals) >= 1

    def sign(self) -> int:
        """Exact sign of a real algebraic number; raises NotRealError."""
        if self.is_rational():
            r = self.as_rational()
            return (r > 0) - (r < 0)
        if not self.is_real():
            raise NotRealError("sign of a non-real algebraic number")
        # irreducible of degree > 1 cannot vanish, so refinement terminates
        box = self.enclosure()
        while box.re.contains_zero():
            box = self.enclosure(box.width / 4)
        return 1 if box.re.lo > 0 else -1

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "AlgebraicNumber":
        mp = UniPoly(tuple((-1) ** k * c for k, c in enumerate(self.minpoly.coeffs)), "x")
        return AlgebraicNumber(_canonical_minpoly(mp), -self.enclosure())

    def conjugate(self) -> "AlgebraicNumber":
        if self.is_real():
            return self
        return AlgebraicNumber(self.minpoly, self.enclosure().conjugate())

    def scale(self, c) -> "AlgebraicNumber":
        c = Fraction(c)
        if c == 0:
            return AlgebraicNumber.from_rational(0)
        if self.is_rational():
            return AlgebraicNumber.from_rational(self.as_rational() * c)
        # minpoly of c*alpha is p(x/c) cleared
        d = self.degree
        mp = UniPoly(
            tuple(coef * c ** (d - k) for k, coef in enumerate(self.minpoly.coeffs)), "x"
        )
        return AlgebraicNumber(_canonical_minpoly(mp), self.enclosure().scale(c))

    def shift(self, c) -> "AlgebraicNumber":
        """self + rational c, degree-preserving."""
        c = Fraction(c)
        if self.is_rational():
            return AlgebraicNumber.from_rational(self.as_rational() + c)
        shifted = self.minpoly.compose(UniPoly.make([-c, 1], "x"))
        return AlgebraicNumber(
            _canonical_minpoly(shifted), self.enclosure() + Box.point(c)
        )

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return AlgebraicNumber.from_rational(1 / self.as_rational())
        mp = UniPoly(tuple(reversed(self.minpoly.coeffs)), "x")
        box = self.enclosure()
        while box.contains_zero():
            box = self.enclosure(box.width / 4)
        inv = _box_inverse(box)
        return _select(_canonical_minpoly(mp), inv, lambda eps: _box_inverse(self.enclosure(eps)))

    def __add__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        if self.is_rational():
            return other.shift(self.as_rational())
        if other.is_rational():
            return self.shift(other.as_rational())
        if self.degree * other.degree > ALGEBRAIC_DEGREE_CAP:
            raise DegreeCapExceeded("algebraic addition degree cap")
        res = _resultant_sum(self.minpoly, other.minpoly)
        return _select(
            res,
            self.enclosure() + other.enclosure(),
            lambda eps: self.enclosure(eps) + other.enclosure(eps),
        )

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other) -> "AlgebraicNumber":
        return self + (-_coerce(other))

    def __mul__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        if self.is_rational():
            return other.scale(self.as_rational())
        if other.is_rational():
            return self.scale(other.as_rational())
        if self.degree * other.degree > ALGEBRAIC_DEGREE_CAP:
            raise DegreeCapExceeded("algebraic multiplication degree cap")
        res = _resultant_product(self.minpoly, other.minpoly)
        return _select(
            res,
            self.enclosure() * other.enclosure(),
            lambda eps: self.enclosure(eps) * other.enclosure(eps),
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "AlgebraicNumber":
        acc = AlgebraicNumber.from_rational(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def abs_squared(self) -> "AlgebraicNumber":
        """|a|^2 = a * conj(a), a real nonnegative algebraic number."""
        if self.is_rational():
            r = self.as_rational()
            return AlgebraicNumber.from_rational(r * r)
        if self.is_real():
            return self * self
        return self * self.conjugate()

    def sqrt_positive(self) -> "AlgebraicNumber":
        """Nonnegative square root of a real nonnegative algebraic number."""
        if self.sign() < 0:
            raise ValueError("sqrt of negative value")
        if self.is_zero():
            return self
        # roots of p(z^2) include +-sqrt(alpha); select the positive one
        terms = {}
        for k, c in enumerate(self.minpoly.coeffs):
            terms[2 * k] = c
        mp = UniPoly.make([terms.get(i, _ZERO) for i in range(2 * self.degree + 1)], "x")

        def approx(eps):
            b = self.enclosure(eps)
            lo = b.re.lo if b.re.lo > 0 else _ZERO
            from .intervals import sqrt_down, sqrt_up

            return Box(Interval(sqrt_down(lo, 80), sqrt_up(b.re.hi, 80)), Interval.point(0))

        return _select(mp, approx(Fraction(1, 2**20)), approx)

    # -- ordering on moduli --------------------------------------------------

    def compare_modulus(self, other: "AlgebraicNumber") -> int:
        """-1 / 0 / +1 comparison of |self| vs |other|; exact (ties resolved
        by an exact zero test on |a|^2 - |b|^2, never by thresholds)."""
        other = _coerce(other)
        eps = Fraction(1, 2**8)
        for _ in range(6):
            a2 = self.enclosure(eps).abs2()
            b2 = other.enclosure(eps).abs2()
            if a2.lo > b2.hi:
                return 1
            if a2.hi < b2.lo:
                return -1
            eps /= 2**8
        diff = self.abs_squared() - other.abs_squared()
        if diff.is_zero():
            return 0
        return diff.sign()

    def __repr__(self):
        b = self.enclosure()
        re = (b.re.lo + b.re.hi) / 2
        im = (b.im.lo + b.im.hi) / 2
        val = f"{float(re):.6g}" + (f"{float(im):+.6g}*I" if im else "")
        return f"AlgebraicNumber({self.minpoly}, ~{val})"


def _coerce(v) -> AlgebraicNumber:
    if isinstance(v, AlgebraicNumber):
        return v
    return AlgebraicNumber.from_rational(Fraction(v))


def _box_inverse(box: Box) -> Box:
    den = box.abs2()
    re = box.re / den
    im = (-box.im) / den
    return Box(re, im)


def _resultant_sum(pa: UniPoly, pb: UniPoly) -> UniPoly:
    """Res_z(pa(z), pb(y - z)): vanishes at every a + b."""
    # variables: X = z (eliminated), Y = y
    a_terms = {(0, i): c for i, c in enumerate(pa.coeffs) if c != 0}
    b_terms: dict[tuple[int, int], Fraction] = {}
    for k, c in enumerate(pb.coeffs):
        if c == 0:
            continue
        for j in range(k + 1):
            key = (k - j, j)
            b_terms[key] = b_terms.get(key, _ZERO) + c * comb(k, j) * (-1) ** j
    return resultant_x(BiPoly(a_terms), BiPoly(b_terms))


def _resultant_product(pa: UniPoly, pb: UniPoly) -> UniPoly:
    """Res_z(pa(z), z^db * pb(y/z)): vanishes at every a * b."""
    db = pb.degree
    a_terms = {(0, i): c for i, c in enumerate(pa.coeffs) if c != 0}
    b_terms = {(k, db - k): c for k, c in enumerate(pb.coeffs) if c != 0}
    return resultant_x(BiPoly(a_terms), BiPoly(b_terms))


def _select(candidate_poly: UniPoly, approx: Box, approx_fn) -> AlgebraicNumber:
    """Select the designated root of `candidate_poly` lying in the shrinking
    enclosure `approx_fn(eps)`; returns an AlgebraicNumber over the right
    irreducible factor."""
    factors = factor_rational_poly(candidate_poly)
    eps = max(approx.width, Fraction(1, 2**10))
    while True:
        hits: list[tuple[UniPoly, Box]] = []
        for f, _ in factors:
            for b in isolate_roots(f):
                rb = b
                # refine candidate boxes toward the current approximation width
                if rb.width > eps:
                    rb = _refine_box(f, rb, eps)
                if rb.overlaps(approx):
                    hits.append((f, rb))
        if len(hits) == 1:
            f, rb = hits[0]
            tight = Box(
                rb.re.intersect(approx.re) if rb.re.overlaps(approx.re) else rb.re,
                rb.im.intersect(approx.im) if rb.im.overlaps(approx.im) else rb.im,
            )
            # keep the factor's isolating rectangle; intersecting is only an
            # optimization and must still contain the root
            if _count_roots_in_box(f, tight) == 1:
                rb = tight
            if f.degree == 1:
                return AlgebraicNumber.from_rational(-f.coeffs[0] / f.coeffs[1])
            return AlgebraicNumber(f, rb)
        eps /= 16
        approx = approx_fn(eps)
        if eps < Fraction(1, 2**4000):
            raise AssertionError("root selection failed to converge")


def make_algebraic(p: UniPoly, box: Box) -> AlgebraicNumber:
    """Designate the unique root of p inside `box` (error if the count of
    distinct roots in the box is not exactly one)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    factors = factor_rational_poly(p)
    hits = []
    for f, _ in factors:
        cnt = _count_roots_in_box(f, box)
        if cnt > 0:
            hits.append((f, cnt))
    total = sum(c for _, c in hits)
    if total != 1:
        raise NotIsolatingError(f"box not isolating: contains {total} roots")
    f = hits[0][0]
    if f.degree == 1:
        return AlgebraicNumber.from_rational(-f.coeffs[0] / f.coeffs[1])
    # the designated root is f's unique root inside box; find the isolating
    # rectangle of f whose intersection with box still holds one root
    for b in isolate_roots(f):
        if not b.overlaps(box):
            continue
        inter = Box(b.re.intersect(box.re), b.im.intersect(box.im))
        try:
            if _count_roots_in_box(f, inter) == 1:
                return AlgebraicNumber(f, inter)
        except Exception:
            pass
    raise NotIsolatingError("box does not pin a root of the selected factor")


def sign(a: AlgebraicNumber) -> int:
    return a.sign()


def compare_modulus(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    return a.compare_modulus(b)

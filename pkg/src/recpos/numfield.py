"""Arithmetic in a single-generator number field Q(theta).

Elements are coefficient vectors over Q of length deg(theta); the zero test
is therefore trivial and every sign query terminates (a nonzero vector is a
nonzero number, so refining theta's enclosure eventually decides).

The module also provides Trager factorization of polynomials over the field
(norm + rational factorization + gcd), which powers both embeddings of
standalone algebraic numbers and field joins via primitive elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebraic import AlgebraicNumber, _select, factor_rational_poly
from .config import ALGEBRAIC_DEGREE_CAP, DegreeCapExceeded
from .intervals import Box, Interval, eval_poly_box
from .polys import BiPoly, UniPoly, resultant_x

_ZERO = Fraction(0)
_ONE = Fraction(1)

Vec = tuple[Fraction, ...]


class FieldNotConjClosed(RuntimeError):
    pass


class NumberField:
    """Q(theta) for an exact algebraic generator theta."""

    def __init__(self, theta: AlgebraicNumber):
        self.theta = theta
        mp = theta.minpoly
        self.deg = mp.degree
        lc = mp.lc
        self.monic = tuple(c / lc for c in mp.coeffs)  # ascending, monic
        # reduction table: theta^k for k in [deg, 2*deg-2]
        self._pow: list[Vec] = []
        if self.deg >= 1:
            red = [-c for c in self.monic[:-1]]  # theta^deg
            cur = list(red)
            self._pow.append(tuple(cur))
            for _ in range(self.deg - 2):
                cur = [_ZERO] + cur  # multiply by theta
                top = cur.pop()  # overflowing theta^deg coefficient
                if top:
                    cur = [c + top * r for c, r in zip(cur, red)]
                self._pow.append(tuple(cur))
        self._conj_matrix: list[Vec] | None = None
        self._alg_cache: dict[Vec, AlgebraicNumber] = {}

    # -- basics --------------------------------------------------------------

    @staticmethod
    def rationals() -> "NumberField":
        return NumberField(AlgebraicNumber.from_rational(0))

    def is_rational_field(self) -> bool:
        return self.deg == 1

    def zero(self) -> Vec:
        return (_ZERO,) * self.deg

    def one(self) -> Vec:
        return self.from_rational(1)

    def gen(self) -> Vec:
        if self.deg == 1:
            return (self.theta.as_rational(),)
        return tuple(_ONE if i == 1 else _ZERO for i in range(self.deg))

    def from_rational(self, r) -> Vec:
        r = Fraction(r)
        return (r,) + (_ZERO,) * (self.deg - 1)

    def is_zero(self, a: Vec) -> bool:
        return all(c == 0 for c in a)

    def is_rational_elt(self, a: Vec) -> bool:
        return all(c == 0 for c in a[1:])

    def add(self, a: Vec, b: Vec) -> Vec:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Vec, b: Vec) -> Vec:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Vec) -> Vec:
        return tuple(-x for x in a)

    def scale(self, a: Vec, r) -> Vec:
        r = Fraction(r)
        return tuple(x * r for x in a)

    def mul(self, a: Vec, b: Vec) -> Vec:
        m = self.deg
        if m == 1:
            return (a[0] * b[0],)
        conv = [_ZERO] * (2 * m - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    conv[i + j] += x * y
        out = conv[:m]
        for k in range(m, 2 * m - 1):
            c = conv[k]
            if c:
                red = self._pow[k - m]
                out = [o + c * r for o, r in zip(out, red)]
        return tuple(out)

    def inv(self, a: Vec) -> Vec:
        if self.is_zero(a):
            raise ZeroDivisionError("field inverse of zero")
        if self.deg == 1:
            return (1 / a[0],)
        # extended Euclid in Q[t] against the monic minimal polynomial
        m = UniPoly.make(self.monic, "t")
        r0, r1 = m, UniPoly.make(a, "t")
        s0, s1 = UniPoly.zero("t"), UniPoly.const(1, "t")
        while r1.degree > 0:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise ZeroDivisionError("element not invertible (reducible modulus?)")
        inv = s1.scale(1 / r1.coeffs[0])
        vec = list(inv.coeffs) + [_ZERO] * (self.deg - len(inv.coeffs))
        return tuple(vec[: self.deg])

    def div(self, a: Vec, b: Vec) -> Vec:
        return self.mul(a, self.inv(b))

    def pow(self, a: Vec, n: int) -> Vec:
        acc = self.one()
        base = a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    # -- numerics -------------------------------------------------------------

    def eval_box(self, a: Vec) -> Box:
        tb = self.theta.enclosure()
        return eval_poly_box([Box.point(c) for c in a], tb)

    def enclosure(self, a: Vec, width: Fraction) -> Box:
        box = self.eval_box(a)
        eps = self.theta.enclosure().width
        while box.width > width:
            eps = max(eps / 16, Fraction(1, 2 ** 4000))
            self.theta.enclosure(eps)
            box = self.eval_box(a)
            if eps == Fraction(1, 2 ** 4000):  # pragma: no cover - safety stop
                raise AssertionError("enclosure refinement stalled")
        return box

    def sign_real(self, a: Vec) -> int:
        """Exact sign of a real-valued element (caller guarantees realness)."""
        if self.is_zero(a):
            return 0
        width = Fraction(1, 2 ** 10)
        while True:
            box = self.enclosure(a, width)
            s = box.re.sign()
            if s is not None and (s != 0 or not box.im.contains_zero() or box.is_point()):
                return s
            if not box.re.contains_zero():
                return 1 if box.re.lo > 0 else -1
            width /= 2 ** 8

    # -- conjugation -----------------------------------------------------------

    def conj_closed(self) -> bool:
        try:
            self._ensure_conj()
            return True
        except FieldNotConjClosed:
            return False

    def _ensure_conj(self) -> None:
        if self._conj_matrix is not None:
            return
        if self.theta.is_real():
            self._conj_matrix = [
                tuple(_ONE if i == j else _ZERO for i in range(self.deg))
                for j in range(self.deg)
            ]
            return
        tbar = self.embed(self.theta.conjugate())
        if tbar is None:
            raise FieldNotConjClosed("conjugate of generator not in field")
        cols = [self.one(), tbar]
        for _ in range(self.deg - 2):
            cols.append(self.mul(cols[-1], tbar))
        self._conj_matrix = cols  # cols[k] = conj(theta)^k

    def conj(self, a: Vec) -> Vec:
        self._ensure_conj()
        out = self.zero()
        for k, c in enumerate(a):
            if c:
                out = self.add(out, self.scale(self._conj_matrix[k], c))
        return out

    def is_real_elt(self, a: Vec) -> bool:
        return self.conj(a) == tuple(a)

    def re(self, a: Vec) -> Vec:
        return self.scale(self.add(a, self.conj(a)), Fraction(1, 2))

    def abs2(self, a: Vec) -> Vec:
        return self.mul(a, self.conj(a))

    # -- conversions ------------------------------------------------------------

    def char_poly_of(self, a: Vec) -> UniPoly:
        """Res_z(M(z), x - A(z)): degree-m rational polynomial vanishing at
        the element (the characteristic polynomial of multiplication by it)."""
        if self.deg == 1:
            return UniPoly.make([-a[0], 1], "x")
        m_terms = {(0, i): c for i, c in enumerate(self.monic) if c != 0}
        e_terms: dict[tuple[int, int], Fraction] = {(1, 0): _ONE}
        for i, c in enumerate(a):
            if c:
                e_terms[(0, i)] = e_terms.get((0, i), _ZERO) - c
        return resultant_x(BiPoly(m_terms), BiPoly(e_terms))

    def to_algebraic(self, a: Vec) -> AlgebraicNumber:
        if self.is_rational_elt(a):
            return AlgebraicNumber.from_rational(a[0])
        key = tuple(a)
        hit = self._alg_cache.get(key)
        if hit is not None:
            return hit
        cp = self.char_poly_of(a)

        def approx(eps):
            return self.enclosure(a, eps)

        out = _select(cp, self.eval_box(a), approx)
        self._alg_cache[key] = out
        return out

    def embed(self, alg: AlgebraicNumber) -> Vec | None:
        """Express a standalone algebraic number as an element, or None."""
        if alg.is_rational():
            return self.from_rational(alg.as_rational())
        if self.deg == 1 or alg.degree > self.deg or self.deg % alg.degree != 0:
            return None
        factors = factor_over(self, kp_from_unipoly(self, alg.minpoly))
        roots = [kp_root_of_linear(self, f) for f, _ in factors if kp_degree(f) == 1]
        if not roots:
            return None
        width = Fraction(1, 2 ** 8)
        target = alg.enclosure()
        while True:
            hits = []
            for r in roots:
                if self.enclosure(r, width).overlaps(target):
                    hits.append(r)
            if len(hits) == 1:
                return hits[0]
            if not hits:
                return None
            target = alg.enclosure(width)
            width /= 2 ** 8


# ---------------------------------------------------------------------------
# Polynomials over a number field (dense, ascending)
# ---------------------------------------------------------------------------


def kp_trim(f: NumberField, p: list[Vec]) -> list[Vec]:
    while p and f.is_zero(p[-1]):
        p.pop()
    return p


def kp_zero() -> list[Vec]:
    return []


def kp_degree(p: list[Vec]) -> int:
    return len(p) - 1


def kp_is_zero(p: list[Vec]) -> bool:
    return not p


def kp_from_unipoly(f: NumberField, p: UniPoly) -> list[Vec]:
    return [f.from_rational(c) for c in p.coeffs]


def kp_const(f: NumberField, v: Vec) -> list[Vec]:
    return [] if f.is_zero(v) else [v]


def kp_add(f: NumberField, a: list[Vec], b: list[Vec]) -> list[Vec]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = f.add(out[i], v)
    return kp_trim(f, out)


def kp_neg(f: NumberField, a: list[Vec]) -> list[Vec]:
    return [f.neg(v) for v in a]


def kp_sub(f: NumberField, a: list[Vec], b: list[Vec]) -> list[Vec]:
    return kp_add(f, a, kp_neg(f, b))


def kp_mul(f: NumberField, a: list[Vec], b: list[Vec]) -> list[Vec]:
    if not a or not b:
        return []
    out = [f.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if f.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not f.is_zero(y):
                out[i + j] = f.add(out[i + j], f.mul(x, y))
    return kp_trim(f, out)


def kp_scale(f: NumberField, a: list[Vec], v: Vec) -> list[Vec]:
    if f.is_zero(v):
        return []
    return kp_trim(f, [f.mul(c, v) for c in a])


def kp_shift_up(f: NumberField, a: list[Vec], k: int) -> list[Vec]:
    if not a:
        return []
    return [f.zero()] * k + list(a)


def kp_pow(f: NumberField, a: list[Vec], n: int) -> list[Vec]:
    acc = [f.one()]
    base = list(a)
    while n:
        if n & 1:
            acc = kp_mul(f, acc, base)
        base = kp_mul(f, base, base)
        n >>= 1
    return acc


def kp_eval(f: NumberField, a: list[Vec], x: Vec) -> Vec:
    acc = f.zero()
    for c in reversed(a):
        acc = f.add(f.mul(acc, x), c)
    return acc


def kp_eval_rational(f: NumberField, a: list[Vec], r: Fraction) -> Vec:
    acc = f.zero()
    for c in reversed(a):
        acc = f.add(f.scale(acc, r), c)
    return acc


def kp_derivative(f: NumberField, a: list[Vec]) -> list[Vec]:
    return kp_trim(f, [f.scale(c, k) for k, c in enumerate(a) if k >= 1])


def kp_divmod(f: NumberField, a: list[Vec], b: list[Vec]) -> tuple[list[Vec], list[Vec]]:
    if kp_is_zero(b):
        raise ZeroDivisionError("KPoly division by zero")
    q = [f.zero() for _ in range(max(0, len(a) - len(b) + 1))]
    r = list(a)
    inv_lc = f.inv(b[-1])
    db = len(b) - 1
    while len(r) >= len(b) and r:
        if f.is_zero(r[-1]):
            r.pop()
            continue
        k = len(r) - 1 - db
        factor = f.mul(r[-1], inv_lc)
        q[k] = factor
        for i, c in enumerate(b):
            r[k + i] = f.sub(r[k + i], f.mul(factor, c))
        r.pop()
    return kp_trim(f, q), kp_trim(f, r)


def kp_monic(f: NumberField, a: list[Vec]) -> list[Vec]:
    if not a:
        return a
    inv = f.inv(a[-1])
    return [f.mul(c, inv) for c in a]


def kp_gcd(f: NumberField, a: list[Vec], b: list[Vec]) -> list[Vec]:
    a, b = list(a), list(b)
    while not kp_is_zero(b):
        _, r = kp_divmod(f, a, b)
        a, b = b, r
    return kp_monic(f, a)


def kp_conj(f: NumberField, a: list[Vec]) -> list[Vec]:
    return [f.conj(c) for c in a]


def kp_is_real(f: NumberField, a: list[Vec]) -> bool:
    return all(f.is_real_elt(c) for c in a)


def kp_compose_linear(f: NumberField, a: list[Vec], shift: Vec, scale: Vec) -> list[Vec]:
    """a(scale*x + shift) over the field."""
    lin = [shift, scale]
    acc: list[Vec] = []
    for c in reversed(a):
        acc = kp_add(f, kp_mul(f, acc, lin), kp_const(f, c))
    return acc


def kp_root_of_linear(f: NumberField, p: list[Vec]) -> Vec:
    if kp_degree(p) != 1:
        raise ValueError("not linear")
    return f.neg(f.div(p[0], p[1]))


def kp_valuation(f: NumberField, p: list[Vec]) -> int | None:
    """Order of vanishing at 0 (None for the zero polynomial)."""
    for i, c in enumerate(p):
        if not f.is_zero(c):
            return i
    return None


# ---------------------------------------------------------------------------
# Norms and Trager factorization
# ---------------------------------------------------------------------------


def kp_norm(f: NumberField, p: list[Vec], var: str = "Y") -> UniPoly:
    """Norm of a K-coefficient polynomial down to Q[var]: the resultant
    Res_z(M(z), p_z(var)), nonzero whenever p is nonzero."""
    if f.deg == 1:
        return UniPoly.make([c[0] for c in p], var)
    m_terms = {(0, i): c for i, c in enumerate(f.monic) if c != 0}
    p_terms: dict[tuple[int, int], Fraction] = {}
    for ypow, vec in enumerate(p):
        for zpow, c in enumerate(vec):
            if c:
                p_terms[(ypow, zpow)] = c
    res = resultant_x(BiPoly(m_terms), BiPoly(p_terms))
    return UniPoly(res.coeffs, var)


def kp_squarefree_decomposition(f: NumberField, p: list[Vec]) -> list[tuple[list[Vec], int]]:
    """Yun's algorithm over the field; factors monic."""
    p = kp_monic(f, list(p))
    d = kp_derivative(f, p)
    g = kp_gcd(f, p, d)
    out = []
    if kp_degree(g) == 0:
        return [(p, 1)]
    w, _ = kp_divmod(f, p, g)
    y, _ = kp_divmod(f, d, g)
    i = 1
    while kp_degree(w) > 0:
        z = kp_sub(f, y, kp_derivative(f, w))
        fac = kp_gcd(f, w, z)
        if kp_degree(fac) > 0:
            out.append((fac, i))
        w, _ = kp_divmod(f, w, fac)
        y, _ = kp_divmod(f, z, fac)
        i += 1
    return out


def factor_over(f: NumberField, p: list[Vec]) -> list[tuple[list[Vec], int]]:
    """Irreducible monic factorization over Q(theta) (Trager's method)."""
    if kp_is_zero(p):
        raise ValueError("factor of zero polynomial")
    out: list[tuple[list[Vec], int]] = []
    for sq, mult in kp_squarefree_decomposition(f, p):
        for g in _factor_squarefree(f, sq):
            out.append((g, mult))
    return out


def _factor_squarefree(f: NumberField, p: list[Vec]) -> list[list[Vec]]:
    if kp_degree(p) <= 1:
        return [p]
    if f.deg == 1:
        uni = UniPoly.make([c[0] for c in p], "x")
        return [kp_from_unipoly(f, fac.monic()) for fac, _ in factor_rational_poly(uni)]
    if kp_degree(p) * f.deg > ALGEBRAIC_DEGREE_CAP:
        raise DegreeCapExceeded("Trager factorization degree cap")
    for s in (0, 1, -1, 2, -2, 3, -3, 5, -5, 7, -7):
        norm = _shifted_norm(f, p, s)
        if norm.gcd(norm.derivative()).degree == 0:  # squarefree norm
            qfactors = factor_rational_poly(norm)
            result = []
            rem = list(p)
            for h, _ in qfactors:
                shift_elt = f.scale(f.gen(), s)
                hk = kp_compose_linear(
                    f, kp_from_unipoly(f, h.monic()), shift_elt, f.one()
                )
                g = kp_gcd(f, rem, hk)
                if kp_degree(g) >= 1:
                    result.append(g)
                    rem, r = kp_divmod(f, rem, g)
                    if not kp_is_zero(r):
                        raise AssertionError("Trager factor did not divide")
            if kp_degree(rem) != 0:
                raise AssertionError("Trager factorization incomplete")
            return result
    raise AssertionError("no squarefree shift found (should be impossible over Q)")


def _shifted_norm(f: NumberField, p: list[Vec], s: int) -> UniPoly:
    """Norm of p(x - s*theta): rational polynomial in x."""
    # bivariate in (z = theta, x); eliminate z
    m_terms = {(0, i): c for i, c in enumerate(f.monic) if c != 0}
    terms: dict[tuple[int, int], Fraction] = {}
    for i, vec in enumerate(p):  # coefficient of x-power i, vec over z
        for j in range(i + 1):
            binom = comb(i, j) * (-s) ** j
            if binom == 0:
                continue
            # contributes to x^(i-j) z^(j) times vec(z)
            for zpow, c in enumerate(vec):
                if c:
                    key = (i - j, zpow + j)
                    terms[key] = terms.get(key, _ZERO) + c * binom
    return resultant_x(BiPoly(m_terms), BiPoly(terms))


# ---------------------------------------------------------------------------
# Field joins
# ---------------------------------------------------------------------------


@dataclass
class Embedding:
    """Maps elements of an old field into a new one (theta_old as a vector)."""

    old: NumberField
    new: NumberField
    gen_image: Vec  # image of old.theta in new

    def __call__(self, a: Vec) -> Vec:
        out = self.new.zero()
        power = self.new.one()
        for c in a:
            if c:
                out = self.new.add(out, self.new.scale(power, c))
            power = self.new.mul(power, self.gen_image)
        return out


def identity_embedding(f: NumberField) -> Embedding:
    return Embedding(f, f, f.gen())


def join_field(f: NumberField, alg: AlgebraicNumber) -> tuple[NumberField, Embedding, Vec]:
    """Smallest field containing f and alg: returns (new_field, embedding of
    the old field, image of alg)."""
    direct = f.embed(alg)
    if direct is not None:
        return f, identity_embedding(f), direct
    if f.deg == 1:
        nf = NumberField(alg)
        emb = Embedding(f, nf, nf.from_rational(f.theta.as_rational() if f.theta.is_rational() else 0))
        return nf, emb, nf.gen()
    if f.deg * alg.degree > ALGEBRAIC_DEGREE_CAP:
        raise DegreeCapExceeded("field join degree cap")
    for s in (1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 7, -7, 11, -11):
        cand = _join_resultant(f, alg, s)
        if cand.gcd(cand.derivative()).degree != 0:
            continue  # not squarefree: s does not separate

        def approx(eps, s=s):
            return alg.enclosure(eps) + f.theta.enclosure(eps).scale(s)

        theta_new = _select(cand, approx(Fraction(1, 2 ** 10)), approx)
        nf = NumberField(theta_new)
        # express old theta in the new field: unique common root of
        # M_old(z) and p_alg(theta' - s z)
        m_old = kp_from_unipoly(nf, UniPoly.make(f.monic, "z"))
        lin = kp_compose_linear(
            nf,
            kp_from_unipoly(nf, alg.minpoly.monic()),
            nf.gen(),
            nf.from_rational(-s),
        )
        g = kp_gcd(nf, m_old, lin)
        if kp_degree(g) != 1:
            continue
        old_gen = kp_root_of_linear(nf, g)
        alg_image = nf.sub(nf.gen(), nf.scale(old_gen, s))
        emb = Embedding(f, nf, old_gen)
        # exactness checks (cheap, catch selection mistakes immediately)
        if not nf.is_zero(kp_eval(nf, m_old, old_gen)):
            raise AssertionError("join: old generator image is not a root")
        if not nf.is_zero(
            kp_eval(nf, kp_from_unipoly(nf, alg.minpoly.monic()), alg_image)
        ):
            raise AssertionError("join: adjoined element image is not a root")
        return nf, emb, alg_image
    raise AssertionError("no separating shift found for field join")


def _join_resultant(f: NumberField, alg: AlgebraicNumber, s: int) -> UniPoly:
    """Res_z(M(z), p_alg(x - s*z)): vanishes at alg + s*theta combinations."""
    m_terms = {(0, i): c for i, c in enumerate(f.monic) if c != 0}
    p = alg.minpoly.monic()
    terms: dict[tuple[int, int], Fraction] = {}
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        for j in range(k + 1):
            key = (k - j, j)
            terms[key] = terms.get(key, _ZERO) + c * comb(k, j) * (-s) ** j
    return resultant_x(BiPoly(m_terms), BiPoly(terms))


def conj_close(f: NumberField) -> tuple[NumberField, Embedding]:
    """Extend (if needed) so the field is closed under complex conjugation."""
    if f.conj_closed():
        return f, identity_embedding(f)
    nf, emb, _ = join_field(f, f.theta.conjugate())
    if not nf.conj_closed():
        raise AssertionError("conjugation closure failed")
    return nf, emb


def build_field(gens: list[AlgebraicNumber], close_conj: bool = True) -> tuple[NumberField, list[Vec]]:
    """Smallest field containing all generators (and their conjugates when
    requested); returns the field and the embedded generators."""
    field = NumberField.rationals()
    images: list[Vec] = []
    work = list(gens)
    if close_conj:
        work = []
        for g in gens:
            work.append(g)
            if not g.is_real():
                work.append(g.conjugate())
    n_orig = len(gens)
    positions: list[int] = []
    k = 0
    for i, g in enumerate(gens):
        positions.append(k)
        k += 1
        if close_conj and not g.is_real():
            k += 1
    all_images: list[Vec] = []
    for g in work:
        field, emb, img = join_field(field, g)
        all_images = [emb(v) for v in all_images]
        all_images.append(img)
    images = [all_images[positions[i]] for i in range(n_orig)]
    return field, images

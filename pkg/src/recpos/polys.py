"""Exact rational polynomial algebra: univariate, bivariate, rational functions.

This is the substrate for everything else.  All coefficients are `Fraction`s;
no operation ever introduces a float.

Conventions
-----------
* `UniPoly` stores coefficients ascending by degree; the zero polynomial has
  an empty coefficient tuple.
* `BiPoly` is a sparse dict ``{(deg_y, deg_x): Fraction}`` with no stored
  zeros.  The inner variable is called Y (usually 1/n) and the outer X.
* Composed products (pairwise and m-subset root products) are computed by
  power sums and Newton identities at integer sample points and recombined by
  interpolation under a proven Y-degree bound, then verified at extra points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd as int_gcd

from sympy import QQ
from sympy.polys.sqfreetools import dmp_sqf_list
from sympy.polys.euclidtools import dmp_resultant, dup_gcd
from sympy.polys.densebasic import dmp_from_dict

from .config import DEFAULT_DEGREE_CAP, DegreeCapExceeded
from .intervals import Box, eval_poly_box

Rat = Fraction
_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial over Q, ascending coefficients."""

    coeffs: tuple[Fraction, ...]
    var: str = "n"

    @staticmethod
    def make(coeffs, var: str = "n") -> "UniPoly":
        return UniPoly(_trim(coeffs), var)

    @staticmethod
    def zero(var: str = "n") -> "UniPoly":
        return UniPoly((), var)

    @staticmethod
    def const(c, var: str = "n") -> "UniPoly":
        return UniPoly.make([c], var)

    @staticmethod
    def x(var: str = "n") -> "UniPoly":
        return UniPoly.make([0, 1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(_trim(out), self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs), self.var)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly((), self.var)
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(_trim(out), self.var)

    def scale(self, c) -> "UniPoly":
        c = Fraction(c)
        if c == 0:
            return UniPoly((), self.var)
        return UniPoly(tuple(x * c for x in self.coeffs), self.var)

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by var**k."""
        if self.is_zero():
            return self
        return UniPoly((_ZERO,) * k + self.coeffs, self.var)

    def __pow__(self, n: int) -> "UniPoly":
        result = UniPoly.const(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [_ZERO] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d, lc = other.degree, other.lc
        while len(r) - 1 >= d and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lc
            q[k] = f
            for i, c in enumerate(other.coeffs):
                r[k + i] -= f * c
        return UniPoly(_trim(q), self.var), UniPoly(_trim(r), self.var)

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "UniPoly":
        return UniPoly(_trim(c * k for k, c in enumerate(self.coeffs) if k), self.var)

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_box(self, x: Box) -> Box:
        return eval_poly_box([Box.point(c) for c in self.coeffs], x)

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly.zero(other.var)
        for c in reversed(self.coeffs):
            acc = acc * other + UniPoly.const(c, other.var)
        return acc

    def reversed_at(self, k: int) -> "UniPoly":
        """Y**k * p(1/Y) for k >= degree; result in the same variable name."""
        if k < self.degree:
            raise ValueError("reversal order below degree")
        out = [_ZERO] * (k + 1)
        for i, c in enumerate(self.coeffs):
            out[k - i] = c
        return UniPoly(_trim(out), self.var)

    def integer_primitive(self) -> tuple[Fraction, "UniPoly"]:
        """Write self = content * prim with prim having coprime integer
        coefficients and positive leading coefficient."""
        if self.is_zero():
            return _ONE, self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // int_gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
        g = 0
        for v in ints:
            g = int_gcd(g, abs(v))
        if ints[-1] < 0:
            g = -g
        content = Fraction(g, den)
        return content, UniPoly(tuple(Fraction(v // g) for v in ints), self.var)

    def rational_roots(self) -> list[Fraction]:
        """All rational roots, via the rational root theorem on the primitive
        integer form (exact, exhaustive)."""
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        _, p = self.integer_primitive()
        cs = [c.numerator for c in p.coeffs]
        shift = 0
        while cs and cs[0] == 0:
            cs.pop(0)
            shift += 1
        roots = [] if shift == 0 else [Fraction(0)]
        if len(cs) <= 1:
            return roots
        a0, ad = abs(cs[0]), abs(cs[-1])
        for p_div in _divisors(a0):
            for q_div in _divisors(ad):
                for cand in (Fraction(p_div, q_div), Fraction(-p_div, q_div)):
                    if cand not in roots and self.eval(cand) == 0:
                        roots.append(cand)
        return sorted(roots)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*{self.var}")
            else:
                parts.append(f"{c}*{self.var}^{k}")
        return " + ".join(parts)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# Bivariate polynomials Q[Y, X]
# ---------------------------------------------------------------------------


class BiPoly:
    """Sparse bivariate polynomial; keys (deg_y, deg_x), no zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction]):
        self.terms = {k: Fraction(v) for k, v in terms.items() if v != 0}

    @staticmethod
    def from_x_coeffs(ycoeffs: list[UniPoly]) -> "BiPoly":
        """Build from the list of Y-polynomials ordered by ascending X power."""
        terms = {}
        for i, p in enumerate(ycoeffs):
            for j, c in enumerate(p.coeffs):
                if c != 0:
                    terms[(j, i)] = c
        return BiPoly(terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_x(self) -> int:
        return max((i for (_, i) in self.terms), default=-1)

    @property
    def deg_y(self) -> int:
        return max((j for (j, _) in self.terms), default=-1)

    def x_coeff(self, i: int) -> UniPoly:
        """Coefficient of X**i as a polynomial in Y."""
        out = [_ZERO] * (self.deg_y + 1)
        for (j, ii), c in self.terms.items():
            if ii == i:
                out[j] = c
        return UniPoly(_trim(out), "Y")

    def x_coeffs(self) -> list[UniPoly]:
        return [self.x_coeff(i) for i in range(self.deg_x + 1)]

    def eval_y(self, y) -> UniPoly:
        """Specialize Y, returning a polynomial in X."""
        y = Fraction(y)
        out = [_ZERO] * (self.deg_x + 1)
        for (j, i), c in self.terms.items():
            out[i] += c * y**j
        return UniPoly(_trim(out), "X")

    def eval_x_poly(self, i_poly: UniPoly) -> UniPoly:
        """Substitute X := given Y-polynomial, returning a Y-polynomial."""
        acc = UniPoly.zero("Y")
        for i in range(self.deg_x, -1, -1):
            acc = acc * i_poly + self.x_coeff(i)
        return acc

    def eval_point(self, y, x) -> Fraction:
        return self.eval_y(y).eval(x)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, _ZERO) + v
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        out: dict[tuple[int, int], Fraction] = {}
        for (j1, i1), a in self.terms.items():
            for (j2, i2), b in other.terms.items():
                k = (j1 + j2, i1 + i2)
                out[k] = out.get(k, _ZERO) + a * b
        return BiPoly(out)

    def scale(self, c) -> "BiPoly":
        c = Fraction(c)
        return BiPoly({k: v * c for k, v in self.terms.items()})

    def derivative_x(self) -> "BiPoly":
        return BiPoly({(j, i - 1): c * i for (j, i), c in self.terms.items() if i > 0})

    def primitive(self) -> "BiPoly":
        """Integer-primitive form with positive leading term (canonical)."""
        if self.is_zero():
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // int_gcd(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = int_gcd(g, abs(c.numerator * (den // c.denominator)))
        lead = self.terms[max(self.terms, key=lambda k: (k[1], k[0]))]
        sign = -1 if lead < 0 else 1
        factor = Fraction(den, g * sign)
        return BiPoly({k: v * factor for k, v in self.terms.items()})

    def y_content(self) -> UniPoly:
        """gcd over Q[Y] of the X-coefficients (monic-normalized)."""
        g = UniPoly.zero("Y")
        for p in self.x_coeffs():
            if not p.is_zero():
                g = p if g.is_zero() else g.gcd(p)
        return g

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (j, i) in sorted(self.terms, key=lambda k: (k[1], k[0])):
            c = self.terms[(j, i)]
            mon = []
            if j:
                mon.append(f"Y^{j}" if j > 1 else "Y")
            if i:
                mon.append(f"X^{i}" if i > 1 else "X")
            parts.append(f"{c}" + ("*" + "*".join(mon) if mon else ""))
        return " + ".join(parts)


# -- sympy bridges ----------------------------------------------------------


def _to_qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def _from_qq(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def unipoly_to_dup(p: UniPoly) -> list:
    """sympy dense univariate: descending coefficients over QQ."""
    return [_to_qq(c) for c in reversed(p.coeffs)] or []


def unipoly_from_dup(dup, var: str = "n") -> UniPoly:
    return UniPoly(_trim(reversed([_from_qq(c) for c in dup])), var)


def bipoly_to_dmp(p: BiPoly):
    """sympy dmp with X as the main (outer) variable and Y inner."""
    d = {(i, j): _to_qq(c) for (j, i), c in p.terms.items()}
    return dmp_from_dict(d, 1, QQ)


def bipoly_from_dmp(f) -> BiPoly:
    terms = {}
    degx = len(f) - 1
    for k, inner in enumerate(f):
        i = degx - k
        if inner == []:
            continue
        degy = len(inner) - 1
        for l, c in enumerate(inner):
            if c:
                terms[(degy - l, i)] = _from_qq(c)
    return BiPoly(terms)


def resultant_x(p: BiPoly, q: BiPoly) -> UniPoly:
    """Resultant with respect to X; result is a polynomial in Y."""
    r = dmp_resultant(bipoly_to_dmp(p), bipoly_to_dmp(q), 1, QQ)
    return unipoly_from_dup(r, "Y")


def discriminant_x(p: BiPoly) -> UniPoly:
    return resultant_x(p, p.derivative_x())


# ---------------------------------------------------------------------------
# Square-free decomposition in X over Q[Y]
# ---------------------------------------------------------------------------


def squarefree_decomposition(p: BiPoly) -> list[tuple[BiPoly, int]]:
    """Yun decomposition in the main variable X.

    Returns ``[(content_in_Y, 0)?, (P1, 1), (P2, 2), ...]`` such that the
    product of content times prod P_k**k reconstructs the input up to the
    canonical primitive normalization.  The multiplicity-0 content entry is
    present only when the Y-content is non-constant.
    """
    if p.is_zero():
        raise ValueError("square-free decomposition of zero polynomial")
    p = p.primitive()
    content = p.y_content()
    out: list[tuple[BiPoly, int]] = []
    work = p
    if content.degree > 0:
        cont_bi = BiPoly.from_x_coeffs([content]).primitive()
        out.append((cont_bi, 0))
        # exact division of every X-coefficient by the content
        new_coeffs = []
        for q in p.x_coeffs():
            quo, rem = q.divmod(content)
            if not rem.is_zero():
                raise AssertionError("content division left a remainder")
            new_coeffs.append(quo)
        work = BiPoly.from_x_coeffs(new_coeffs).primitive()
    coeff, factors = dmp_sqf_list(bipoly_to_dmp(work), 1, QQ)
    for f, mult in factors:
        out.append((bipoly_from_dmp(f).primitive(), mult))
    # reconstruction check: decomposition must be exact
    acc = BiPoly({(0, 0): _ONE})
    for f, mult in out:
        acc = acc * _bipow(f, max(mult, 1))
    if acc.primitive() != p.primitive():
        raise AssertionError("square-free decomposition failed to reconstruct")
    return out


def _bipow(p: BiPoly, n: int) -> BiPoly:
    acc = BiPoly({(0, 0): _ONE})
    base = p
    while n:
        if n & 1:
            acc = acc * base
        base = base * base
        n >>= 1
    return acc


def squarefree_part_x(p: BiPoly) -> BiPoly:
    """Product of the distinct square-free factors (content dropped)."""
    acc = BiPoly({(0, 0): _ONE})
    for f, mult in squarefree_decomposition(p):
        if mult >= 1:
            acc = acc * f
    return acc.primitive()


# ---------------------------------------------------------------------------
# Composed products via power sums + Newton identities
# ---------------------------------------------------------------------------


def _power_sums(monic_asc: list[Fraction], count: int) -> list[Fraction]:
    """Power sums p_1..p_count of the roots of a monic polynomial given by
    ascending coefficients (Newton's identities)."""
    d = len(monic_asc) - 1
    # e_i = (-1)^i * coefficient of x^(d-i)
    e = [_ONE] + [(-1) ** i * monic_asc[d - i] for i in range(1, d + 1)]
    p: list[Fraction] = []
    for k in range(1, count + 1):
        # p_k = sum_{i<k} (-1)^(i-1) e_i p_{k-i}  (+ (-1)^(k-1) k e_k if k <= d)
        acc = _ZERO
        for i in range(1, min(k - 1, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * p[k - i - 1]
        if k <= d:
            acc += (-1) ** (k - 1) * e[k] * k
        p.append(acc)
    return p


def _monic_from_power_sums(s: list[Fraction]) -> list[Fraction]:
    """Ascending coefficients of the monic degree-len(s) polynomial whose
    root power sums are s[0..]."""
    D = len(s)
    e = [_ONE] + [_ZERO] * D
    for j in range(1, D + 1):
        acc = _ZERO
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[j - i] * s[i - 1]
        e[j] = acc / j
    coeffs = [(-1) ** j * e[j] for j in range(D, -1, -1)]  # ascending x^0..x^D
    return coeffs


def _elem_sym_from_power_sums(s: list[Fraction], m: int) -> Fraction:
    """e_m given power sums s[0..m-1] = p_1..p_m (Newton)."""
    e = [_ONE] + [_ZERO] * m
    for j in range(1, m + 1):
        acc = _ZERO
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[j - i] * s[i - 1]
        e[j] = acc / j
    return e[m]


class _Interpolator:
    """Shared-node exact Lagrange interpolation: the basis polynomials are
    precomputed once, so each value vector costs O(P^2)."""

    def __init__(self, ys: list[Fraction]):
        self.ys = ys
        w = UniPoly.const(1, "Y")
        for y in ys:
            w = w * UniPoly.make([-y, 1], "Y")
        self.basis: list[UniPoly] = []
        for y in ys:
            num = _synth_div(w, y)
            den = num.eval(y)
            self.basis.append(num.scale(1 / den))

    def interp(self, vals: list[Fraction]) -> UniPoly:
        out = [_ZERO] * len(self.ys)
        for v, b in zip(vals, self.basis):
            if v == 0:
                continue
            for i, c in enumerate(b.coeffs):
                out[i] += v * c
        return UniPoly(_trim(out), "Y")


def _synth_div(p: UniPoly, root: Fraction) -> UniPoly:
    """Quotient of p by (Y - root), synthetic division (remainder dropped)."""
    d = p.degree
    q = [_ZERO] * d
    q[d - 1] = p.coeffs[d]
    for i in range(d - 1, 0, -1):
        q[i - 1] = p.coeffs[i] + root * q[i]
    return UniPoly(_trim(q), "Y")


def _composed_points(p: BiPoly, need: int, point_fn) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Evaluate `point_fn` (returning a coefficient vector) at `need` integer
    sample points where the leading X-coefficient does not vanish."""
    lead = p.x_coeff(p.deg_x)
    ys: list[Fraction] = []
    vals: list[list[Fraction]] = []
    t = 0
    while len(ys) < need:
        for cand in (Fraction(t), Fraction(-t)) if t else (Fraction(0),):
            if len(ys) >= need:
                break
            if lead.eval(cand) == 0:
                continue
            ys.append(cand)
            vals.append(point_fn(cand))
        t += 1
    return ys, vals


def composed_product_pairs(p: BiPoly, degree_cap: int = DEFAULT_DEGREE_CAP) -> BiPoly:
    """Polynomial whose X-roots are all ordered-pair products of the X-roots
    of ``p`` (d^2 of them, with multiplicity).

    Exact; power sums of the pair products are the squares of the original
    power sums.  The cleared form lc^(2d) * prod(X - x_i x_j) has Y-degree at
    most 2*d*deg_y(p) (a Sylvester-matrix bound), which fixes the number of
    interpolation points.
    """
    d = p.deg_x
    if d < 1:
        raise ValueError("composed product needs positive X-degree")
    D = d * d
    if D > degree_cap:
        raise DegreeCapExceeded(f"degree cap exceeded: {D} > {degree_cap}")
    t = p.deg_y
    npoints = 2 * d * t + 1

    def point(y: Fraction) -> list[Fraction]:
        uni = p.eval_y(y)
        lc = uni.lc
        monic = [c / lc for c in uni.coeffs]
        ps = _power_sums(monic, D)
        sq = [v * v for v in ps]
        cs = _monic_from_power_sums(sq)
        scale = lc ** (2 * d)
        return [c * scale for c in cs]

    ys, vals = _composed_points(p, npoints, point)
    interp = _Interpolator(ys)
    coeff_polys = [interp.interp([v[i] for v in vals]) for i in range(D + 1)]
    result = BiPoly.from_x_coeffs(coeff_polys).primitive()
    _verify_composed(p, result, point, 2)
    return result


def composed_product_subsets(
    p: BiPoly, m: int, degree_cap: int = DEFAULT_DEGREE_CAP
) -> BiPoly:
    """Polynomial whose X-roots are the products over all m-element subsets
    of the X-roots of ``p`` (the P_m polynomial of the modulus-counting
    iteration)."""
    d = p.deg_x
    if not 1 <= m <= d:
        raise ValueError(f"subset size {m} out of range 1..{d}")
    B = comb(d, m)
    if B > degree_cap:
        raise DegreeCapExceeded(f"degree cap exceeded: {B} > {degree_cap}")
    t = p.deg_y
    # coefficient of X^(B-j) in the cleared form lc^(mB) * prod(...) has
    # Y-degree <= m*B*t (minor-expansion bound on the exterior power)
    npoints = m * B * t + 1

    def point(y: Fraction) -> list[Fraction]:
        uni = p.eval_y(y)
        lc = uni.lc
        monic = [c / lc for c in uni.coeffs]
        ps = _power_sums(monic, m * B)
        # power sums of the subset products: e_m evaluated at k-th powers
        subset_ps = []
        for k in range(1, B + 1):
            sub = [ps[t2 * k - 1] for t2 in range(1, m + 1)]
            subset_ps.append(_elem_sym_from_power_sums(sub, m))
        cs = _monic_from_power_sums(subset_ps)
        scale = lc ** (m * B)
        return [c * scale for c in cs]

    ys, vals = _composed_points(p, npoints, point)
    interp = _Interpolator(ys)
    coeff_polys = [interp.interp([v[i] for v in vals]) for i in range(B + 1)]
    result = BiPoly.from_x_coeffs(coeff_polys).primitive()
    _verify_composed(p, result, point, 2)
    return result


def _verify_composed(src: BiPoly, result: BiPoly, point_fn, extra: int) -> None:
    """Check the interpolated result against fresh sample points (the point
    values are proportional to the specialized result by a Y-only factor)."""
    lead = src.x_coeff(src.deg_x)
    checked = 0
    t = 1
    while checked < extra:
        y = Fraction(t * 7919 + 1, 2)  # off-grid rational points
        t += 1
        if lead.eval(y) == 0:
            continue
        expected = point_fn(y)
        got = result.eval_y(y)
        if got.degree != len(expected) - 1:
            raise AssertionError("composed product verification: degree mismatch")
        ratio = expected[-1] / got.lc
        for i, c in enumerate(got.coeffs):
            if c * ratio != expected[i]:
                raise AssertionError("composed product verification failed")
        checked += 1


# ---------------------------------------------------------------------------
# Rational functions of n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient of polynomials in n; denominator monic and nonzero."""

    num: UniPoly
    den: UniPoly

    @staticmethod
    def make(num: UniPoly, den: UniPoly) -> "RationalFunction":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if not g.is_zero() and g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lc = den.lc
        return RationalFunction(num.scale(1 / lc), den.scale(1 / lc))

    @staticmethod
    def from_poly(p: UniPoly) -> "RationalFunction":
        return RationalFunction(p, UniPoly.const(1, p.var))

    @staticmethod
    def const(c, var: str = "n") -> "RationalFunction":
        return RationalFunction(UniPoly.const(c, var), UniPoly.const(1, var))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        return RationalFunction.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        return RationalFunction.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction.make(self.num * other.den, self.den * other.num)

    def eval(self, x) -> Fraction:
        d = self.den.eval(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return self.num.eval(x) / d

    def limit_at_infinity(self) -> Fraction:
        """Entrywise Poincare limit; raises if the numerator degree exceeds
        the denominator degree."""
        if self.num.is_zero():
            return _ZERO
        if self.num.degree > self.den.degree:
            raise ValueError("not Poincare type: numerator degree too large")
        if self.num.degree < self.den.degree:
            return _ZERO
        return self.num.lc / self.den.lc


# ---------------------------------------------------------------------------
# Reversed characteristic polynomial
# ---------------------------------------------------------------------------


def char_poly_coeffs(a: list[list[RationalFunction]]) -> list[RationalFunction]:
    """Coefficients c_0..c_d of det(X*I - A) by Faddeev-LeVerrier (exact,
    division only by integers)."""
    d = len(a)
    for row in a:
        if len(row) != d:
            raise ValueError("non-square input")
    one = RationalFunction.const(1)
    zero = RationalFunction.const(0)
    coeffs = [zero] * (d + 1)
    coeffs[d] = one
    b = [[one if i == j else zero for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        m = _mat_mul(a, b)
        tr = m[0][0]
        for i in range(1, d):
            tr = tr + m[i][i]
        ck = RationalFunction.const(Fraction(-1, k)) * tr
        coeffs[d - k] = ck
        b = [[m[i][j] + (ck if i == j else zero) for j in range(d)] for i in range(d)]
    return coeffs


def _mat_mul(a, b):
    d = len(a)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc = a[i][0] * b[0][j]
            for k in range(1, d):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def reversed_char_poly(a: list[list[RationalFunction]]) -> BiPoly:
    """Numerator Q(Y, X) of char-poly(A(1/Y), X): the polynomial whose
    Puiseux branches at Y=0 are the eigenvalue branches of A(n), n = 1/Y.

    Q(0, X) is proportional to the characteristic polynomial of lim A(n).
    """
    coeffs = char_poly_coeffs(a)
    # common denominator V(n), then w_i = c_i * V in Q[n]
    v = UniPoly.const(1)
    for c in coeffs:
        g = v.gcd(c.den)
        extra = c.den.divmod(g)[0] if not g.is_zero() else c.den
        v = v * extra
    ws = []
    for c in coeffs:
        q, r = v.divmod(c.den)
        if not r.is_zero():
            raise AssertionError("lcm denominator not divisible")
        ws.append(c.num * q)
    big = v.degree
    for w in ws:
        if w.degree > big:
            raise ValueError("not Poincare type: unbounded matrix entry")
    ycoeffs = [
        UniPoly(w.reversed_at(big).coeffs, "Y") if not w.is_zero() else UniPoly.zero("Y")
        for w in ws
    ]
    return BiPoly.from_x_coeffs(ycoeffs).primitive()


def sympy_dup_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    return unipoly_from_dup(dup_gcd(unipoly_to_dup(p), unipoly_to_dup(q), QQ), p.var)

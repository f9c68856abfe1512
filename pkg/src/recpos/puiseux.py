"""Newton-polygon Puiseux expansion of the X-roots of Q(Y, X) at Y = 0.

Each branch is a truncated fractional-power series with exact algebraic
coefficients living in a per-branch number field.  Field extensions happen
only where limit roots cluster; once a branch separates, lifting is plain
series iteration inside a fixed field.

The expansion is deterministic (factors, roots and polygon sides are visited
in a canonical order), which makes branch ids stable across re-expansion at
higher order: `extend_branch` relies on this and asserts prefix stability.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, gcd, isqrt

from .algebraic import AlgebraicNumber
from .config import OrderCapExceeded
from .intervals import Box, Interval
from .numfield import (
    NumberField,
    Vec,
    factor_over,
    join_field,
    identity_embedding,
    kp_add,
    kp_degree,
    kp_eval,
    kp_from_unipoly,
    kp_is_zero,
    kp_mul,
    kp_root_of_linear,
    kp_scale,
    kp_trim,
    kp_valuation,
)
from .polys import BiPoly, UniPoly, discriminant_x

_ZERO = Fraction(0)


class NotSquareFreeError(ValueError):
    pass


class BranchAtInfinityError(ValueError):
    pass


@dataclass
class PuiseuxBranch:
    """Truncated expansion sum( c * Y**e ) of one root branch at Y = 0."""

    ramification: int
    terms: list[tuple[Fraction, Vec]]  # (exponent, coefficient), exponents increasing
    truncation_order: Fraction
    branch_id: str
    field: NumberField
    exact: bool = False  # all omitted terms are exactly zero
    source_factor: "BiPoly | None" = None
    all_real: bool | None = None  # tracked during expansion; None = unknown
    _algs: list | None = None

    def limit(self) -> Vec:
        """Value at Y = 0 (constant term, possibly zero)."""
        if self.terms and self.terms[0][0] == 0:
            return self.terms[0][1]
        return self.field.zero()

    def term_algebraic(self, k: int) -> AlgebraicNumber:
        return self.field.to_algebraic(self.terms[k][1])

    def coefficients_algebraic(self) -> list[tuple[Fraction, AlgebraicNumber]]:
        if self._algs is None:
            self._algs = [(e, self.field.to_algebraic(c)) for e, c in self.terms]
        return self._algs

    def is_real(self) -> bool:
        if self.all_real is not None:
            return self.all_real
        res = all(a.is_real() for _, a in self.coefficients_algebraic())
        self.all_real = res
        return res

    def leading_sign(self) -> int:
        """Sign of the branch value as Y -> 0+ (for real branches)."""
        if not self.terms:
            return 0
        if self.is_real():
            # the value is real, so the field-level sign query terminates
            return self.field.sign_real(self.terms[0][1])
        alg = self.field.to_algebraic(self.terms[0][1])
        return alg.sign()

    def __repr__(self):
        bits = []
        for e, c in self.terms[:4]:
            alg = self.field.to_algebraic(c)
            bits.append(f"({alg!r})*Y^{e}")
        more = " + ..." if len(self.terms) > 4 else ""
        return f"<branch {self.branch_id}: {' + '.join(bits) or '0'}{more}>"


@dataclass
class BranchSet:
    branches: list[PuiseuxBranch]
    source: BiPoly
    order: Fraction

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def conjugate_pairs(self) -> dict[int, int]:
        """Map each branch index to the index of its complex conjugate
        (fixed points are the real branches)."""
        algs = [b.coefficients_algebraic() for b in self.branches]
        pairing: dict[int, int] = {}
        for i, bi in enumerate(algs):
            if i in pairing:
                continue
            if all(a.is_real() for _, a in bi):
                pairing[i] = i
                continue
            for j in range(len(algs)):
                if j == i or j in pairing.values():
                    continue
                bj = algs[j]
                if len(bi) != len(bj):
                    continue
                if all(
                    ei == ej and ai.conjugate() == aj
                    for (ei, ai), (ej, aj) in zip(bi, bj)
                ):
                    pairing[i] = j
                    pairing[j] = i
                    break
            else:
                raise AssertionError("branch set not closed under conjugation")
        return pairing


# ---------------------------------------------------------------------------
# Expansion machinery
# ---------------------------------------------------------------------------


@dataclass
class _State:
    field: NumberField
    poly: list[list[Vec]]  # coefficient of X^i is a KPoly in T
    ram: int
    offset: Fraction
    acc: list[tuple[Fraction, Vec]]
    path: str
    truncated: bool
    t_cap: int
    real_path: bool = True  # all accumulated coefficients provably real


def _kp_truncate(f: NumberField, p: list[Vec], cap: int) -> tuple[list[Vec], bool]:
    if len(p) - 1 <= cap:
        return p, False
    dropped = any(not f.is_zero(c) for c in p[cap + 1 :])
    return kp_trim(f, p[: cap + 1]), dropped


def _stretch(f: NumberField, p: list[Vec], q: int) -> list[Vec]:
    """p(T) -> p(T'**q)."""
    if q == 1 or not p:
        return list(p)
    out = [f.zero()] * ((len(p) - 1) * q + 1)
    for i, c in enumerate(p):
        out[i * q] = c
    return out


def _roots_with_fields(
    st: _State, poly: list[Vec]
) -> list[tuple[NumberField, "object", Vec, int, int, bool]]:
    """All roots of a K[x] polynomial, each in a field extending K.

    Returns tuples (new_field, embedding_of_old, root_vec, multiplicity,
    canonical_index, root_is_real).  Realness is structural: a linear root
    over a field with an all-real path is real, and located roots are real
    exactly when their isolating box sits on the real axis.  Deterministic
    order.
    """
    f = st.field
    out = []
    idx = 0
    for fac, mult in factor_over(f, poly):
        deg = kp_degree(fac)
        if deg == 0:
            continue
        if deg == 1:
            root = kp_root_of_linear(f, fac)
            out.append((f, identity_embedding(f), root, mult, idx, st.real_path))
            idx += 1
            continue
        for alg in _roots_of_k_factor(f, fac):
            nf, emb, img = join_field(f, alg)
            is_real = alg.is_rational() or (
                alg.box.im.lo == alg.box.im.hi == 0
            )
            out.append((nf, emb, img, mult, idx, is_real and st.real_path))
            idx += 1
    return out


def _roots_of_k_factor(f: NumberField, fac: list[Vec]) -> list[AlgebraicNumber]:
    """The deg(fac) roots of an irreducible K[x] factor as standalone
    algebraic numbers (located by norm factorization + certified rejection)."""
    from .numfield import _shifted_norm  # norm with shift 0 = plain norm
    from .algebraic import factor_rational_poly, isolate_roots, _refine_box

    norm = _shifted_norm(f, fac, 0)
    cands: list[AlgebraicNumber] = []
    for h, _ in factor_rational_poly(norm):
        for box in isolate_roots(h):
            cands.append(AlgebraicNumber(h, box) if h.degree > 1 else AlgebraicNumber.from_rational(-h.coeffs[0] / h.coeffs[1]))
    expected = kp_degree(fac)
    width = Fraction(1, 2**12)
    while True:
        # interval-evaluate fac at each candidate; drop certified non-roots
        kept = []
        for a in cands:
            xb = a.enclosure(width)
            acc = Box.point(0)
            for c in reversed(fac):
                acc = acc * xb + f.enclosure(c, width)
            if acc.contains_zero():
                kept.append(a)
        if len(kept) == expected:
            kept.sort(key=_alg_sort_key)
            return kept
        if len(kept) < expected:
            raise AssertionError("lost roots during rejection (width too small?)")
        cands = kept
        width /= 2**6


def _alg_sort_key(a: AlgebraicNumber):
    b = a.enclosure(Fraction(1, 2**20))
    return (b.re.lo, b.im.lo)


def _shift_poly(
    f: NumberField, poly: list[list[Vec]], r: Vec
) -> list[list[Vec]]:
    """F(T, r + X) from F(T, X): new coefficient of X^i is
    sum_j C(j, i) r^(j-i) F_j."""
    d = len(poly) - 1
    powers = [f.one()]
    for _ in range(d):
        powers.append(f.mul(powers[-1], r))
    out = []
    for i in range(d + 1):
        acc: list[Vec] = []
        for j in range(i, d + 1):
            coeff = f.scale(powers[j - i], comb(j, i))
            acc = kp_add(f, acc, kp_scale(f, poly[j], coeff))
        out.append(acc)
    return out


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lower convex hull, input sorted by x."""
    hull: list[tuple[int, int]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it is above the segment hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _expand_tails(st: _State, mu: int, order_target: Fraction) -> list[PuiseuxBranch]:
    """Branches X(T) with X(0) = 0 of the current equation (exactly mu of
    them, counted without multiplicity since the global input is
    square-free)."""
    f = st.field
    if mu == 0:
        return []
    out: list[PuiseuxBranch] = []
    poly = st.poly

    # exact polynomial root X = 0
    if kp_is_zero(poly[0]):
        out.append(
            PuiseuxBranch(
                ramification=st.ram,
                terms=list(st.acc),
                truncation_order=max(order_target, st.acc[-1][0] if st.acc else _ZERO),
                branch_id=st.path + "z",
                field=f,
                exact=True,
                all_real=st.real_path,
            )
        )
        rest = replace(st, poly=poly[1:], path=st.path + "d")
        out.extend(_expand_tails(rest, mu - 1, order_target))
        return out

    if mu == 1:
        out.append(_hensel_lift(st, order_target))
        return out

    # Newton polygon over the cluster
    pts = []
    for i in range(0, mu + 1):
        v = kp_valuation(f, poly[i]) if i < len(poly) else None
        if v is None:
            if i < len(poly) and st.truncated:
                raise OrderCapExceeded("valuation hidden by truncation")
            continue
        pts.append((i, v))
    if not pts or pts[0][0] != 0:
        raise AssertionError("polygon lost its first vertex")
    if pts[-1][0] != mu or pts[-1][1] != 0:
        # multiplicity accounting must give valuation 0 at i = mu
        if st.truncated:
            raise OrderCapExceeded("polygon endpoint hidden by truncation")
        raise AssertionError("cluster multiplicity mismatch")
    hull = _lower_hull(pts)
    side_idx = 0
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        if v0 <= v1:
            continue  # only strictly descending sides carry vanishing branches
        rise, run = v0 - v1, i1 - i0
        g = gcd(rise, run)
        p_num, q_den = rise // g, run // g
        # characteristic polynomial of the side: branches behave like
        # c * T^(p/q) with sum_j a_j c^(j q) = 0, so phi carries exponents j*q
        phi: list[Vec] = [f.zero()] * (i1 - i0 + 1)
        steps = (i1 - i0) // q_den
        for j in range(steps + 1):
            i = i0 + j * q_den
            vline = v0 - j * p_num
            if i < len(poly) and vline < len(poly[i]):
                phi[j * q_den] = poly[i][vline]
        phi = kp_trim(f, phi)
        for nf, emb, c, nu, ridx, c_real in _roots_with_fields(st, phi):
            if nf.is_zero(c):
                continue
            new_ram = st.ram * q_den
            delta = st.offset + Fraction(p_num, new_ram)
            new_cap = _needed_cap(order_target, delta, new_ram, len(poly) - 1)
            newpoly, truncated = _substitute(
                st.field, nf, emb, poly, q_den, p_num, c, new_cap
            )
            acc = [(e, emb(v)) for e, v in st.acc] + [(delta, c)]
            sub = _State(
                field=nf,
                poly=newpoly,
                ram=new_ram,
                offset=delta,
                acc=acc,
                path=f"{st.path}s{side_idx}r{ridx}.",
                truncated=st.truncated or truncated,
                t_cap=new_cap,
                real_path=st.real_path and c_real,
            )
            out.extend(_expand_tails(sub, nu, order_target))
        side_idx += 1
    return out


def _needed_cap(order_target: Fraction, offset: Fraction, ram: int, d: int) -> int:
    need = (order_target - offset) * ram
    base = max(int(need) + 1, 1)
    return base + 2 * d + 8


def _substitute(
    f_old: NumberField,
    f: NumberField,
    emb,
    poly: list[list[Vec]],
    q: int,
    p: int,
    c: Vec,
    cap: int,
) -> tuple[list[list[Vec]], bool]:
    """G(T'^q, T'^p (c + X)) / T'^w truncated to T'-degree cap."""
    d = len(poly) - 1
    mapped = [[emb(v) for v in kp] for kp in poly]
    powers_c = [f.one()]
    for _ in range(d):
        powers_c.append(f.mul(powers_c[-1], c))
    out: list[list[Vec]] = [[] for _ in range(d + 1)]
    truncated = False
    for i in range(d + 1):
        gi = _stretch(f, mapped[i], q)
        gi = [f.zero()] * (p * i) + gi  # times T'^(p i)
        gi, dropped = _kp_truncate(f, gi, cap + p * d + 4)
        truncated = truncated or dropped
        for j in range(i + 1):
            coeff = f.scale(powers_c[i - j], comb(i, j))
            out[j] = kp_add(f, out[j], kp_scale(f, gi, coeff))
    w = None
    for kp in out:
        v = kp_valuation(f, kp)
        if v is not None:
            w = v if w is None else min(w, v)
    if w is None:
        raise AssertionError("substitution produced the zero polynomial")
    shifted = []
    for kp in out:
        kp2 = kp[w:] if kp else kp
        kp2, dropped = _kp_truncate(f, kp2, cap)
        truncated = truncated or dropped
        shifted.append(kp2)
    return shifted, truncated


def _hensel_lift(st: _State, order_target: Fraction) -> PuiseuxBranch:
    """Series lifting of a separated (simple) vanishing branch."""
    f = st.field
    poly = st.poly
    g10 = poly[1][0] if poly[1] else f.zero()
    if f.is_zero(g10):
        raise AssertionError("Hensel phase requires a simple root")
    inv = f.inv(g10)
    need = (order_target - st.offset) * st.ram
    L = max(int(need), 0)
    if Fraction(L) < need:
        L += 1
    L = min(L, st.t_cap - 1)
    w: list[Vec] = []  # tail series, valuation >= 1
    for k in range(1, L + 1):
        residual = _eval_series(f, poly, w, k)
        coeff = residual[k] if k < len(residual) else f.zero()
        wk = f.neg(f.mul(coeff, inv))
        if not f.is_zero(wk):
            while len(w) < k:
                w.append(f.zero())
            w[k - 1] = wk
    terms = list(st.acc)
    for k, c in enumerate(w, start=1):
        if not f.is_zero(c):
            terms.append((st.offset + Fraction(k, st.ram), c))
    return PuiseuxBranch(
        ramification=st.ram,
        terms=terms,
        truncation_order=st.offset + Fraction(L, st.ram),
        branch_id=st.path + "h",
        field=f,
        exact=False,
        all_real=st.real_path,
    )


def _eval_series(f: NumberField, poly: list[list[Vec]], w: list[Vec], upto: int) -> list[Vec]:
    """G(T, w(T)) truncated to T-degree `upto` (w given without its zero
    constant term)."""
    series = [f.zero()] + list(w)
    acc: list[Vec] = []
    for kp in reversed(poly):
        acc = kp_mul(f, acc, series)
        if len(acc) > upto + 1:
            acc = kp_trim(f, acc[: upto + 1])
        acc = kp_add(f, acc, list(kp[: upto + 1]))
    return acc


def puiseux_expand(q: BiPoly, order) -> BranchSet:
    """All Puiseux branches of the X-roots of q at Y = 0, through exponent
    <= order.  Requires q square-free in X with nonvanishing leading
    X-coefficient at Y = 0."""
    order = Fraction(order)
    if q.is_zero() or q.deg_x < 1:
        raise ValueError("need positive X-degree")
    if discriminant_x(q).is_zero():
        raise NotSquareFreeError("not square-free")
    lead = q.x_coeff(q.deg_x)
    if lead.eval(0) == 0:
        raise BranchAtInfinityError("leading coefficient vanishes at Y = 0")
    f0 = NumberField.rationals()
    poly = [kp_from_unipoly(f0, q.x_coeff(i)) for i in range(q.deg_x + 1)]
    cap = _needed_cap(order, _ZERO, 1, q.deg_x)
    poly = [
        _kp_truncate(f0, kp, cap)[0] for kp in poly
    ]  # harmless: original data kept in q
    limit_poly = [kp[0] if kp else f0.zero() for kp in poly]
    branches: list[PuiseuxBranch] = []
    for nf, emb, r, mult, ridx, r_real in _roots_with_fields(
        _State(f0, poly, 1, _ZERO, [], "", False, cap), limit_poly
    ):
        shifted = _shift_poly(nf, [[emb(v) for v in kp] for kp in poly], r)
        acc = [] if nf.is_zero(r) else [(Fraction(0), r)]
        st = _State(
            field=nf,
            poly=shifted,
            ram=1,
            offset=_ZERO,
            acc=acc,
            path=f"r{ridx}.",
            truncated=False,
            t_cap=cap,
            real_path=r_real,
        )
        branches.extend(_expand_tails(st, mult, order))
    if len(branches) != q.deg_x:
        raise AssertionError(
            f"branch count {len(branches)} != degree {q.deg_x} (square-free input?)"
        )
    branches.sort(key=lambda b: b.branch_id)
    for b in branches:
        b.source_factor = q
    return BranchSet(branches, q, order)


def extend_branch(b: PuiseuxBranch, new_order, source: BiPoly | None = None) -> PuiseuxBranch:
    """Same designated branch, expanded to a higher order; existing terms are
    preserved (asserted)."""
    new_order = Fraction(new_order)
    if new_order <= b.truncation_order and not b.exact:
        raise ValueError("new order must exceed the current truncation order")
    if b.exact:
        return replace(b, truncation_order=max(b.truncation_order, new_order))
    if source is None:
        raise ValueError("extend_branch needs the source polynomial")
    again = puiseux_expand(source, new_order)
    for nb in again.branches:
        if nb.branch_id == b.branch_id:
            _assert_prefix(b, nb)
            return nb
    raise AssertionError("branch id disappeared on re-expansion")


def _assert_prefix(old: PuiseuxBranch, new: PuiseuxBranch) -> None:
    old_terms = [(e, old.field.to_algebraic(c)) for e, c in old.terms if e <= old.truncation_order]
    new_terms = [(e, new.field.to_algebraic(c)) for e, c in new.terms if e <= old.truncation_order]
    if len(old_terms) != len(new_terms):
        raise AssertionError("prefix instability: term count changed")
    for (e1, a1), (e2, a2) in zip(old_terms, new_terms):
        if e1 != e2 or a1 != a2:
            raise AssertionError("prefix instability: term changed")


# ---------------------------------------------------------------------------
# Numeric evaluation and step order
# ---------------------------------------------------------------------------


def _int_kth_root_floor(n: int, k: int) -> int:
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    if n in (0, 1):
        return n
    hi = 1 << ((n.bit_length() + k - 1) // k + 1)
    lo = 0
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid
    return lo


def _rat_power_interval(r: Fraction, e: Fraction, bits: int = 64) -> Interval:
    """Enclosure of r**e for rational r > 0 and rational e >= 0."""
    if r <= 0:
        raise ValueError("base must be positive")
    num, den = e.numerator, e.denominator
    base = r**num
    if den == 1:
        return Interval.point(base)
    scale = 1 << (den * bits)
    lo_int = _int_kth_root_floor(base.numerator * scale // base.denominator, den)
    hi_int = _int_kth_root_floor(-(-base.numerator * scale // base.denominator), den) + 1
    unit = Fraction(1, 1 << bits)
    return Interval(lo_int * unit, hi_int * unit)


def evaluate_branch(b: PuiseuxBranch, n: int, width) -> Box:
    """Enclosure of the *truncated* series at Y = 1/n (truncation error is
    not modelled: this evaluates the truncation itself)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    width = Fraction(width)
    y = Fraction(1, n)
    bits = 32
    while True:
        total = Box.point(0)
        for e, c in b.terms:
            pw = _rat_power_interval(y, e, bits)
            cb = b.field.enclosure(c, Fraction(1, 1 << bits))
            total = total + Box(cb.re * pw, cb.im * pw)
        if total.width <= width:
            return total
        bits *= 2
        if bits > 1 << 16:  # pragma: no cover
            raise AssertionError("branch evaluation failed to converge")


def branch_step_order(b: PuiseuxBranch) -> Fraction:
    """Y-order of branch(1/n) - branch(1/(n+1)): differencing raises the
    lowest nonconstant exponent e by one."""
    for e, _ in b.terms:
        if e > 0:
            return e + 1
    raise ValueError("constant branch")


def branch_residual_valuation(q: BiPoly, b: PuiseuxBranch) -> Fraction | None:
    """Exact Y-valuation of q(Y, branch(Y)); None when the residual is zero
    (exact polynomial root)."""
    f = b.field
    m = b.ramification
    # series in T = Y^(1/m)
    max_t = max((int(e * m) for e, _ in b.terms), default=0)
    s = [f.zero()] * (max_t + 1)
    for e, c in b.terms:
        s[int(e * m)] = c
    s = kp_trim(f, s)
    acc: list[Vec] = []
    for i in range(q.deg_x, -1, -1):
        acc = kp_mul(f, acc, s)
        ycoeff = q.x_coeff(i)
        lifted = _stretch(f, kp_from_unipoly(f, ycoeff), m)
        acc = kp_add(f, acc, lifted)
    v = kp_valuation(f, acc)
    if v is None:
        return None
    return Fraction(v, m)

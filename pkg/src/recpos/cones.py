"""Cone sequence K_n = K(V_{i,j}(n)): construction and certification.

The basis vectors are built from truncated eigenvalue branches and kept as
exact polynomials in Y = 1/n over one conjugation-closed number field, so
every certification below (cone positivity, the inclusion chain, membership
of state vectors) is an exact statement about the truncated basis together
with the exact recurrence operator A(n).  Truncation error can therefore
only make a certificate fail, never make a wrong one succeed.

Inclusion A(n) K_n into K_{n+1} is certified through the row-dominance
sufficient condition on M_n = T_{n+1}^{-1} A(n) T_n: with the first
coefficient normalized, the image coefficients satisfy the cone constraints
whenever  Re(m_11) - sum_{k!=1} |m_1k| >= sum_k |m_ik|  for every row i != 1.
The absolute values are eliminated by |f|^2 = f conj(f) and the resulting
polynomial inequalities are tail-certified exactly (see tails.py).
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .algebraic import AlgebraicNumber, make_algebraic
from .intervals import Box, Interval
from .numfield import (
    NumberField,
    Vec,
    build_field,
    factor_over,
    join_field,
    kp_add,
    kp_conj,
    kp_eval_rational,
    kp_is_real,
    kp_is_zero,
    kp_mul,
    kp_neg,
    kp_pow,
    kp_scale,
    kp_trim,
)
from .polys import UniPoly
from .puiseux import PuiseuxBranch, evaluate_branch, extend_branch
from .recurrence import Recurrence, state_vector
from .spectral import SpectralReport
from .tails import (
    AbsIneq,
    TailCertificate,
    TailFailure,
    abs_sum_sign,
    certify_abs_inequality,
    certify_kpoly_positive,
)

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)

KPoly = list  # list[Vec], ascending in Y


class DegenerateBasisError(ValueError):
    """det T vanishes identically: truncations of distinct branches collide."""


class RamifiedBranchesError(ValueError):
    """Fractional-exponent branches: the polynomial cone machinery does not
    apply (reported as Inconclusive upstream)."""


@dataclass
class EpsilonChoice:
    value: Fraction
    gap_certificate: TailCertificate | None = None
    certified_from: int = 1


@dataclass
class ConeBasis:
    field: NumberField
    truncation_order: Fraction
    epsilon: Fraction
    columns: list[list[KPoly]]  # columns[c][coord] over the field
    labels: list[tuple[int, int]]  # (branch index, jordan index j>=1)
    conj_col: dict[int, int]
    multiplicities: list[int]
    basis_valid_from: int
    det_certificate: TailCertificate
    report: SpectralReport
    branch_polys: list[KPoly]  # truncated branches embedded in the field
    _sample_field: tuple | None = dc_field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.columns)

    def matrix_at(self, n: int) -> list[list[Vec]]:
        """T_n as a field-element matrix (rows by coordinate)."""
        y = Fraction(1, n)
        d = self.dimension
        cols = [[kp_eval_rational(self.field, kp, y) for kp in col] for col in self.columns]
        return [[cols[c][r] for c in range(d)] for r in range(d)]


# ---------------------------------------------------------------------------
# Epsilon
# ---------------------------------------------------------------------------


def choose_epsilon(report: SpectralReport) -> EpsilonChoice:
    """0 when every eigenvalue is simple; otherwise a rational strictly
    inside the limit gap |lambda_2| - |lambda_{mu+1}|."""
    if all(m == 1 for m in report.multiplicities):
        return EpsilonChoice(Fraction(0))
    mu = report.simple_leading_count
    if mu < 2:
        raise TailFailure("gap undetectable: fewer than two simple leading eigenvalues")
    lam2 = report.branches[1]
    lam_mu1 = report.branches[mu]
    a2 = lam2.field.to_algebraic(lam2.limit())
    amu = lam_mu1.field.to_algebraic(lam_mu1.limit())
    if a2.compare_modulus(amu) != 1:
        raise TailFailure("gap undetectable: |lambda_2| = |lambda_{mu+1}| at the limit")
    from .intervals import sqrt_down, sqrt_up

    width = Fraction(1, 2**16)
    while True:
        m2 = a2.enclosure(width).abs2()
        mmu = amu.enclosure(width).abs2()
        if m2.lo > mmu.hi:
            break
        width /= 2**8
    gap_lo = sqrt_down(m2.lo, 64)
    gap_hi = sqrt_up(mmu.hi, 64)
    eps = (gap_lo - gap_hi) / 2
    if eps <= 0:
        raise TailFailure("gap undetectable after refinement")
    return EpsilonChoice(eps)


# ---------------------------------------------------------------------------
# Basis construction
# ---------------------------------------------------------------------------


def build_basis(report: SpectralReport, truncation_order, epsilon) -> ConeBasis:
    order = Fraction(truncation_order)
    eps = Fraction(epsilon)
    branches = list(report.branches)
    for b in branches:
        if b.ramification != 1:
            raise RamifiedBranchesError("ramified eigenvalue branches")
    # extend branches that are shorter than the requested order
    for idx, b in enumerate(branches):
        if b.truncation_order < order and not b.exact:
            branches[idx] = _extend_tagged(b, order)
    # collect generators and build one conjugation-closed field
    gens: list[AlgebraicNumber] = []
    clipped: list[list[tuple[Fraction, AlgebraicNumber]]] = []
    for b in branches:
        terms = [(e, a) for e, a in b.coefficients_algebraic() if e <= order]
        clipped.append(terms)
        gens.extend(a for _, a in terms)
    field, images = build_field(gens, close_conj=True)
    pos = 0
    branch_polys: list[KPoly] = []
    for terms in clipped:
        deg = max((int(e) for e, _ in terms), default=0)
        kp = [field.zero() for _ in range(deg + 1)]
        for e, _ in terms:
            kp[int(e)] = images[pos]
            pos += 1
        branch_polys.append(kp_trim(field, kp))

    d = report.degree
    columns: list[list[KPoly]] = []
    labels: list[tuple[int, int]] = []
    for bi, kp in enumerate(branch_polys):
        m = report.multiplicities[bi]
        powers = [[field.one()]]
        for _ in range(d - 1):
            powers.append(kp_mul(field, powers[-1], kp))
        for j in range(1, m + 1):
            col: list[KPoly] = []
            for ell in range(d):
                if j == 1:
                    entry = [v for v in powers[ell]]
                else:
                    if kp_is_zero(kp):
                        entry = [field.one()] if ell == j - 1 else []
                    else:
                        if ell - j + 1 < 0:
                            entry = []
                        else:
                            entry = kp_scale(
                                field, powers[ell - j + 1], field.from_rational(comb(ell, j - 1))
                            )
                if j > 1 and not kp_is_zero(entry):
                    entry = kp_scale(field, entry, field.from_rational(eps ** (j - 1)))
                if bi == 0 and j == 1:
                    entry = kp_scale(field, entry, field.from_rational(d))
                col.append(entry)
            columns.append(col)
            labels.append((bi, j))

    conj_col: dict[int, int] = {}
    for c, (bi, j) in enumerate(labels):
        pb = report.conj_pairing.get(bi, bi)
        if pb == bi:
            conj_col[c] = c
        else:
            for c2, (bi2, j2) in enumerate(labels):
                if bi2 == pb and j2 == j:
                    conj_col[c] = c2
                    break

    det = _det_kpoly(field, [[columns[c][r] for c in range(d)] for r in range(d)])
    if kp_is_zero(det):
        raise DegenerateBasisError("det T vanishes identically")
    det2 = kp_mul(field, det, kp_conj(field, det))
    ineq = AbsIneq(field, det2, [], "det-nonzero", strict=True)
    try:
        valid_from, det_cert = certify_abs_inequality(ineq)
    except TailFailure as exc:
        raise DegenerateBasisError(f"det T certificate failed: {exc}") from exc

    return ConeBasis(
        field=field,
        truncation_order=order,
        epsilon=eps,
        columns=columns,
        labels=labels,
        conj_col=conj_col,
        multiplicities=list(report.multiplicities),
        basis_valid_from=valid_from,
        det_certificate=det_cert,
        report=report,
        branch_polys=branch_polys,
    )


def _extend_tagged(b: PuiseuxBranch, order: Fraction) -> PuiseuxBranch:
    src = getattr(b, "source_factor", None)
    if src is None:
        raise ValueError("branch lacks its source factor; cannot extend")
    prefix, _, raw = b.branch_id.partition(":")
    import copy

    tmp = copy.copy(b)
    tmp.branch_id = raw or b.branch_id
    nb = extend_branch(tmp, order, src)
    nb.branch_id = b.branch_id if not raw else f"{prefix}:{nb.branch_id}"
    nb.source_factor = src
    return nb


def _det_kpoly(f: NumberField, rows: list[list[KPoly]]) -> KPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    memo: dict[tuple, KPoly] = {}

    def rec(r: int, cols: tuple[int, ...]) -> KPoly:
        if r == n:
            return [f.one()]
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc: KPoly = []
        for idx, c in enumerate(cols):
            entry = rows[r][c]
            if kp_is_zero(entry):
                continue
            sub = rec(r + 1, cols[:idx] + cols[idx + 1 :])
            term = kp_mul(f, entry, sub)
            if idx % 2:
                term = kp_neg(f, term)
            acc = kp_add(f, acc, term)
        memo[key] = acc
        return acc

    return rec(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def solve_field(f: NumberField, mat: list[list[Vec]], rhs: list[Vec]) -> list[Vec]:
    """Exact Gaussian elimination over the number field."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not f.is_zero(a[r][col])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix in field solve")
        a[col], a[piv] = a[piv], a[col]
        inv = f.inv(a[col][col])
        a[col] = [f.mul(v, inv) for v in a[col]]
        for r in range(n):
            if r != col and not f.is_zero(a[r][col]):
                factor = a[r][col]
                a[r] = [f.sub(v, f.mul(factor, w)) for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def membership(u, n: int, basis: ConeBasis) -> str:
    """'In' / 'Out' / 'Boundary' for the state vector u at index n (exact)."""
    if n < basis.basis_valid_from:
        raise ValueError(f"T_n only certified nonsingular from n = {basis.basis_valid_from}")
    f = basis.field
    rhs = [f.from_rational(Fraction(v)) for v in u]
    alpha = solve_field(f, basis.matrix_at(n), rhs)
    # conjugate-pairing consistency (guaranteed for real input)
    for c, c2 in basis.conj_col.items():
        if not f.is_zero(f.sub(alpha[c2], f.conj(alpha[c]))):
            raise AssertionError("solution violates conjugate pairing")
    a0 = alpha[0]
    if not f.is_real_elt(a0):
        raise AssertionError("leading coefficient not real")
    s0 = f.sign_real(a0)
    if s0 < 0:
        return "Out"
    a0sq = f.mul(a0, a0)
    verdict = "In"
    for c in range(1, len(alpha)):
        diff = f.sub(a0sq, f.abs2(alpha[c]))
        s = f.sign_real(diff)
        if s < 0:
            return "Out"
        if s == 0:
            verdict = "Boundary"
    if s0 == 0:
        verdict = "Boundary" if verdict != "Out" else verdict
    return verdict


# ---------------------------------------------------------------------------
# Cone positivity index
# ---------------------------------------------------------------------------


def _folded_terms(basis: ConeBasis, polys: list[KPoly], skip: set[int] = frozenset()):
    """Weighted |.| terms with conjugate-pair folding (|h| = |conj h|)."""
    f = basis.field
    seen: dict[tuple, int] = {}
    order = []
    for c, kp in enumerate(polys):
        if c in skip or kp_is_zero(kp):
            continue
        b = kp_mul(f, kp, kp_conj(f, kp))
        key = tuple(tuple(v) for v in b)
        if key in seen:
            order[seen[key]][0] += 1
        else:
            seen[key] = len(order)
            order.append([1, kp])
    return [(-w, h) for w, h in order]


def positivity_index(basis: ConeBasis) -> tuple[int, dict[str, TailCertificate]]:
    """Least certified N_pos with every cone generator combination
    componentwise positive: (V_11)_l > sum |(V_ij)_l| for each coordinate."""
    f = basis.field
    d = basis.dimension
    certs: dict[str, TailCertificate] = {}
    n_pos = max(1, basis.basis_valid_from)
    for ell in range(d):
        rhs = basis.columns[0][ell]
        if not kp_is_real(f, rhs):
            raise AssertionError("V_{1,1} entry is not real")
        terms = _folded_terms(basis, [basis.columns[c][ell] for c in range(1, d)])
        terms = [(w, h) for w, h in terms]
        ineq = AbsIneq(f, rhs, terms, f"cone-positivity-coord-{ell}", strict=True)
        n_ell, cert = certify_abs_inequality(ineq)
        certs[ineq.ineq_id] = cert
        n_pos = max(n_pos, n_ell)
    return n_pos, certs


# ---------------------------------------------------------------------------
# Inclusion index
# ---------------------------------------------------------------------------


def _kp_compose_w(f: NumberField, p: KPoly, big_d: int) -> KPoly:
    """(1+Y)^D * p(Y/(1+Y)): polynomial again for deg p <= D."""
    one_plus = [f.one(), f.one()]
    acc: KPoly = []
    for k, c in enumerate(p):
        if f.is_zero(c):
            continue
        term = [f.zero()] * k + [c]
        term = kp_mul(f, term, kp_pow(f, one_plus, big_d - k))
        acc = kp_add(f, acc, term)
    return acc


def _companion_cleared(f: NumberField, rec: Recurrence) -> tuple[list[list[KPoly]], KPoly]:
    """a(Y) * A(1/Y) as a polynomial matrix together with the scalar a(Y)."""
    d = rec.order
    big = max(p.degree for p in rec.coefficients)
    rev = []
    for p in rec.coefficients:
        if p.is_zero():
            rev.append([])
        else:
            rp = p.reversed_at(big)
            rev.append([f.from_rational(c) for c in rp.coeffs])
    a = rev[-1]
    rows: list[list[KPoly]] = []
    for i in range(d - 1):
        rows.append([list(a) if j == i + 1 else [] for j in range(d)])
    rows.append([rev[i] for i in range(d)])
    return rows, a


@dataclass
class InclusionResult:
    index: int
    certificates: dict[str, TailCertificate]


def inclusion_index(basis: ConeBasis, rec: Recurrence) -> InclusionResult:
    """Least certified N with A(n) K_n contained in K_{n+1} for all n >= N,
    via the row-dominance condition (raises TailFailure when it cannot be
    certified at this truncation order)."""
    f = basis.field
    d = basis.dimension
    t_cols = basis.columns
    big_d = max(
        (len(kp) - 1 for col in t_cols for kp in col if kp), default=0
    )
    t_next = [[_kp_compose_w(f, kp, big_d) for kp in col] for col in t_cols]
    rows_next = [[t_next[c][r] for c in range(d)] for r in range(d)]
    det_next = _det_kpoly(f, rows_next)
    if kp_is_zero(det_next):
        raise DegenerateBasisError("det T_{n+1} vanishes identically")
    adj = _adjugate(f, rows_next)
    a_mat, a_poly = _companion_cleared(f, rec)
    t_rows = [[t_cols[c][r] for c in range(d)] for r in range(d)]
    m1 = _mat_mul_kp(f, a_mat, t_rows)
    num = _mat_mul_kp(f, adj, m1)
    den = kp_mul(f, det_next, a_poly)
    den_conj = kp_conj(f, den)
    scaled = [[kp_mul(f, num[i][j], den_conj) for j in range(d)] for i in range(d)]

    certs: dict[str, TailCertificate] = {}
    start = max(1, basis.basis_valid_from)
    n_incl = start
    # region where the scaled inequalities are equivalent to row dominance:
    # below the first positive zero of |den|^2
    den2 = kp_mul(f, den, den_conj)
    y_den, den_cert = certify_kpoly_positive(f, den2, _HALF, "inclusion-denominator")
    certs["inclusion-denominator"] = den_cert

    re_n11 = kp_scale(
        f, kp_add(f, scaled[0][0], kp_conj(f, scaled[0][0])), f.from_rational(_HALF)
    )
    top_terms = _folded_terms(basis, [scaled[0][k] for k in range(1, d)])
    if d == 1:
        ineq = AbsIneq(f, re_n11, [], "inclusion-row-0", strict=False)
        n_row, cert = certify_abs_inequality(ineq, y_max=y_den, start_walk=start)
        certs[ineq.ineq_id] = cert
        n_incl = max(n_incl, n_row)
    seen_rows: dict[tuple, str] = {}
    for i in range(1, d):
        row_terms = _folded_terms(basis, [scaled[i][k] for k in range(d)])
        all_terms = _merge_terms(f, top_terms + row_terms)
        sig = _terms_signature(f, all_terms)
        if sig in seen_rows:
            continue
        ineq = AbsIneq(f, re_n11, all_terms, f"inclusion-row-{i}", strict=False)
        seen_rows[sig] = ineq.ineq_id
        n_row, cert = certify_abs_inequality(ineq, y_max=y_den, start_walk=start)
        certs[ineq.ineq_id] = cert
        n_incl = max(n_incl, n_row)
    return InclusionResult(n_incl, certs)


def _merge_terms(f: NumberField, terms):
    seen: dict[tuple, int] = {}
    out = []
    for w, h in terms:
        b = kp_mul(f, h, kp_conj(f, h))
        key = tuple(tuple(v) for v in b)
        if key in seen:
            out[seen[key]][0] += w
        else:
            seen[key] = len(out)
            out.append([w, h])
    return [(w, h) for w, h in out if w != 0]


def _terms_signature(f: NumberField, terms):
    sig = []
    for w, h in terms:
        b = kp_mul(f, h, kp_conj(f, h))
        sig.append((w, tuple(tuple(v) for v in b)))
    return tuple(sorted(sig))


def _adjugate(f: NumberField, rows: list[list[KPoly]]) -> list[list[KPoly]]:
    n = len(rows)
    if n == 1:
        return [[[f.one()]]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            cof = _det_kpoly(f, minor)
            if (i + j) % 2:
                cof = kp_neg(f, cof)
            out[j][i] = cof  # transpose
    return out


def _mat_mul_kp(f: NumberField, a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: KPoly = []
            for k in range(n):
                if not kp_is_zero(a[i][k]) and not kp_is_zero(b[k][j]):
                    acc = kp_add(f, acc, kp_mul(f, a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# Per-n checks, sampling, diagnostics
# ---------------------------------------------------------------------------


def row_dominance_at(basis: ConeBasis, rec: Recurrence, n: int) -> bool:
    """Exact row-dominance check at one index (independent of the symbolic
    route: solves with the evaluated matrices directly)."""
    f = basis.field
    d = basis.dimension
    tn = basis.matrix_at(n)
    tn1 = basis.matrix_at(n + 1)
    amat = _companion_at(f, rec, n)
    prod = [[None] * d for _ in range(d)]
    for j in range(d):
        colv = [tn[r][j] for r in range(d)]
        acol = [self_dot(f, amat[r], colv) for r in range(d)]
        mcol = solve_field(f, tn1, acol)
        for r in range(d):
            prod[r][j] = mcol[r]
    re11 = f.re(prod[0][0])
    parts = [(-1, f.abs2(prod[0][k])) for k in range(1, d)]
    for i in range(1, d):
        row_parts = list(parts) + [(-1, f.abs2(prod[i][k])) for k in range(d)]
        s = abs_sum_sign(f, re11, row_parts)
        if s < 0:
            return False
    if d == 1:
        return f.sign_real(re11) >= 0
    return True


def self_dot(f: NumberField, row, col) -> Vec:
    acc = f.zero()
    for a, b in zip(row, col):
        acc = f.add(acc, f.mul(a, b))
    return acc


def _companion_at(f: NumberField, rec: Recurrence, n: int) -> list[list[Vec]]:
    d = rec.order
    lead = rec.leading.eval(n)
    rows = []
    for i in range(d - 1):
        rows.append([f.one() if j == i + 1 else f.zero() for j in range(d)])
    rows.append([f.from_rational(rec.coefficients[i].eval(n) / lead) for i in range(d)])
    return rows


def _sample_field(basis: ConeBasis):
    """Field extended by i, for evaluating complex-coefficient samples."""
    if basis._sample_field is None:
        i_unit = make_algebraic(
            UniPoly.make([1, 0, 1], "x"), Box.from_corners(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), 2)
        )
        kf, emb, i_img = join_field(basis.field, i_unit)
        basis._sample_field = (kf, emb, i_img)
    return basis._sample_field


def sample_cone_coefficients(basis: ConeBasis, rng: random.Random):
    """Random alpha in C (exact rational data): alpha_{1,1} = 1, unpaired
    entries real in [-1, 1], paired entries complex with |alpha| <= 1."""
    d = basis.dimension
    alpha: list[tuple[Fraction, Fraction]] = [None] * d
    alpha[0] = (Fraction(1), Fraction(0))
    for c in range(1, d):
        p = basis.conj_col[c]
        if p == c:
            alpha[c] = (Fraction(rng.randint(-64, 64), 64), Fraction(0))
        elif p > c:
            while True:
                re = Fraction(rng.randint(-64, 64), 64)
                im = Fraction(rng.randint(-64, 64), 64)
                if re * re + im * im <= 1:
                    break
            alpha[c] = (re, im)
            alpha[p] = (re, -im)
    return alpha


def combination_vector(basis: ConeBasis, alpha, n: int):
    """T_n alpha in the i-extended field (exact)."""
    kf, emb, i_img = _sample_field(basis)
    tn = basis.matrix_at(n)
    d = basis.dimension
    out = []
    for r in range(d):
        acc = kf.zero()
        for c in range(d):
            re, im = alpha[c]
            coeff = kf.add(kf.from_rational(re), kf.scale(i_img, im))
            acc = kf.add(acc, kf.mul(coeff, emb(tn[r][c])))
        out.append(acc)
    return kf, out


def image_coefficients(basis: ConeBasis, rec: Recurrence, alpha, n: int):
    """beta with T_{n+1} beta = A(n) T_n alpha (exact, in the i-extended
    field); returns (field, beta)."""
    kf, x = combination_vector(basis, alpha, n)
    _, emb, _ = _sample_field(basis)
    d = basis.dimension
    lead = rec.leading.eval(n)
    y = []
    for i in range(d - 1):
        y.append(x[i + 1])
    acc = kf.zero()
    for i in range(d):
        acc = kf.add(acc, kf.scale(x[i], rec.coefficients[i].eval(n) / lead))
    y.append(acc)
    tn1 = [[emb(v) for v in row] for row in basis.matrix_at(n + 1)]
    beta = solve_field(kf, tn1, y)
    return kf, beta


def image_in_cone(basis: ConeBasis, rec: Recurrence, alpha, n: int) -> bool:
    """Exact check beta_{1,1} >= max |beta_{i,j}| for the image of one
    sample (cone membership of A(n) T_n alpha in K_{n+1})."""
    kf, beta = image_coefficients(basis, rec, alpha, n)
    b0 = beta[0]
    if kf.sign_real(kf.re(b0)) < 0:
        return False
    b0sq = kf.abs2(b0)
    for c in range(1, len(beta)):
        if kf.sign_real(kf.sub(b0sq, kf.abs2(beta[c]))) < 0:
            return False
    return True


def contraction_margin(report: SpectralReport, n: int, width=Fraction(1, 2**20)) -> Interval:
    """Diagnostic enclosure of (lambda_{1,n} - |lambda_{2,n}|) / 2 from the
    truncated branch evaluations."""
    if len(report.branches) == 1:
        lam1 = evaluate_branch(report.branches[0], n, width)
        return lam1.re.scale(_HALF)
    lam1 = evaluate_branch(report.branches[0], n, width)
    lam2 = evaluate_branch(report.branches[1], n, width)
    m2 = lam2.abs2()
    from .intervals import sqrt_down, sqrt_up

    mod2 = Interval(sqrt_down(max(m2.lo, _ZERO), 80), sqrt_up(m2.hi, 80))
    return (lam1.re - mod2).scale(_HALF)


def edge_generators_2d(basis: ConeBasis) -> list[list[KPoly]]:
    """For order-2 cones with two real branches: the two edge rays
    V_{1,1} +- V_{2,1} (exact symbolic vectors)."""
    if basis.dimension != 2:
        raise ValueError("edge generators only defined for 2-dimensional cones")
    f = basis.field
    plus = [kp_add(f, basis.columns[0][r], basis.columns[1][r]) for r in range(2)]
    minus = [kp_add(f, basis.columns[0][r], kp_neg(f, basis.columns[1][r])) for r in range(2)]
    return [plus, minus]


def dump_cones_csv(basis: ConeBasis, rec: Recurrence, ns: list[int], path: str) -> None:
    """Raw cone and trajectory data for external plotting: one row per
    vector, coordinates as decimal strings."""
    f = basis.field
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "role", *[f"x{i}" for i in range(basis.dimension)]])
        for n in ns:
            tn = basis.matrix_at(n)
            for c in range(basis.dimension):
                coords = [
                    _decimal(f.enclosure(tn[r][c], Fraction(1, 10**12)))
                    for r in range(basis.dimension)
                ]
                wr.writerow([n, f"V_{basis.labels[c][0]+1},{basis.labels[c][1]}", *coords])
            u = state_vector(rec, n)
            wr.writerow([n, "U_n", *[str(float(v)) for v in u]])


def _decimal(box: Box) -> str:
    mid = (box.re.lo + box.re.hi) / 2
    return f"{float(mid):.12g}"

"""Eigenvalue-branch analysis: modulus grouping, ordering, contraction.

`modulus_groups` implements the composed-product iteration for counting
roots per asymptotic modulus: pair the roots (the squared dominant modulus
becomes the unique positive real dominant root), split square-free, expand
branches, and find which multiplicity class holds that root.  Subsequent
group sizes come from the same scan applied to m-subset product polynomials.

`check_contraction` certifies the ordering for every n >= holds_from
without truncation-error analysis: the squared-modulus functions are real
root functions of the composed-pairs polynomial, and real root functions
cannot cross on an interval free of discriminant and leading-coefficient
zeros, so a single exact ordering check at a rational sample point settles
the whole tail; the finitely many integers above the sample are checked
individually and exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.rootisolation import dup_isolate_real_roots_sqf

from .algebraic import AlgebraicNumber, factor_rational_poly, isolate_roots
from .config import DegreeCapExceeded, OrderCapExceeded
from .intervals import Box, Interval
from .polys import (
    BiPoly,
    resultant_x,
    UniPoly,
    composed_product_pairs,
    composed_product_subsets,
    discriminant_x,
    squarefree_decomposition,
    sympy_dup_gcd,
    unipoly_to_dup,
)
from .puiseux import BranchSet, PuiseuxBranch, branch_step_order, puiseux_expand

_ZERO = Fraction(0)


class SpectralFailure(ValueError):
    pass


@dataclass
class ModulusGrouping:
    """Partition of the distinct eigenvalue branches by asymptotic modulus."""

    group_sizes: list[int]
    groups: list[list[int]]  # branch indices into `branches`, top modulus first
    branches: BranchSet  # branches of the square-free part
    multiplicities: list[int]  # per branch, from the square-free decomposition
    order_used: Fraction


@dataclass
class TheoremConditions:
    contraction: bool
    distinct_limits: bool
    step_order_small: bool
    diagnostics: dict = field(default_factory=dict)

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.contraction, self.distinct_limits, self.step_order_small)


@dataclass
class SpectralReport:
    """Ordered branch data for the cone construction."""

    branches: list[PuiseuxBranch]  # lambda_1 first, then by decreasing modulus
    multiplicities: list[int]
    group_sizes: list[int]
    dominant_limit: AlgebraicNumber
    dominant_group_size: int  # v: branches sharing the limit modulus of lambda_1
    simple_leading_count: int  # mu: branches listed before the first Jordan block
    source: BiPoly  # reversed characteristic polynomial Q
    sqf_part: BiPoly
    pairs_poly: BiPoly  # composed pairs of the square-free part
    conj_pairing: dict[int, int]
    contraction_holds_from: int | None = None
    contraction_reason: str | None = None
    contraction_margin_order: Fraction | None = None
    theorem_conditions: TheoremConditions | None = None

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)


# ---------------------------------------------------------------------------
# Branch modulus comparison
# ---------------------------------------------------------------------------


def _sigma_boxes(b: PuiseuxBranch, emax: Fraction, width: Fraction) -> dict[Fraction, Interval]:
    """Interval coefficients of |branch|^2 = sum over pairs, up to exponent
    emax (sound enclosures; the true coefficients are real)."""
    cache = getattr(b, "_sigma_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(b, "_sigma_cache", cache)
    key = (emax, width)
    if key in cache:
        return cache[key]
    enc = [(e, b.field.enclosure(c, width)) for e, c in b.terms]
    out: dict[Fraction, Interval] = {}
    for ei, ci in enc:
        for ej, cj in enc:
            e = ei + ej
            if e > emax:
                continue
            prod = ci * cj.conjugate()
            out[e] = out.get(e, Interval.point(0)) + prod.re
    cache[key] = out
    return out


def _cmp_real_exact(a: PuiseuxBranch, b: PuiseuxBranch, emax: Fraction) -> int:
    """Exact |a| vs |b| for two real branches, deciding by the first
    differing term (terminates: distinct real branches differ).

    Works at field level: rational coefficients compare directly, others by
    deep interval refinement with the standalone-algebraic equality test as
    the last resort (reached only on exact irrational ties)."""
    sgn_a, sgn_b = a.leading_sign(), b.leading_sign()
    ia = {e: c for e, c in a.terms if e <= emax}
    ib = {e: c for e, c in b.terms if e <= emax}
    for e in sorted(set(ia) | set(ib)):
        ca, cb = ia.get(e), ib.get(e)
        ra = a.field.is_rational_elt(ca) if ca is not None else True
        rb = b.field.is_rational_elt(cb) if cb is not None else True
        va_rat = (ca[0] if ca is not None else Fraction(0)) * sgn_a if ra else None
        vb_rat = (cb[0] if cb is not None else Fraction(0)) * sgn_b if rb else None
        if ra and rb:
            if va_rat == vb_rat:
                continue
            return 1 if va_rat > vb_rat else -1
        # interval refinement on the signed difference
        width = Fraction(1, 2**24)
        decided = None
        while width > Fraction(1, 2**420):
            da = (
                Interval.point(va_rat)
                if ra
                else a.field.enclosure(ca, width).re.scale(sgn_a)
            )
            db = (
                Interval.point(vb_rat)
                if rb
                else b.field.enclosure(cb, width).re.scale(sgn_b)
            )
            s = (da - db).sign()
            if s is not None:
                decided = s
                break
            width /= 2**32
        if decided is not None:
            if decided == 0:
                continue
            return decided
        # exact tie test (rare): fall back to standalone algebraic numbers
        va = (
            AlgebraicNumber.from_rational(va_rat)
            if ra
            else a.field.to_algebraic(ca).scale(sgn_a)
        )
        vb = (
            AlgebraicNumber.from_rational(vb_rat)
            if rb
            else b.field.to_algebraic(cb).scale(sgn_b)
        )
        if va == vb:
            continue
        return (va + (-vb)).sign()
    return 0


def _sigma_exact_coeff(b: PuiseuxBranch, e: Fraction) -> AlgebraicNumber:
    """Exact sigma coefficient of |branch|^2 at exponent e (standalone
    algebraic arithmetic; may raise DegreeCapExceeded)."""
    cache = getattr(b, "_sigma_exact", None)
    if cache is None:
        cache = {}
        object.__setattr__(b, "_sigma_exact", cache)
    if e in cache:
        return cache[e]
    algs = b.coefficients_algebraic()
    acc = AlgebraicNumber.from_rational(0)
    for ei, ai in algs:
        for ej, aj in algs:
            if ei + ej == e:
                acc = acc + ai * aj.conjugate()
    cache[e] = acc
    return acc


def _is_conjugate_pair(a: PuiseuxBranch, b: PuiseuxBranch) -> bool:
    sa, sb = a.coefficients_algebraic(), b.coefficients_algebraic()
    if len(sa) != len(sb):
        return False
    return all(
        ea == eb and va.conjugate() == vb for (ea, va), (eb, vb) in zip(sa, sb)
    )


def compare_branch_modulus(
    a: PuiseuxBranch, b: PuiseuxBranch, emax: Fraction, width: Fraction
) -> int:
    """-1, 0 (tied at this order/width; sound), or +1 for |a| vs |b|."""
    emax = min(emax, a.truncation_order, b.truncation_order)
    a_real = a.is_real()
    b_real = b.is_real()
    if a_real and b_real:
        return _cmp_real_exact(a, b, emax)
    if _is_conjugate_pair(a, b):
        return 0  # exactly equal moduli
    sa = _sigma_boxes(a, emax, width)
    sb = _sigma_boxes(b, emax, width)
    for e in sorted(set(sa) | set(sb)):
        d = sa.get(e, Interval.point(0)) - sb.get(e, Interval.point(0))
        s = d.sign()
        if s == 1:
            return 1
        if s == -1:
            return -1
        if s is None:
            # interval straddles zero: decide this coefficient exactly
            try:
                exact = _sigma_exact_coeff(a, e) - _sigma_exact_coeff(b, e)
            except DegreeCapExceeded:
                return 0  # cannot separate within caps: tied (sound)
            if exact.is_zero():
                continue
            return exact.sign()
    return 0


def _peel_groups(
    branches: list[PuiseuxBranch], emax: Fraction, width: Fraction
) -> list[list[int]]:
    """Order branches into tie-classes by certified pairwise comparisons:
    repeatedly remove the set of branches with nothing provably above them."""
    n = len(branches)
    remaining = list(range(n))
    cmp_cache: dict[tuple[int, int], int] = {}

    def cmp(i: int, j: int) -> int:
        key = (i, j)
        if key not in cmp_cache:
            c = compare_branch_modulus(branches[i], branches[j], emax, width)
            cmp_cache[(i, j)] = c
            cmp_cache[(j, i)] = -c
        return cmp_cache[key]

    classes: list[list[int]] = []
    while remaining:
        top = [i for i in remaining if all(cmp(j, i) != 1 for j in remaining if j != i)]
        if not top:
            raise AssertionError("comparison relation is cyclic")
        classes.append(sorted(top))
        remaining = [i for i in remaining if i not in top]
    return classes


# ---------------------------------------------------------------------------
# Algorithm: number of roots for each modulus
# ---------------------------------------------------------------------------


def _scan_dominant_positive_factor(
    w: BiPoly, order: Fraction, width: Fraction
) -> int | None:
    """Index i0 such that the positive real root of greatest modulus of w
    lies in the multiplicity-i0 square-free factor; None if undecided at
    this order/width (caller escalates)."""
    entries: list[tuple[int, PuiseuxBranch]] = []
    for fac, mult in squarefree_decomposition(w):
        if mult == 0:
            continue
        for b in puiseux_expand(fac, order):
            entries.append((mult, b))
    branches = [b for _, b in entries]
    classes = _peel_groups(branches, order, width)
    top = classes[0]
    pos_real = [
        i for i in top if branches[i].is_real() and branches[i].leading_sign() > 0
    ]
    if len(pos_real) == 1:
        return entries[pos_real[0]][0]
    if len(pos_real) == 0:
        raise AssertionError("no positive real branch in the dominant class")
    return None  # several candidates: escalate order


def _scan_with_escalation(w: BiPoly, max_order: int) -> tuple[int, Fraction]:
    order = Fraction(1)
    width = Fraction(1, 2**24)
    while order <= max_order:
        res = _scan_dominant_positive_factor(w, order, width)
        if res is not None:
            return res, order
        order *= 2
        width /= 2**48
    raise OrderCapExceeded("expansion order cap exceeded in modulus scan")


def _group_sizes_from_norms(sqf: BiPoly, max_order: int) -> list[int] | None:
    """All group sizes from one composed-pairs polynomial: the positive real
    root functions of W = S (x) S are exactly the squared group moduli, with
    multiplicity q_k -- certified by the total count d (any coincidental
    positive-real cross product inflates the sum past d, which triggers the
    iterated-subsets fallback)."""
    d = sqf.deg_x
    pairs = composed_product_pairs(sqf)
    order = Fraction(1)
    while order <= max_order:
        entries: list[tuple[int, PuiseuxBranch]] = []
        for fac, mult in squarefree_decomposition(pairs):
            if mult == 0:
                continue
            for b in puiseux_expand(fac, order):
                entries.append((mult, b))
        norms = [
            (mult, b)
            for mult, b in entries
            if b.is_real() and b.leading_sign() > 0
        ]
        total = sum(m for m, _ in norms)
        if total != d:
            return None  # coincidental positive-real products: fall back
        # order the norm branches by value (exact: they are real branches)
        try:
            norms.sort(
                key=_RealBranchKey(order), reverse=True
            )
        except _TieAtOrder:
            order *= 2
            continue
        return [m for m, _ in norms]
    raise OrderCapExceeded("expansion order cap exceeded in norm ordering")


class _TieAtOrder(Exception):
    pass


class _RealBranchKey:
    """functools-style sort key wrapper using exact real-branch comparison."""

    def __init__(self, emax: Fraction):
        self.emax = emax

    def __call__(self, entry):
        mult, branch = entry
        return _RealBranchCmp(branch, self.emax)


class _RealBranchCmp:
    def __init__(self, branch: PuiseuxBranch, emax: Fraction):
        self.branch = branch
        self.emax = emax

    def __lt__(self, other: "_RealBranchCmp") -> bool:
        c = _cmp_real_exact(self.branch, other.branch, self.emax)
        if c == 0 and self.branch is not other.branch:
            raise _TieAtOrder()
        return c < 0


def modulus_groups(q: BiPoly, max_order: int = 256) -> ModulusGrouping:
    """Group sizes (q_1, ..., q_l) and the corresponding partition of the
    branches of the square-free part of q, ordered by decreasing modulus."""
    decomp = squarefree_decomposition(q)
    factors = [(f, m) for f, m in decomp if m >= 1]
    sqf = BiPoly({(0, 0): Fraction(1)})
    for f, _ in factors:
        sqf = sqf * f
    sqf = sqf.primitive()
    d = sqf.deg_x

    # a root branch identically zero (X divides the square-free part) forms
    # its own smallest-modulus group and is split off first
    zero_group = 0
    work = sqf
    if work.x_coeff(0).is_zero():
        zero_group = 1
        new_coeffs = [work.x_coeff(i) for i in range(1, work.deg_x + 1)]
        work = BiPoly.from_x_coeffs(new_coeffs).primitive()
    d_work = work.deg_x

    sizes: list[int] = []
    if d_work == 1:
        sizes = [1]
    elif d_work > 0:
        sizes = _group_sizes_from_norms(work, max_order)
        if sizes is None:
            # the paper's iterated route: composed pairs of subset products
            pairs = composed_product_pairs(work)
            q1, _ = _scan_with_escalation(pairs, max_order)
            sizes = [q1]
            while sum(sizes) < d_work:
                m = sum(sizes) + 1
                pm = composed_product_subsets(work, m)
                if pm.deg_x == 1:
                    sizes.append(1)
                    continue
                w = composed_product_pairs(pm)
                qnext, _ = _scan_with_escalation(w, max_order)
                sizes.append(qnext)
    if zero_group:
        sizes = sizes + [1]
    if sum(sizes) != d:
        raise AssertionError("group sizes do not sum to the degree")

    # partition the original branches to match the certified sizes
    order = Fraction(1)
    width = Fraction(1, 2**24)
    while True:
        branch_set = _expand_factors(factors, order)
        classes = _peel_groups(branch_set.branches, order, width)
        if [len(c) for c in classes] == sizes:
            mults = _multiplicity_tags(factors, branch_set, order)
            return ModulusGrouping(sizes, classes, branch_set, mults, order)
        order *= 2
        width /= 2**48
        if order > max_order:
            raise OrderCapExceeded("expansion order cap exceeded while grouping branches")


def _expand_factors(factors: list[tuple[BiPoly, int]], order: Fraction) -> BranchSet:
    all_branches: list[PuiseuxBranch] = []
    total = BiPoly({(0, 0): Fraction(1)})
    for idx, (f, _) in enumerate(factors):
        total = total * f
        for b in puiseux_expand(f, order):
            b.branch_id = f"f{idx}:{b.branch_id}"
            all_branches.append(b)
    return BranchSet(all_branches, total.primitive(), order)


def _multiplicity_tags(factors, branch_set: BranchSet, order: Fraction) -> list[int]:
    mults = []
    for b in branch_set.branches:
        idx = int(b.branch_id.split(":")[0][1:])
        mults.append(factors[idx][1])
    return mults


# ---------------------------------------------------------------------------
# Ordering and the spectral report
# ---------------------------------------------------------------------------


def order_branches(grouping: ModulusGrouping, source: BiPoly) -> SpectralReport:
    """Flatten the grouping with lambda_1 first; verify the dominant branch
    is unique, real and positive."""
    branches = grouping.branches.branches
    top = grouping.groups[0]
    if grouping.group_sizes[0] != 1:
        raise SpectralFailure(
            "no real positive dominant branch: "
            f"top modulus group has {grouping.group_sizes[0]} members"
        )
    lead = branches[top[0]]
    if not lead.is_real() or lead.leading_sign() <= 0:
        raise SpectralFailure("no real positive dominant branch")

    flat: list[int] = []
    for cls in grouping.groups:
        ordered = sorted(
            cls,
            key=lambda i: (grouping.multiplicities[i] != 1, branches[i].branch_id),
        )
        flat.extend(ordered)
    ordered_branches = [branches[i] for i in flat]
    mults = [grouping.multiplicities[i] for i in flat]

    dom_limit = ordered_branches[0].field.to_algebraic(ordered_branches[0].limit())
    v = 1
    for b in ordered_branches[1:]:
        lim = b.field.to_algebraic(b.limit())
        if lim.compare_modulus(dom_limit) == 0:
            v += 1
    mu = 0
    for m in mults:
        if m != 1:
            break
        mu += 1

    raw_pairs = grouping.branches.conjugate_pairs()
    inv = {old: new for new, old in enumerate(flat)}
    pairing = {inv[i]: inv[j] for i, j in raw_pairs.items()}

    sqf = BiPoly({(0, 0): Fraction(1)})
    for f, m in squarefree_decomposition(source):
        if m >= 1:
            sqf = sqf * f
    sqf = sqf.primitive()
    pairs_poly = composed_product_pairs(sqf) if sqf.deg_x >= 1 else sqf

    report = SpectralReport(
        branches=ordered_branches,
        multiplicities=mults,
        group_sizes=grouping.group_sizes,
        dominant_limit=dom_limit,
        dominant_group_size=v,
        simple_leading_count=mu,
        source=source,
        sqf_part=sqf,
        pairs_poly=pairs_poly,
        conj_pairing=pairing,
    )
    report.contraction_margin_order = _margin_order(report)
    return report


def _margin_order(report: SpectralReport) -> Fraction | None:
    """Y-order of lambda_1^2 - max_j |lambda_j|^2 from the truncated series
    (exact; None when undetermined at the current truncation)."""
    if len(report.branches) == 1:
        return _ZERO
    lead = report.branches[0]
    emax = min(b.truncation_order for b in report.branches) * 2
    lead_sq = _exact_sigma_series(lead, emax)
    best: Fraction | None = None
    for b in report.branches[1:]:
        other = _exact_sigma_series(b, emax)
        val = _first_nonzero_exponent(lead_sq, other, emax)
        if val is None:
            return None
        if best is None or val < best:
            best = val
    return best


def _exact_sigma_series(
    b: PuiseuxBranch, emax: Fraction
) -> dict[Fraction, AlgebraicNumber]:
    algs = [(e, b.field.to_algebraic(c)) for e, c in b.terms]
    out: dict[Fraction, AlgebraicNumber] = {}
    for ei, ai in algs:
        for ej, aj in algs:
            e = ei + ej
            if e > emax:
                continue
            prod = ai * aj.conjugate()
            out[e] = out.get(e, AlgebraicNumber.from_rational(0)) + prod
    return out


def _first_nonzero_exponent(
    sa: dict[Fraction, AlgebraicNumber],
    sb: dict[Fraction, AlgebraicNumber],
    emax: Fraction,
) -> Fraction | None:
    for e in sorted(set(sa) | set(sb)):
        if e > emax:
            break
        va = sa.get(e, AlgebraicNumber.from_rational(0))
        vb = sb.get(e, AlgebraicNumber.from_rational(0))
        if not (va == vb):
            return e
    return None


# ---------------------------------------------------------------------------
# Contraction certification
# ---------------------------------------------------------------------------


@dataclass
class ContractionResult:
    holds_from: int | None
    reason: str | None = None

    @property
    def holds(self) -> bool:
        return self.holds_from is not None


def eigenvalues_at(q: BiPoly, y: Fraction) -> list[tuple[AlgebraicNumber, int]]:
    """Exact eigenvalues (with multiplicity) at a rational parameter value."""
    uni = q.eval_y(y)
    if uni.degree != q.deg_x:
        raise ValueError(f"leading coefficient vanishes at Y={y}")
    out = []
    for fac, mult in factor_rational_poly(uni):
        for box in isolate_roots(fac):
            if fac.degree == 1:
                out.append((AlgebraicNumber.from_rational(-fac.coeffs[0] / fac.coeffs[1]), mult))
            else:
                out.append((AlgebraicNumber(fac, box), mult))
    return out


def dominant_ok_at(q: BiPoly, y: Fraction) -> bool:
    """Exact check: unique maximal-modulus root, real, positive, simple."""
    roots = eigenvalues_at(q, y)
    real_pos = [(a, m) for a, m in roots if a.is_real() and a.sign() > 0]
    if not real_pos:
        return False
    # the dominant candidate is the largest positive real root (distinct
    # roots separate under refinement, so this terminates)
    lam, mult = real_pos[0]
    for a, m in real_pos[1:]:
        width = Fraction(1, 2**16)
        while True:
            ba = a.enclosure(width)
            bl = lam.enclosure(width)
            if ba.re.lo > bl.re.hi:
                lam, mult = a, m
                break
            if ba.re.hi < bl.re.lo:
                break
            width /= 2**8
    if mult != 1:
        return False
    for a, m in roots:
        if a is lam:
            continue
        if lam.compare_modulus(a) != 1:
            return False
    return True


def _positive_roots_lower_bound(polys: list[UniPoly], limit: Fraction) -> Fraction:
    """Rational y0 in (0, limit] such that no polynomial in the list has a
    root in (0, y0]; y0 = limit when none has a root in (0, limit]."""
    y0 = limit
    for p in polys:
        if p.is_zero():
            raise ValueError("zero polynomial in exclusion set")
        coeffs = list(p.coeffs)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)  # strip the root at 0
        q = UniPoly.make(coeffs, p.var)
        if q.degree < 1:
            continue
        g = sympy_dup_gcd(q, q.derivative())
        sqf = q.divmod(g)[0] if g.degree > 0 else q
        roots = dup_isolate_real_roots_sqf(
            unipoly_to_dup(sqf), QQ, inf=QQ(0), sup=QQ(limit.numerator, limit.denominator)
        )
        for a, b in roots:
            lo = Fraction(int(a.numerator), int(a.denominator))
            hi = Fraction(int(b.numerator), int(b.denominator))
            if hi <= 0:
                continue
            while lo <= 0:
                # refine until the interval is strictly positive (root > 0)
                res = dup_isolate_real_roots_sqf(
                    unipoly_to_dup(sqf),
                    QQ,
                    inf=QQ(lo.numerator, lo.denominator),
                    sup=QQ(hi.numerator, hi.denominator),
                    eps=QQ(1, int(2 / (hi - lo)) + 4),
                )
                (a2, b2) = res[0]
                lo = Fraction(int(a2.numerator), int(a2.denominator))
                hi = Fraction(int(b2.numerator), int(b2.denominator))
            y0 = min(y0, lo)
    return y0


def check_contraction(report: SpectralReport, max_walk: int = 10_000) -> ContractionResult:
    """Least certified index from which A(n) has a unique, simple, real
    positive dominant eigenvalue."""
    if report.group_sizes[0] != 1:
        return ContractionResult(None, "tie at top modulus")
    lead = report.branches[0]
    if not lead.is_real():
        return ContractionResult(None, "complex dominant branch")
    if lead.leading_sign() <= 0:
        return ContractionResult(None, "dominant branch not positive")
    if report.multiplicities[0] != 1:
        return ContractionResult(None, "dominant branch not simple")

    s = report.sqf_part
    w = report.pairs_poly
    exclusions = [
        discriminant_x(s),
        s.x_coeff(s.deg_x),
        s.x_coeff(0),  # lambda = 0 crossings
    ]
    if w.deg_x >= 1:
        # collisions of the root functions of the square-free part of w:
        # within each square-free factor (discriminants) or across factors
        # (pairwise resultants); this factorized form avoids one huge
        # discriminant computation
        wfactors = [f for f, m in squarefree_decomposition(w) if m >= 1]
        for i, f in enumerate(wfactors):
            if f.deg_x >= 2:
                exclusions.append(discriminant_x(f))
            if f.deg_x >= 1:
                exclusions.append(f.x_coeff(f.deg_x))
            for g2 in wfactors[i + 1 :]:
                if f.deg_x >= 1 and g2.deg_x >= 1:
                    exclusions.append(resultant_x(f, g2))
    exclusions = [e for e in exclusions if not e.is_zero() and e.degree >= 0]
    y0 = _positive_roots_lower_bound(exclusions, Fraction(1, 2))
    if not dominant_ok_at(report.source, y0):
        return ContractionResult(None, f"dominant ordering fails on the tail (sample {y0})")
    n_tail = int(1 / y0) + 1
    if n_tail > max_walk:
        return ContractionResult(None, "contraction index beyond walk cap")
    holds_from = n_tail
    n = n_tail - 1
    while n >= 1:
        if dominant_ok_at(report.source, Fraction(1, n)):
            holds_from = n
            n -= 1
        else:
            break
    report.contraction_holds_from = holds_from
    return ContractionResult(holds_from)


def check_theorem_conditions(report: SpectralReport) -> TheoremConditions:
    """Advisory sufficient conditions for the inclusion chain to exist."""
    contraction = report.contraction_holds_from is not None
    if not contraction and report.contraction_reason is None:
        res = check_contraction(report)
        contraction = res.holds
        report.contraction_reason = res.reason

    limits = [b.field.to_algebraic(b.limit()) for b in report.branches]
    distinct = True
    for i in range(len(limits)):
        for j in range(i + 1, len(limits)):
            if limits[i] == limits[j]:
                distinct = False
    diagnostics: dict = {"margin_order": report.contraction_margin_order}
    step_ok = False
    if report.contraction_margin_order is not None:
        # constant branches contribute no n -> n+1 movement; the binding
        # branch is the one with the smallest step order
        steps = []
        for b in report.branches:
            try:
                steps.append(branch_step_order(b))
            except ValueError:
                pass
        diagnostics["step_orders"] = steps or "constant"
        step_ok = (not steps) or min(steps) > report.contraction_margin_order
    else:
        diagnostics["undetermined"] = "margin order not resolved at current truncation"
    tc = TheoremConditions(contraction, distinct, step_ok, diagnostics)
    report.theorem_conditions = tc
    return tc

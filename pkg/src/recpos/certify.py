"""End-to-end positivity decision and certificate verification.

Pipeline: reversed characteristic polynomial -> modulus grouping ->
branch ordering and contraction -> epsilon -> cone basis at escalating
truncation orders -> cone positivity index -> inclusion index -> entry
index scan -> exact initial-segment check.  A negative term anywhere
short-circuits to NotPositive; every cap maps to Inconclusive with a
reason, never to a weaker claim.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebraic import AlgebraicNumber
from .config import DegreeCapExceeded, Options, OrderCapExceeded
from .cones import (
    ConeBasis,
    DegenerateBasisError,
    RamifiedBranchesError,
    build_basis,
    choose_epsilon,
    contraction_margin,
    dump_cones_csv,
    inclusion_index,
    membership,
    positivity_index,
    row_dominance_at,
)
from .numfield import build_field, kp_trim
from .polys import UniPoly, reversed_char_poly
from .puiseux import PuiseuxBranch, branch_residual_valuation
from .recurrence import Recurrence, companion, state_vector, unroll
from .spectral import (
    SpectralFailure,
    SpectralReport,
    check_contraction,
    check_theorem_conditions,
    modulus_groups,
    order_branches,
)
from .tails import AbsIneq, TailCertificate, TailFailure, abs_sum_sign, verify_tail_certificate


@dataclass
class PositivityCertificate:
    truncation_order: Fraction
    epsilon: Fraction
    basis_valid_from: int
    n_pos: int
    inclusion_index: int
    entry_index: int
    initial_segment: list[Fraction]
    branches: list[dict]  # serialized truncated branches (exact algebraic data)
    multiplicities: list[int]
    conj_pairing: dict[int, int]
    tail_certificates: dict[str, TailCertificate]
    diagnostics: dict = dc_field(default_factory=dict)

    def invariant_ok(self) -> bool:
        return self.entry_index >= max(
            self.inclusion_index, self.n_pos, self.basis_valid_from
        ) and all(v >= 0 for v in self.initial_segment)


@dataclass
class Verdict:
    kind: str  # "Positive" | "NotPositive" | "Inconclusive"
    certificate: PositivityCertificate | None = None
    witness_index: int | None = None
    witness_value: Fraction | None = None
    reason: str | None = None
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def is_positive(self) -> bool:
        return self.kind == "Positive"


def _serialize_algebraic(a: AlgebraicNumber) -> dict:
    box = a.enclosure()
    val = None
    try:
        mid_re = float((box.re.lo + box.re.hi) / 2)
        mid_im = float((box.im.lo + box.im.hi) / 2)
        val = f"{mid_re:.10g}{mid_im:+.10g}i"
    except OverflowError:  # pragma: no cover
        pass
    return {
        "minpoly": [int(c) for c in a.minpoly.integer_primitive()[1].coeffs],
        "box": [str(box.re.lo), str(box.im.lo), str(box.re.hi), str(box.im.hi)],
        "_decimal": val,
    }


def _serialize_branch(b: PuiseuxBranch, order: Fraction) -> dict:
    return {
        "ramification": b.ramification,
        "truncation_order": str(order),
        "terms": [
            {"exponent": str(e), "coefficient": _serialize_algebraic(a)}
            for e, a in b.coefficients_algebraic()
            if e <= order
        ],
    }


def decide_positivity(rec: Recurrence, options: Options | None = None) -> Verdict:
    options = options or Options()
    d = rec.order

    for k, v in enumerate(rec.initial):
        if v < 0:
            return Verdict("NotPositive", witness_index=k, witness_value=v)

    # cheap prefix scan: an early negative term settles the question even
    # when the cone method does not apply
    prefix = unroll(rec, min(options.max_unroll, 128) + d)
    for k, v in enumerate(prefix):
        if v < 0:
            return Verdict("NotPositive", witness_index=k, witness_value=v)

    a = companion(rec)
    q = reversed_char_poly(a)
    diagnostics: dict = {}
    try:
        grouping = modulus_groups(q, max_order=options.max_expansion_order)
        report = order_branches(grouping, q)
    except (OrderCapExceeded, DegreeCapExceeded) as exc:
        return Verdict("Inconclusive", reason=f"cap: {exc}")
    except SpectralFailure as exc:
        return Verdict("Inconclusive", reason=str(exc))

    contraction = check_contraction(report)
    if not contraction.holds:
        return Verdict(
            "Inconclusive", reason=f"contraction condition not certified: {contraction.reason}"
        )
    diagnostics["contraction_holds_from"] = contraction.holds_from

    conditions = check_theorem_conditions(report)
    diagnostics["theorem_conditions"] = {
        "contraction": conditions.contraction,
        "distinct_limits": conditions.distinct_limits,
        "step_order_small": conditions.step_order_small,
        "details": {k: str(v) for k, v in conditions.diagnostics.items()},
    }

    try:
        eps_choice = choose_epsilon(report)
    except TailFailure as exc:
        return Verdict("Inconclusive", reason=str(exc), diagnostics=diagnostics)

    t_order = Fraction(options.truncation_order)
    basis = n_pos = incl = None
    last_reason = "not attempted"
    while t_order <= options.max_expansion_order:
        try:
            basis = build_basis(report, t_order, eps_choice.value)
            n_pos, pos_certs = positivity_index(basis)
            incl = inclusion_index(basis, rec)
            break
        except (DegenerateBasisError, TailFailure) as exc:
            last_reason = str(exc)
            basis = None
            t_order *= 2
        except RamifiedBranchesError as exc:
            return Verdict("Inconclusive", reason=str(exc), diagnostics=diagnostics)
        except (OrderCapExceeded, DegreeCapExceeded) as exc:
            return Verdict("Inconclusive", reason=f"cap: {exc}", diagnostics=diagnostics)
    if basis is None:
        return Verdict(
            "Inconclusive",
            reason=f"inclusion/positivity not certified up to order cap ({last_reason})",
            diagnostics=diagnostics,
        )

    start = max(incl.index, n_pos, basis.basis_valid_from, 1)
    values = unroll(rec, start + d)
    for k, v in enumerate(values):
        if v < 0:
            return Verdict("NotPositive", witness_index=k, witness_value=v)

    entry = None
    n = start
    while n <= options.max_unroll:
        if len(values) < n + d:
            more = unroll(rec, n + d)
            for k in range(len(values), len(more)):
                if more[k] < 0:
                    return Verdict("NotPositive", witness_index=k, witness_value=more[k])
            values = more
        u = tuple(values[n : n + d])
        if membership(u, n, basis) == "In":
            entry = n
            break
        n += 1
    if entry is None:
        return Verdict(
            "Inconclusive",
            reason=f"entry-cap: no membership within unroll cap {options.max_unroll}",
            diagnostics=diagnostics,
        )

    initial = values[:entry]
    for k, v in enumerate(initial):
        if v < 0:
            return Verdict("NotPositive", witness_index=k, witness_value=v)

    margin_samples = {}
    for ns in (max(entry, 10), 100):
        try:
            box = contraction_margin(report, ns)
            margin_samples[ns] = [str(box.lo), str(box.hi)]
        except Exception:
            pass
    diagnostics["contraction_margin_samples"] = margin_samples
    diagnostics["margin_order"] = (
        str(report.contraction_margin_order)
        if report.contraction_margin_order is not None
        else None
    )
    diagnostics["group_sizes"] = report.group_sizes
    diagnostics["dominant_group_size_v"] = report.dominant_group_size
    diagnostics["simple_leading_count_mu"] = report.simple_leading_count

    certs = dict(pos_certs)
    certs.update(incl.certificates)
    certs["det-nonzero"] = basis.det_certificate
    if eps_choice.gap_certificate is not None:
        certs["epsilon-gap"] = eps_choice.gap_certificate

    cert = PositivityCertificate(
        truncation_order=basis.truncation_order,
        epsilon=basis.epsilon,
        basis_valid_from=basis.basis_valid_from,
        n_pos=n_pos,
        inclusion_index=incl.index,
        entry_index=entry,
        initial_segment=initial,
        branches=[_serialize_branch(b, basis.truncation_order) for b in report.branches],
        multiplicities=list(report.multiplicities),
        conj_pairing=dict(report.conj_pairing),
        tail_certificates=certs,
        diagnostics=diagnostics,
    )
    if options.dump_cones:
        ns = list(range(max(1, basis.basis_valid_from), max(entry + 5, 10)))
        dump_cones_csv(basis, rec, ns, options.dump_cones)
    return Verdict("Positive", certificate=cert, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# Independent verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    accepted: bool
    failures: list[str]


def _deserialize_branches(cert: PositivityCertificate):
    """Rebuild exact branch data (list of (exponent, AlgebraicNumber))."""
    from .algebraic import make_algebraic
    from .intervals import Box

    out = []
    for bd in cert.branches:
        terms = []
        for t in bd["terms"]:
            mp = UniPoly.make([Fraction(c) for c in t["coefficient"]["minpoly"]], "x")
            c = t["coefficient"]["box"]
            box = Box.from_corners(
                Fraction(c[0]), Fraction(c[1]), Fraction(c[2]), Fraction(c[3])
            )
            terms.append((Fraction(t["exponent"]), make_algebraic(mp, box)))
        out.append((bd["ramification"], terms))
    return out


def _rebuild_basis(rec: Recurrence, cert: PositivityCertificate) -> tuple[ConeBasis, SpectralReport]:
    """Reconstruct the cone basis from serialized data only (plus the trusted
    recurrence); mirrors build_basis deterministically."""
    a = companion(rec)
    q = reversed_char_poly(a)
    branch_data = _deserialize_branches(cert)
    # verify each branch truncation against the recurrence: residual order
    # must exceed the truncation order
    rebuilt: list[PuiseuxBranch] = []
    for idx, (ram, terms) in enumerate(branch_data):
        if ram != 1:
            raise ValueError("ramified branch in certificate")
        gens = [alg for _, alg in terms]
        fld, images = build_field(gens, close_conj=False)
        bterms = [(e, img) for (e, _), img in zip(terms, images)]
        b = PuiseuxBranch(
            ramification=1,
            terms=bterms,
            truncation_order=cert.truncation_order,
            branch_id=f"cert{idx}",
            field=fld,
        )
        res = branch_residual_valuation(q, b)
        if res is not None and res <= cert.truncation_order:
            raise ValueError(f"branch {idx} is not a truncated eigenvalue branch")
        rebuilt.append(b)
    report = SpectralReport(
        branches=rebuilt,
        multiplicities=list(cert.multiplicities),
        group_sizes=[],
        dominant_limit=rebuilt[0].field.to_algebraic(rebuilt[0].limit()),
        dominant_group_size=0,
        simple_leading_count=_mu_of(cert.multiplicities),
        source=q,
        sqf_part=q,
        pairs_poly=q,
        conj_pairing={int(k): int(v) for k, v in cert.conj_pairing.items()},
    )
    basis = build_basis(report, cert.truncation_order, cert.epsilon)
    return basis, report


def _mu_of(mults: list[int]) -> int:
    mu = 0
    for m in mults:
        if m != 1:
            break
        mu += 1
    return mu


def verify_certificate(rec: Recurrence, cert: PositivityCertificate) -> VerificationReport:
    """Replay the certificate with independent computations; reject on any
    mismatch."""
    failures: list[str] = []

    def fail(msg: str):
        failures.append(msg)

    try:
        if not cert.invariant_ok():
            fail("index invariant violated (n0 below one of N, N_pos, valid_from)")
            return VerificationReport(False, failures)

        # epsilon rule
        if all(m == 1 for m in cert.multiplicities):
            if cert.epsilon != 0:
                fail("epsilon must be 0 for simple spectra")
                return VerificationReport(False, failures)
        elif cert.epsilon <= 0:
            fail("epsilon must be positive with multiple eigenvalues")
            return VerificationReport(False, failures)

        # fresh unrolling of the initial segment
        fresh = unroll(rec, cert.entry_index)
        if [Fraction(v) for v in cert.initial_segment] != fresh:
            fail("initial segment does not match fresh unrolling")
            return VerificationReport(False, failures)
        if any(v < 0 for v in fresh):
            fail("initial segment contains a negative value")
            return VerificationReport(False, failures)

        basis, _report = _rebuild_basis(rec, cert)

        if basis.basis_valid_from != cert.basis_valid_from:
            fail("basis_valid_from does not replay")
        det_cert = cert.tail_certificates.get("det-nonzero")
        if det_cert is None or det_cert.threshold != basis.det_certificate.threshold:
            fail("determinant certificate mismatch")
        if det_cert is not None and det_cert.elimination_poly != basis.det_certificate.elimination_poly:
            fail("determinant elimination polynomial mismatch")

        n_pos, pos_certs = positivity_index(basis)
        if n_pos != cert.n_pos:
            fail(f"cone positivity index does not replay ({n_pos} != {cert.n_pos})")
        for key, c in pos_certs.items():
            stored = cert.tail_certificates.get(key)
            if stored is None or stored.threshold != c.threshold or stored.elimination_poly != c.elimination_poly:
                fail(f"tail certificate {key} does not replay")

        incl = inclusion_index(basis, rec)
        if incl.index != cert.inclusion_index:
            fail(f"inclusion index does not replay ({incl.index} != {cert.inclusion_index})")
        for key, c in incl.certificates.items():
            stored = cert.tail_certificates.get(key)
            if stored is None or stored.threshold != c.threshold or stored.elimination_poly != c.elimination_poly:
                fail(f"tail certificate {key} does not replay")

        if failures:
            return VerificationReport(False, failures)

        # sampled exact checks (independent of the symbolic certificates)
        rng = random.Random(20250808)
        samples_incl = sorted(
            {cert.inclusion_index, cert.entry_index}
            | {cert.inclusion_index + rng.randint(0, 40) for _ in range(18)}
        )
        for n in samples_incl:
            if not row_dominance_at(basis, rec, n):
                fail(f"row dominance fails at n = {n}")
                break
        for n in sorted({cert.n_pos + rng.randint(0, 40) for _ in range(20)}):
            if not _cone_positive_at(basis, n):
                fail(f"cone positivity fails at n = {n}")
                break

        # membership replay: the entry scan must hit exactly entry_index
        start = max(cert.inclusion_index, cert.n_pos, cert.basis_valid_from, 1)
        n = start
        entry = None
        while n <= cert.entry_index:
            u = state_vector(rec, n)
            if membership(u, n, basis) == "In":
                entry = n
                break
            n += 1
        if entry != cert.entry_index:
            fail(f"entry index does not replay (got {entry})")

        return VerificationReport(not failures, failures)
    except Exception as exc:  # malformed data, failed rebuilds, ...
        fail(f"verification error: {exc}")
        return VerificationReport(False, failures)


def _cone_positive_at(basis: ConeBasis, n: int) -> bool:
    """Exact sufficient-condition check at one index: every coordinate of
    V_11 strictly exceeds the sum of the other columns' absolute values."""
    from .numfield import kp_eval_rational

    f = basis.field
    d = basis.dimension
    y = Fraction(1, n)
    for ell in range(d):
        r = kp_eval_rational(f, basis.columns[0][ell], y)
        parts = []
        for c in range(1, d):
            v = kp_eval_rational(f, basis.columns[c][ell], y)
            parts.append((-1, f.abs2(v)))
        if abs_sum_sign(f, r, parts) <= 0:
            return False
    return True

"""Pipeline verdicts, certificate soundness, verification replay."""

import copy
from fractions import Fraction as F

import pytest

from recpos import Options, Recurrence, decide_positivity, unroll, verify_certificate
from recpos.jsonio import certificate_from_json, certificate_to_json


@pytest.fixture(scope="module")
def sec3_verdict(sec3_rec):
    return decide_positivity(sec3_rec)


class TestVerdicts:
    def test_worked_example_positive(self, sec3_rec, sec3_verdict):
        v = sec3_verdict
        assert v.kind == "Positive"
        cert = v.certificate
        assert cert.n_pos == 2
        assert cert.invariant_ok()
        # soundness: exhaustive unrolling far past the entry index
        vals = unroll(sec3_rec, cert.entry_index + 500)
        assert all(x >= 0 for x in vals)

    def test_not_positive_witness(self):
        rec = Recurrence.make([[1], [1]], [F(-1)])
        v = decide_positivity(rec)
        assert v.kind == "NotPositive" and v.witness_index == 0
        assert unroll(rec, 1)[0] < 0

    def test_not_positive_later_term(self):
        # u_{n+2} = u_{n+1} - u_n turns negative
        rec = Recurrence.make([[-1], [1], [1]], [F(1), F(1)])
        v = decide_positivity(rec)
        assert v.kind == "NotPositive"
        vals = unroll(rec, v.witness_index + 1)
        assert vals[v.witness_index] == v.witness_value < 0

    def test_inconclusive_no_dominant(self):
        # chi = (X-3)(X^2+9): three eigenvalues of modulus 3, positive orbit
        rec = Recurrence.make([[27], [-9], [3], [1]], [F(1), F(10), F(100)])
        vals = unroll(rec, 200)
        assert all(v > 0 for v in vals)  # genuinely positive, out of scope
        v = decide_positivity(rec)
        assert v.kind == "Inconclusive"
        assert "dominant" in v.reason or "contraction" in v.reason or "tie" in v.reason

    def test_hypergeometric_order_one(self):
        # 64(32n^2+24n+5)(2n+3)^2(n+1)^2 w_{n+1} = (32n^2+88n+61)(4n+3)^2(4n+1)^2 w_n
        from recpos import UniPoly

        def mul(*ps):
            acc = UniPoly.make([1])
            for p in ps:
                acc = acc * UniPoly.make(p)
            return acc

        lead = mul([5, 24, 32], [3, 2], [3, 2], [1, 1], [1, 1]).scale(64)
        rhs = mul([61, 88, 32], [3, 4], [3, 4], [1, 4], [1, 4])
        rec = Recurrence.make([rhs.coeffs, lead.coeffs], [F(1)])
        v = decide_positivity(rec)
        assert v.kind == "Positive"
        assert v.certificate.entry_index <= 2

    def test_cfinite(self, cfinite_21_rec):
        v = decide_positivity(cfinite_21_rec)
        assert v.kind == "Positive"
        vals = unroll(cfinite_21_rec, v.certificate.entry_index + 500)
        assert all(x >= 0 for x in vals)

    def test_jordan_block_instance(self, jordan_rec):
        v = decide_positivity(jordan_rec)
        assert v.kind == "Positive"
        assert v.certificate.epsilon == F(1, 4)
        vals = unroll(jordan_rec, v.certificate.entry_index + 500)
        assert all(x >= 0 for x in vals)


class TestDeterminism:
    def test_identical_certificates(self, sec3_rec, sec3_verdict):
        again = decide_positivity(sec3_rec)
        assert certificate_to_json(again.certificate) == certificate_to_json(
            sec3_verdict.certificate
        )


class TestVerification:
    def test_accepts_genuine(self, sec3_rec, sec3_verdict):
        rep = verify_certificate(sec3_rec, sec3_verdict.certificate)
        assert rep.accepted, rep.failures

    def test_round_trip_json(self, sec3_rec, sec3_verdict):
        data = certificate_to_json(sec3_verdict.certificate)
        rebuilt = certificate_from_json(data)
        assert verify_certificate(sec3_rec, rebuilt).accepted

    def test_rejects_entry_below_inclusion(self, sec3_rec, sec3_verdict):
        cert = copy.deepcopy(sec3_verdict.certificate)
        cert.entry_index = cert.inclusion_index - 1
        assert not verify_certificate(sec3_rec, cert).accepted

    def test_rejects_negated_initial_value(self, sec3_rec, sec3_verdict):
        cert = copy.deepcopy(sec3_verdict.certificate)
        cert.initial_segment[5] = -cert.initial_segment[5]
        assert not verify_certificate(sec3_rec, cert).accepted

    def test_rejects_altered_epsilon(self, sec3_rec, sec3_verdict):
        cert = copy.deepcopy(sec3_verdict.certificate)
        cert.epsilon = F(1, 4)
        assert not verify_certificate(sec3_rec, cert).accepted

    def test_rejects_wrong_branch(self, sec3_rec, sec3_verdict):
        cert = copy.deepcopy(sec3_verdict.certificate)
        cert.branches[0]["terms"][1]["coefficient"]["minpoly"] = [1, 4, 1]
        assert not verify_certificate(sec3_rec, cert).accepted

    def test_rejects_malformed(self, sec3_rec, sec3_verdict):
        data = certificate_to_json(sec3_verdict.certificate)
        del data["branches"]
        from recpos.jsonio import FormatError

        with pytest.raises(FormatError):
            certificate_from_json(data)

"""JSON formats for problems and certificates (owned by the CLI layer).

Problem files:

    {
      "order": 2,
      "coefficients": [[-50,-65,-28,-4], [219,217,72,8], [192,160,44,4]],
      "initial": ["1/64", "11/768"],
      "options": {"truncation_order": 1, "max_unroll": 10000,
                  "precision_bits": 128}
    }

`coefficients` lists p_0 .. p_d by ascending power of n; the recurrence is
p_d(n) u_{n+d} = p_{d-1}(n) u_{n+d-1} + ... + p_0(n) u_n.  Initial values
are exact rational strings.  Keys starting with an underscore are
non-normative decimal renderings for human readers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .certify import PositivityCertificate
from .config import Options
from .recurrence import Recurrence
from .tails import TailCertificate

FORMAT_TAG = "recpos-certificate/1"


class FormatError(ValueError):
    pass


def _frac(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}: {exc}") from exc


def parse_problem(data: dict) -> tuple[Recurrence, Options]:
    try:
        order = int(data["order"])
        coeffs = data["coefficients"]
        initial = data["initial"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"missing or malformed problem field: {exc}") from exc
    if len(coeffs) != order + 1:
        raise FormatError(f"need {order + 1} coefficient polynomials, got {len(coeffs)}")
    if len(initial) != order:
        raise FormatError(f"need {order} initial values, got {len(initial)}")
    polys = [[_frac(c) for c in p] for p in coeffs]
    init = [_frac(v) for v in initial]
    rec = Recurrence.make(polys, init)
    opts = parse_options(data.get("options", {}))
    return rec, opts


def parse_options(data: dict) -> Options:
    base = Options()
    return Options(
        truncation_order=int(data.get("truncation_order", base.truncation_order)),
        max_expansion_order=int(data.get("max_expansion_order", base.max_expansion_order)),
        max_unroll=int(data.get("max_unroll", base.max_unroll)),
        precision_bits=int(data.get("precision_bits", base.precision_bits)),
        degree_cap=int(data.get("degree_cap", base.degree_cap)),
        dump_cones=data.get("dump_cones", base.dump_cones),
    )


def load_problem(path: str) -> tuple[Recurrence, Options]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
    return parse_problem(data)


# -- certificates -----------------------------------------------------------


def _tail_to_json(c: TailCertificate) -> dict:
    return {
        "inequality_id": c.inequality_id,
        "threshold": c.threshold,
        "leading_sign": c.leading_sign,
        "elimination_poly": c.elimination_poly,
        "y_star": str(c.y_star),
        "sample_point": str(c.sample_point),
        "checked_integers": c.checked_integers,
        "strict": c.strict,
    }


def _tail_from_json(d: dict) -> TailCertificate:
    return TailCertificate(
        inequality_id=str(d["inequality_id"]),
        threshold=int(d["threshold"]),
        leading_sign=int(d["leading_sign"]),
        elimination_poly=[int(v) for v in d["elimination_poly"]],
        y_star=_frac(d["y_star"]),
        sample_point=_frac(d["sample_point"]),
        checked_integers=[int(v) for v in d["checked_integers"]],
        strict=bool(d["strict"]),
    )


def certificate_to_json(cert: PositivityCertificate) -> dict:
    return {
        "format": FORMAT_TAG,
        "truncation_order": str(cert.truncation_order),
        "epsilon": str(cert.epsilon),
        "basis_valid_from": cert.basis_valid_from,
        "n_pos": cert.n_pos,
        "inclusion_index": cert.inclusion_index,
        "entry_index": cert.entry_index,
        "initial_segment": [str(v) for v in cert.initial_segment],
        "_initial_segment_decimal": [float(v) for v in cert.initial_segment],
        "branches": cert.branches,
        "multiplicities": cert.multiplicities,
        "conj_pairing": {str(k): v for k, v in cert.conj_pairing.items()},
        "tail_certificates": {k: _tail_to_json(v) for k, v in cert.tail_certificates.items()},
        "diagnostics": cert.diagnostics,
    }


def certificate_from_json(data: dict) -> PositivityCertificate:
    try:
        if data.get("format") != FORMAT_TAG:
            raise FormatError(f"unknown certificate format {data.get('format')!r}")
        branches = data["branches"]
        for b in branches:
            for t in b["terms"]:
                _frac(t["exponent"])
                [int(v) for v in t["coefficient"]["minpoly"]]
                [_frac(v) for v in t["coefficient"]["box"]]
        return PositivityCertificate(
            truncation_order=_frac(data["truncation_order"]),
            epsilon=_frac(data["epsilon"]),
            basis_valid_from=int(data["basis_valid_from"]),
            n_pos=int(data["n_pos"]),
            inclusion_index=int(data["inclusion_index"]),
            entry_index=int(data["entry_index"]),
            initial_segment=[_frac(v) for v in data["initial_segment"]],
            branches=branches,
            multiplicities=[int(m) for m in data["multiplicities"]],
            conj_pairing={int(k): int(v) for k, v in data["conj_pairing"].items()},
            tail_certificates={
                k: _tail_from_json(v) for k, v in data["tail_certificates"].items()
            },
            diagnostics=data.get("diagnostics", {}),
        )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed certificate: {exc}") from exc


def save_certificate(cert: PositivityCertificate, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(certificate_to_json(cert), fh, indent=1)
        fh.write("\n")


def load_certificate(path: str) -> PositivityCertificate:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
    return certificate_from_json(data)

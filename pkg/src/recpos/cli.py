"""Command-line front end.

Subcommands:
    prove <problem.json> [--certificate out.json] [flags]
    verify <problem.json> <cert.json>
    spectrum <problem.json>
    unroll <problem.json> --count K

Exit codes: 0 positive / verification accepted; 1 not positive (witness
printed); 2 inconclusive; 3 input or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from .certify import decide_positivity, verify_certificate
from .config import Options
from .jsonio import (
    FormatError,
    certificate_to_json,
    load_certificate,
    load_problem,
    save_certificate,
)
from .polys import reversed_char_poly
from .recurrence import InvalidRecurrence, companion, unroll
from .spectral import (
    check_contraction,
    check_theorem_conditions,
    modulus_groups,
    order_branches,
)

EXIT_POSITIVE = 0
EXIT_NOT_POSITIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="recpos", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("problem", help="problem JSON file")
        p.add_argument("--truncation-order", type=int, default=None)
        p.add_argument("--max-unroll", type=int, default=None)
        p.add_argument("--max-expansion-order", type=int, default=None)
        p.add_argument("--precision-bits", type=int, default=None)
        p.add_argument("--dump-cones", metavar="CSV", default=None)
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("prove", help="decide positivity, emit a certificate")
    common(p)
    p.add_argument("--certificate", metavar="OUT", default=None)

    v = sub.add_parser("verify", help="verify a certificate independently")
    v.add_argument("problem")
    v.add_argument("certificate")
    v.add_argument("--quiet", action="store_true")

    s = sub.add_parser("spectrum", help="print grouping, branches, conditions")
    common(s)

    u = sub.add_parser("unroll", help="print exact initial terms")
    common(u)
    u.add_argument("--count", type=int, required=True)
    return ap


def _apply_flags(opts: Options, args) -> Options:
    updates = {}
    if args.truncation_order is not None:
        updates["truncation_order"] = args.truncation_order
    if args.max_unroll is not None:
        updates["max_unroll"] = args.max_unroll
    if getattr(args, "max_expansion_order", None) is not None:
        updates["max_expansion_order"] = args.max_expansion_order
    if args.precision_bits is not None:
        updates["precision_bits"] = args.precision_bits
    if args.dump_cones is not None:
        updates["dump_cones"] = args.dump_cones
    return replace(opts, **updates) if updates else opts


def _say(args, *items):
    if not getattr(args, "quiet", False):
        print(*items)


def cmd_prove(args) -> int:
    rec, opts = load_problem(args.problem)
    opts = _apply_flags(opts, args)
    verdict = decide_positivity(rec, opts)
    if verdict.kind == "Positive":
        cert = verdict.certificate
        _say(args, f"Positive: entry index n0 = {cert.entry_index}, "
                   f"inclusion index N = {cert.inclusion_index}, N_pos = {cert.n_pos}")
        out = args.certificate or (args.problem.rsplit(".", 1)[0] + ".cert.json")
        save_certificate(cert, out)
        _say(args, f"certificate written to {out}")
        return EXIT_POSITIVE
    if verdict.kind == "NotPositive":
        print(f"NotPositive: u_{verdict.witness_index} = {verdict.witness_value} < 0")
        return EXIT_NOT_POSITIVE
    _say(args, f"Inconclusive: {verdict.reason}")
    return EXIT_INCONCLUSIVE


def cmd_verify(args) -> int:
    rec, _opts = load_problem(args.problem)
    try:
        cert = load_certificate(args.certificate)
    except FormatError as exc:
        print(f"certificate rejected: {exc}")
        return EXIT_INPUT_ERROR
    report = verify_certificate(rec, cert)
    if report.accepted:
        _say(args, "certificate accepted")
        return EXIT_POSITIVE
    print("certificate rejected:")
    for f in report.failures:
        print(f"  - {f}")
    return EXIT_NOT_POSITIVE


def cmd_spectrum(args) -> int:
    rec, opts = load_problem(args.problem)
    opts = _apply_flags(opts, args)
    q = reversed_char_poly(companion(rec))
    grouping = modulus_groups(q, max_order=opts.max_expansion_order)
    report = order_branches(grouping, q)
    contraction = check_contraction(report)
    conditions = check_theorem_conditions(report)
    out = {
        "group_sizes": report.group_sizes,
        "dominant_group_size_v": report.dominant_group_size,
        "simple_leading_count_mu": report.simple_leading_count,
        "multiplicities": report.multiplicities,
        "contraction_holds_from": contraction.holds_from,
        "contraction_reason": contraction.reason,
        "contraction_margin_order": str(report.contraction_margin_order)
        if report.contraction_margin_order is not None
        else None,
        "theorem_conditions": {
            "contraction": conditions.contraction,
            "distinct_limits": conditions.distinct_limits,
            "step_order_small": conditions.step_order_small,
        },
        "branches": [
            {
                "terms": [
                    {
                        "exponent": str(e),
                        "minpoly": [int(c) for c in a.minpoly.integer_primitive()[1].coeffs],
                        "_decimal": repr(a),
                    }
                    for e, a in b.coefficients_algebraic()
                ]
            }
            for b in report.branches
        ],
    }
    print(json.dumps(out, indent=1))
    return EXIT_POSITIVE


def cmd_unroll(args) -> int:
    rec, _ = load_problem(args.problem)
    vals = unroll(rec, args.count)
    for k, v in enumerate(vals):
        print(f"u_{k} = {v}")
    return EXIT_POSITIVE


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "prove":
            return cmd_prove(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "spectrum":
            return cmd_spectrum(args)
        if args.command == "unroll":
            return cmd_unroll(args)
    except (FormatError, InvalidRecurrence, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())

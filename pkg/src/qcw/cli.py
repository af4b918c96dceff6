"""Command-line front end.

Subcommands:

  quotient    order/class/exponent/invariants of G^[level, q] from a file
  cohomology  H^1, H^2, decomposable H^2 and the cup tensor of G^[3, q]
  milnor      k1/k2 invariants and the symbol tensor of a field descriptor
  compare     end-to-end degree <= 2 comparison: Milnor side vs cohomology
              side of the level-3 quotient of the standard Galois model
  check       realizability criteria on presentations / wreath data

Field descriptors: "Fq:<size>", "Qp:<ell>", "R".  Exit codes: 0 for success
or a positive finding, 1 for errors, 2 when a criterion or comparison does
not apply / does not hold.  JSON output is byte-stable for fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cohom import GroupCohomology, cohomology_record, pairings_equivalent
from .errors import QcwError
from .graded import algebra_from_cohomology, algebra_from_milnor
from .milnor import galois_model, milnor_pairing_gram, parse_field, symbol_algebra
from .presentations import parse_file
from .qcentral import (
    SeriesParams,
    group_record,
    second_quotient,
    table_record,
    third_quotient,
    to_table,
)
from .realizability import (
    CdDescriptor,
    WreathSpec,
    h1_vs_cd_check,
    principle_check,
    relators_in_third_series,
    wreath_construct,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_APPLICABLE = 2

CONSISTENT = "COMPARISON-CONSISTENT"
INCONSISTENT = "COMPARISON-FAILED"

POSITIVE_VERDICTS = {"not-realizable", "at-most-one-realizable"}


def _emit(report: dict, output: str) -> None:
    if output == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ": ")) + "\n")
        return
    for line in _text_lines(report):
        sys.stdout.write(line + "\n")


def _text_lines(report: dict, prefix: str = "") -> list[str]:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_text_lines(value, prefix + "  "))
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def _load_group(path: str, name: str):
    with open(path, "r", encoding="utf-8") as handle:
        groups = parse_file(handle.read())
    for pres in groups:
        if pres.name == name:
            return pres
    raise QcwError(f"no group named {name!r} in {path} (found {[g.name for g in groups]})")


def cmd_quotient(args) -> int:
    pres = _load_group(args.file, args.group)
    params = SeriesParams.from_q(args.q)
    if args.level == 3:
        rec = group_record(third_quotient(pres, params, args.order_bound), args.order_bound)
    else:
        rec = table_record(second_quotient(pres, params, args.order_bound))
    report = {
        "command": "quotient",
        "file": args.file,
        "group": args.group,
        "level": args.level,
        "q": args.q,
        "seed": args.seed,
        "result": rec,
    }
    _emit(report, args.output)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    pres = _load_group(args.file, args.group)
    params = SeriesParams.from_q(args.q)
    table = to_table(third_quotient(pres, params, args.order_bound), args.order_bound)
    ctx = GroupCohomology(table, args.q, h2_bound=args.h2_bound)
    report = {
        "command": "cohomology",
        "file": args.file,
        "group": args.group,
        "q": args.q,
        "seed": args.seed,
        "order": table.order,
        "h1": cohomology_record(ctx.h1_space()),
        "h2": cohomology_record(ctx.h2_space()),
        "decomposable_h2": cohomology_record(ctx.dec_space()),
        "pairing": ctx.pairing().to_record(),
    }
    _emit(report, args.output)
    return EXIT_OK


def cmd_milnor(args) -> int:
    params = SeriesParams.from_q(args.q)
    desc = parse_field(args.field, params)
    S = symbol_algebra(desc)
    report = {
        "command": "milnor",
        "field": desc.label(),
        "q": args.q,
        "seed": args.seed,
        "symbols": S.to_record(),
        "pairing": milnor_pairing_gram(desc).to_record(),
    }
    _emit(report, args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    params = SeriesParams.from_q(args.q)
    desc = parse_field(args.field, params)
    S = symbol_algebra(desc)
    milnor_side = algebra_from_milnor(S)
    pres = galois_model(desc)
    table = to_table(third_quotient(pres, params, args.order_bound), args.order_bound)
    # the decomposable part only needs coboundaries, so the comparison works
    # above the full-H^2 bound (e.g. the order-81 tame quotient at q = 3)
    group_side = algebra_from_cohomology(table, args.q)
    dims_match = (
        milnor_side.dim1 == group_side.dim1
        and sorted(milnor_side.target_orders) == sorted(group_side.target_orders)
    )
    tensors_match = dims_match and pairings_equivalent(
        milnor_side.pairing(), group_side.pairing()
    )
    consistent = dims_match and tensors_match
    report = {
        "command": "compare",
        "field": desc.label(),
        "q": args.q,
        "seed": args.seed,
        "verdict": CONSISTENT if consistent else INCONSISTENT,
        "milnor": {
            "dim1": milnor_side.dim1,
            "k2_invariants": list(milnor_side.target_orders),
            "mult": milnor_side.mult.tolist(),
        },
        "cohomology": {
            "quotient_order": table.order,
            "dim1": group_side.dim1,
            "dec_invariants": list(group_side.target_orders),
            "mult": group_side.mult.tolist(),
        },
        "dims_match": dims_match,
        "pairings_equivalent": tensors_match,
    }
    _emit(report, args.output)
    return EXIT_OK if consistent else EXIT_NOT_APPLICABLE


def cmd_check(args) -> int:
    params = SeriesParams.from_q(args.q)
    verdicts = []
    if args.wreath_copies is not None:
        action = []
        if args.wreath_action == "cyclic":
            m = args.wreath_copies
            action = [tuple(range(1, m)) + (0,)] if m > 1 else [(0,)]
        elif args.wreath_action == "swap":
            if args.wreath_copies != 2:
                raise QcwError("swap action needs exactly 2 copies")
            action = [(1, 0)]
        else:
            action = [tuple(int(x) for x in args.wreath_action.split(","))]
        spec = WreathSpec(
            k_pres=_load_group(args.file, args.wreath_k),
            k_cd=CdDescriptor(value=args.cd_k, provenance="user-supplied")
            if args.cd_k is not None
            else CdDescriptor.free(),
            k_top_cohomology_finite=True,
            l_pres=_load_group(args.file, args.wreath_l),
            l_cd=CdDescriptor(value=args.cd_l, provenance="user-supplied")
            if args.cd_l is not None
            else CdDescriptor.free(),
            copies=args.wreath_copies,
            action=action,
            k_torsion_free=not args.k_has_torsion,
            l_torsion_free=not args.l_has_torsion,
        )
        verdicts.append(wreath_construct(spec, params.p))
    elif args.dim_h1 is not None:
        cd = (
            CdDescriptor(value=None, provenance="user-supplied")
            if args.cd_infinite
            else CdDescriptor(value=args.cd, provenance="user-supplied")
        )
        verdicts.append(h1_vs_cd_check(args.dim_h1, cd, params.p, args.torsion_free))
    else:
        pres = _load_group(args.file, args.group)
        which = args.criterion
        if which in ("all", "third-series"):
            verdicts.append(relators_in_third_series(pres, params))
        if which in ("all", "principle"):
            if args.against:
                other = _load_group(args.file, args.against)
                verdicts.append(
                    principle_check(
                        pres,
                        other,
                        params.p,
                        args.order_bound,
                        assert_realizable=args.assert_realizable,
                    )
                )
            elif args.against_free:
                from .presentations import free_presentation

                free = free_presentation(pres.rank)
                verdicts.append(
                    principle_check(
                        free,
                        pres,
                        params.p,
                        args.order_bound,
                        assert_realizable=args.assert_realizable,
                    )
                )
    if not verdicts:
        raise QcwError("no criterion selected")
    report = {
        "command": "check",
        "q": args.q,
        "seed": args.seed,
        "verdicts": [v.to_record() for v in verdicts],
    }
    _emit(report, args.output)
    found = any(v.verdict in POSITIVE_VERDICTS for v in verdicts)
    return EXIT_OK if found else EXIT_NOT_APPLICABLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcw",
        description="third q-central quotients, their degree <= 2 cohomology, "
        "Milnor K mod q, and realizability checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--q", type=int, default=2, help="prime power modulus (default 2)")
        p.add_argument("--order-bound", type=int, default=512)
        p.add_argument("--h2-bound", type=int, default=64)
        p.add_argument("--output", choices=["text", "json"], default="text")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("quotient", help="compute G^[level, q] of a presented group")
    p.add_argument("file")
    p.add_argument("group")
    p.add_argument("--level", type=int, choices=[2, 3], default=3)
    common(p)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("cohomology", help="H^1, H^2, decomposable H^2 of G^[3, q]")
    p.add_argument("file")
    p.add_argument("group")
    common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("milnor", help="Milnor k1, k2 mod q of a field descriptor")
    p.add_argument("field")
    common(p)
    p.set_defaults(func=cmd_milnor)

    p = sub.add_parser("compare", help="Milnor side vs cohomology side, degree <= 2")
    p.add_argument("field")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check", help="realizability criteria")
    p.add_argument("--file")
    p.add_argument("--group")
    p.add_argument("--against", help="second group name for the pairing principle")
    p.add_argument(
        "--against-free",
        action="store_true",
        help="compare against the free group of the same rank",
    )
    p.add_argument(
        "--criterion", choices=["all", "third-series", "principle"], default="all"
    )
    p.add_argument(
        "--assert-realizable",
        choices=["first", "second"],
        default=None,
        help="declare one side of the principle realizable; the verdict then names the other",
    )
    p.add_argument("--dim-h1", type=int, default=None, help="run the dimension test directly")
    p.add_argument("--cd", type=int, default=None)
    p.add_argument("--cd-infinite", action="store_true")
    p.add_argument("--torsion-free", action="store_true")
    p.add_argument("--wreath-k", help="group name of K for the wreath construction")
    p.add_argument("--wreath-l", help="group name of L")
    p.add_argument("--wreath-copies", dest="wreath_copies", type=int, default=None)
    p.add_argument(
        "--wreath-action",
        default="cyclic",
        help="'cyclic', 'swap', or an explicit permutation like 1,2,0",
    )
    p.add_argument("--cd-k", type=int, default=None, help="cd(K); defaults to 1 (free)")
    p.add_argument("--cd-l", type=int, default=None, help="cd(L); defaults to 1 (free)")
    p.add_argument("--k-has-torsion", action="store_true")
    p.add_argument("--l-has-torsion", action="store_true")
    common(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QcwError, ValueError, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

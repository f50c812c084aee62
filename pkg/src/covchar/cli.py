"""Command-line front end: ingest groups, enumerate structure, run suites.

Exit codes: 0 all requested checks pass, 1 at least one theorem failed,
2 usage or input error (one-line diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import axb, verify
from .characters import enumerate_characters
from .errors import CovcharError
from .groups import ZOO_NAMES, FiniteGroup, enumerate_normal_subgroups, group_from_name, load_group
from .haar import weil_normalize


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covchar",
        description="Verify covariant-function identities on finite groups and the ax+b model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("groups", help="list builtin groups")

    p_enum = sub.add_parser("enumerate", help="list normal subgroups, characters, cosets")
    _add_group_flags(p_enum)

    p_verify = sub.add_parser("verify", help="run the finite theorem suite")
    _add_group_flags(p_verify)
    p_verify.add_argument("--u", type=float, default=1.0, help="weight of lambda_G per element")
    p_verify.add_argument("--v", type=float, default=1.0, help="weight of lambda_N per element")
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=7)
    p_verify.add_argument("--tol", type=float, default=verify.FINITE_TOL)
    _add_output_flags(p_verify)

    p_axb = sub.add_parser("verify-axb", help="run the ax+b quadrature suite")
    p_axb.add_argument("--omega", type=float, action="append",
                       help="character frequency (repeatable; default 0.5 and 1.0)")
    p_axb.add_argument("--nodes", type=int, default=128, help="quadrature nodes per axis")
    p_axb.add_argument("--a-min", type=float, default=0.125)
    p_axb.add_argument("--a-max", type=float, default=8.0)
    p_axb.add_argument("--b-max", type=float, default=16.0)
    p_axb.add_argument("--tol", type=float, default=axb.AXB_TOL)
    p_axb.add_argument("--seed", type=int, default=7)
    _add_output_flags(p_axb)

    p_report = sub.add_parser("report", help="re-render an existing report document")
    p_report.add_argument("--in", dest="infile", required=True, help="report JSON path")
    _add_output_flags(p_report, default_format="text")
    return parser


def _add_group_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", help=f"builtin name, e.g. {', '.join(ZOO_NAMES)}")
    p.add_argument("--table", help="path to a Cayley-table JSON document")


def _add_output_flags(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--format", choices=("json", "text"), default=default_format)
    p.add_argument("--out", help="write the report here instead of stdout")


def _resolve_group(args) -> FiniteGroup:
    if bool(args.group) == bool(args.table):
        raise CovcharError("exactly one of --group or --table is required")
    if args.group:
        return group_from_name(args.group)
    path = Path(args.table)
    if not path.exists():
        raise CovcharError(f"table file not found: {path}")
    return load_group(path, name=path.stem)


def _emit(doc: dict, args) -> None:
    text = verify.render_json(doc) if args.format == "json" else verify.render_text(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_groups(args) -> int:
    for name in ZOO_NAMES:
        g = group_from_name(name)
        print(f"{name:<8} order {g.order}")
    print("also: Zn, Dn, Sn (n<=5), Q8, Heis{2,3,5,7}, and x-products like Z2xZ4")
    return 0


def _cmd_enumerate(args) -> int:
    g = _resolve_group(args)
    print(f"group {g.name}, order {g.order}")
    for n in enumerate_normal_subgroups(g):
        labels = ", ".join(g.labels[m] for m in n.members)
        print(f"normal subgroup of size {len(n.members)}: {{{labels}}}")
        reps = ", ".join(g.labels[int(r)] for r in n.cosets.representatives)
        print(f"  coset representatives: {reps}")
        chars = enumerate_characters(n)
        print(f"  characters ({len(chars)}), modulus {chars[0].modulus}:")
        for xi in chars:
            exps = " ".join(f"{g.labels[m]}->{e}" for m, e in zip(n.members, xi.exponents))
            print(f"    [{exps}]")
    return 0


def _cmd_verify(args) -> int:
    g = _resolve_group(args)
    haar = weil_normalize(args.u, args.v)
    if args.trials < 1:
        raise CovcharError("--trials must be >= 1")
    if args.tol <= 0:
        raise CovcharError("--tol must be positive")
    reports = verify.run_suite(g, haar, args.trials, args.seed, tolerance=args.tol)
    doc = verify.report_document(reports, args.seed, haar=haar, extra={"group": g.name})
    _emit(doc, args)
    return 0 if verify.all_passed(doc) else 1


def _cmd_verify_axb(args) -> int:
    omegas = args.omega if args.omega else [0.5, 1.0]
    if args.tol <= 0:
        raise CovcharError("--tol must be positive")
    grid = axb.QuadratureGrid(n_a=args.nodes, n_b=args.nodes, a_min=args.a_min,
                              a_max=args.a_max, b_max=args.b_max)
    reports = axb.run_axb_suite(omegas=omegas, grid=grid, tol=args.tol, seed=args.seed)
    extra = {
        "group": "axb",
        "grid": {"n_a": grid.n_a, "n_b": grid.n_b, "a_min": grid.a_min,
                 "a_max": grid.a_max, "b_max": grid.b_max},
    }
    doc = verify.report_document(reports, args.seed, extra=extra)
    _emit(doc, args)
    return 0 if verify.all_passed(doc) else 1


def _cmd_report(args) -> int:
    path = Path(args.infile)
    if not path.exists():
        raise CovcharError(f"report file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CovcharError(f"not a JSON report: {exc}") from exc
    if "cases" not in doc:
        raise CovcharError("document has no 'cases' key; not a report")
    _emit(doc, args)
    return 0 if verify.all_passed(doc) else 1


_COMMANDS = {
    "groups": _cmd_groups,
    "enumerate": _cmd_enumerate,
    "verify": _cmd_verify,
    "verify-axb": _cmd_verify_axb,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except CovcharError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

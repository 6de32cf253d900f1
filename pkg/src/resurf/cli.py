"""The ``resurf`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .conic_bundle import (
    RNRFExtras, admissible_types, classify_conic_fiber, is_conic_class, load_graph, rnrf_conditions,
)
from .errors import DataIntegrityError, ResurfError
from .gap_engine import classify_1_gap, gap_density, render_witness, sweep_gaps
from .kodaira import (
    FiberConfiguration, FiberType, component_count, component_table, euler_number, is_nonreduced,
    is_reducible, quadratic_base_change, t_lattice, validate_configuration,
)
from .lattice_core import format_rational
from .mwl_data import bounds, get_case, load_dataset, minimal_norm, narrow_determinant, qx_form
from .weierstrass import classify_fiber, classify_surface, load_model, parse_places
from .verify import verify_tables


class UsageError(ResurfError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _q(x) -> str:
    return format_rational(x) if isinstance(x, (Fraction, int)) and not isinstance(x, bool) else str(x)


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _cases(args):
    return load_dataset(args.data)


# ---------------------------------------------------------------- commands


def cmd_classify_weierstrass(args) -> int:
    model = load_model(args.model)
    places = parse_places(args.places)
    types = [(str(p), str(classify_fiber(model, p))) for p in places]
    payload = {"fibers": [{"place": p, "type": t} for p, t in types]}
    lines = [", ".join(f"t={p}: {t}" for p, t in types)]
    if args.all:
        config = classify_surface(model, places)
        report = validate_configuration(config)
        payload["configuration"] = [str(f) for f in config.fibers]
        payload["euler_sum"] = report.euler_sum
        lines.append(f"configuration={config} euler_sum={report.euler_sum}")
    _emit(args, payload, lines)
    return 0


def cmd_fiber_info(args) -> int:
    f = FiberType.parse(args.type)
    table = component_table(f)
    t = t_lattice(f)
    payload = {
        "type": str(f), "components": component_count(f), "euler": euler_number(f),
        "reducible": is_reducible(f), "nonreduced": is_nonreduced(f),
        "t_lattice": str(t) if t else None, "base_change": str(quadratic_base_change(f)),
        "multiplicities": list(table.multiplicities),
    }
    _emit(args, payload, [f"{k}={'-' if v is None else v}" for k, v in payload.items()])
    return 0


def cmd_case_info(args) -> int:
    case = get_case(args.case, _cases(args))
    c_max, c_min, delta = bounds(case)
    payload = {
        "case": case.case_no, "T": [str(b) for b in case.t_blocks], "rank": case.rank,
        "torsion": list(case.torsion), "c_max": _q(c_max), "c_min": _q(c_min), "delta": _q(delta),
        "mu": _q(minimal_norm(case)), "d": narrow_determinant(case),
        "qx": [[_q(x) for x in row] for row in qx_form(case).to_rows()],
        "provenance": case.provenance,
    }
    lines = [f"{k}={v}" for k, v in payload.items()]
    _emit(args, payload, lines)
    return 0


def cmd_gaps(args) -> int:
    case = get_case(args.case, _cases(args))
    sweep = sweep_gaps(case, args.max_k, start=args.min_k)
    payload = {"case": case.case_no, "verdicts": [v.to_json() for v in sweep.verdicts],
               "gaps": sweep.gaps, "unknown": sweep.unknown}
    lines = [v.line() for v in sweep.verdicts]
    lines.append("gaps=" + ",".join(map(str, sweep.gaps)))
    if sweep.unknown:
        lines.append("unknown=" + ",".join(map(str, sweep.unknown)))
    _emit(args, payload, lines)
    return 0


def cmd_density(args) -> int:
    case = get_case(args.case, _cases(args))
    rows = []
    for n in args.n:
        dens = gap_density(case, n)
        rows.append({"N": n, "gaps": dens.gaps, "unknown": dens.unknown,
                     "lower": _q(dens.lower), "upper": _q(dens.upper)})
    lines = [f"N={r['N']} gaps={r['gaps']} unknown={r['unknown']} density="
             + (r["lower"] if r["lower"] == r["upper"] else f"[{r['lower']},{r['upper']}]")
             for r in rows]
    _emit(args, {"case": case.case_no, "rows": rows}, lines)
    return 0


def cmd_one_gap_report(args) -> int:
    entries = classify_1_gap(_cases(args))
    payload = {"cases": [{"case": e.case_no, "route": e.route, **e.verdict.to_json()} for e in entries],
               "one_gap": [e.case_no for e in entries if e.verdict.is_gap]}
    lines = [f"case={e.case_no} verdict={e.verdict.verdict} route={e.route} "
             f"witness={render_witness(e.verdict.witness)}" for e in entries]
    lines.append("one_gap=" + ",".join(str(c) for c in payload["one_gap"]))
    _emit(args, payload, lines)
    return 1 if any(e.verdict.verdict == "unknown" for e in entries) else 0


def cmd_conic_admissible(args) -> int:
    rank = args.rank
    config = FiberConfiguration.parse(args.fibers.split(","), rank)
    if args.case is not None:
        case = get_case(args.case, _cases(args))
        given = sorted(str(b) for b in map(t_lattice, config.fibers) if b is not None)
        if given != sorted(str(b) for b in case.t_blocks):
            raise UsageError(f"fibers give T={'+'.join(given) or '0'}, case {case.case_no} has "
                             f"T={'+'.join(str(b) for b in case.t_blocks) or '0'}")
        if rank is None:
            config = FiberConfiguration(config.fibers, case.rank)
    report = validate_configuration(config)
    adm = admissible_types(config)
    extras = RNRFExtras(
        has_nontrivial_section=args.nontrivial_section,
        section_hits_near_component=args.near_component,
        has_conjugate_disjoint_sections=args.conjugate_sections,
        has_2torsion_section=args.two_torsion,
    )
    rnrf = rnrf_conditions(config, extras)
    payload = {"configuration": [str(f) for f in config.fibers], "euler_sum": report.euler_sum,
               "valid": report.passed, "admissible": adm.names(), "rnrf_conditions": rnrf}
    lines = [f"configuration={config} euler_sum={report.euler_sum} valid={str(report.passed).lower()}",
             "admissible=" + ",".join(adm.names()),
             "rnrf=" + (",".join(map(str, rnrf)) if rnrf else "none")]
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def cmd_conic_classify(args) -> int:
    g = load_graph(args.graph)
    check = is_conic_class(g)
    if not check:
        payload = {"conic_class": False, "reason": check.reason}
        _emit(args, payload, [f"conic_class=false reason={check.reason}"])
        return 1
    t = classify_conic_fiber(g)
    _emit(args, {"conic_class": True, "type": str(t)}, [f"conic_class=true type={t}"])
    return 0


def cmd_verify_tables(args) -> int:
    report = verify_tables(_cases(args))
    payload = {"checks": [c.to_json() for c in report], "ok": all(c.ok for c in report)}
    lines = [c.line() for c in report]
    failed = [c for c in report if not c.ok]
    lines.append(f"checked={len(report)} failed={len(failed)} "
                 f"corrected={sum(c.status == 'corrected' for c in report)}")
    _emit(args, payload, lines)
    if failed:
        raise DataIntegrityError(f"{len(failed)} reference checks failed")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(add_help=False)
    top.add_argument("--json", action="store_true", help="machine-readable output")
    top.add_argument("--data", help="dataset JSON replacing the embedded one")
    # repeated on each subcommand; suppressed defaults keep a flag given before the command
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--data", default=argparse.SUPPRESS)

    p = _Parser(prog="resurf", description="Rational elliptic surface toolkit.", parents=[top])
    p.add_argument("--version", action="version", version=f"resurf {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("classify-weierstrass", parents=[common], help="fiber types of a Weierstrass model")
    s.add_argument("model", help="model JSON file")
    s.add_argument("--places", default="0,inf", help="comma separated places, e.g. 0,inf,-3/2")
    s.add_argument("--all", action="store_true", help="also report the full configuration")
    s.set_defaults(func=cmd_classify_weierstrass)

    s = sub.add_parser("fiber-info", parents=[common], help="attributes of a Kodaira type")
    s.add_argument("type")
    s.set_defaults(func=cmd_fiber_info)

    s = sub.add_parser("case-info", parents=[common], help="derived data of a dataset case")
    s.add_argument("--case", type=int, required=True)
    s.set_defaults(func=cmd_case_info)

    s = sub.add_parser("gaps", parents=[common], help="gap verdicts for k up to --max-k")
    s.add_argument("--case", type=int, required=True)
    s.add_argument("--max-k", type=int, default=20)
    s.add_argument("--min-k", type=int, default=0)
    s.set_defaults(func=cmd_gaps)

    s = sub.add_parser("density", parents=[common], help="share of gaps among 1..N")
    s.add_argument("--case", type=int, required=True)
    s.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10000])
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("one-gap-report", parents=[common], help="settle k=1 for every case")
    s.set_defaults(func=cmd_one_gap_report)

    s = sub.add_parser("conic-admissible", parents=[common], help="conic fiber types a configuration allows")
    s.add_argument("fibers", nargs="?", help="comma separated fiber types, e.g. II*,II or I7,II,3I1")
    s.add_argument("--rank", type=int, help="generic Mordell-Weil rank")
    s.add_argument("--case", type=int, help="dataset case supplying the rank; fibers must match its T")
    s.add_argument("--nontrivial-section", action="store_true")
    s.add_argument("--near-component", action="store_true")
    s.add_argument("--conjugate-sections", action="store_true")
    s.add_argument("--two-torsion", action="store_true")
    s.set_defaults(func=cmd_conic_admissible)

    s = sub.add_parser("conic-classify", parents=[common], help="fiber type of a divisor graph")
    s.add_argument("graph", help="graph JSON file")
    s.set_defaults(func=cmd_conic_classify)

    s = sub.add_parser("verify-tables", parents=[common], help="recompute every reference value")
    s.set_defaults(func=cmd_verify_tables)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "conic-admissible" and not args.fibers:
            raise UsageError("conic-admissible needs a fiber list")
        return args.func(args)
    except DataIntegrityError as exc:
        print(f"resurf: data integrity: {exc}", file=sys.stderr)
        return 2
    except ResurfError as exc:
        print(f"resurf: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 success, 1 structural or verification failure, 2 parse or usage
error.  A solver verdict of SAT or UNSAT is a successful run either way.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bks
from .bksfile import ParseError, parse_system, serialize_system
from .constraints import (
    backtrack_solve,
    brute_force,
    find_parity_certificate,
    verify_parity_certificate,
    TooLarge,
)
from .export import SupportTooLarge, export_cnf, export_dot
from .report import build_report, render_json, render_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Failure(Exception):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_system(text, name=Path(path).stem)


def cmd_catalog(args, out):
    if args.action == "list":
        for entry in bks.catalog():
            s = entry.system
            out.write(
                f"{entry.name}\t{entry.kind.value}\trays={len(s.rays)}\t"
                f"equations={len(s.equations)}\t{entry.notes}\n"
            )
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog show needs a NAME")
    try:
        entry = bks.get_entry(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    out.write(serialize_system(entry.system))
    return EXIT_OK


def cmd_verify(args, out):
    system = _load(args.file)
    failed = []
    for check in bks.verify_system(system):
        status = check.provenance or "FAILED"
        out.write(f"{check.label}\t{status}\t{check.detail}\n")
        if not check.ok:
            failed.append(check.label)
    if failed:
        raise Failure(f"unverified equations: {', '.join(failed)}")
    out.write("OK\n")
    return EXIT_OK


def cmd_solve(args, out):
    system = _load(args.file)
    try:
        outcome = brute_force(system) if args.method == "brute" else backtrack_solve(system)
    except TooLarge as exc:
        raise Failure(str(exc)) from None
    out.write(f"{outcome.verdict}\n")
    out.write(f"nodes explored: {outcome.nodes_explored}\n")
    if outcome.witness is not None:
        for n, r, v in zip(system.names, system.rays, outcome.witness):
            out.write(f"v({n}) = {v}\t{r}\n")
    return EXIT_OK


def cmd_parity(args, out):
    system = _load(args.file)
    cert = find_parity_certificate(system)
    if cert is None:
        out.write("no parity certificate\n")
        return EXIT_OK
    if not verify_parity_certificate(system, cert):
        raise Failure("found certificate does not verify")
    labels = cert.labels(system)
    total = sum(system.equations[i].constant for i in cert.equation_indices)
    out.write(f"certificate: {' '.join(labels)}\n")
    out.write(f"{len(labels)} equations, summed constant {total} (odd), all variables even\n")
    return EXIT_OK


def cmd_derive_state(args, out):
    system = _load(args.file)
    if system.state is None:
        raise Failure(f"{args.file} has no state line")
    reduced = bks.state_substitution(system)
    out.write(serialize_system(reduced))
    return EXIT_OK


def cmd_singlet_relation(args, out):
    system = _load(args.file)
    if args.equation:
        try:
            candidates = [system.equations[system.equation_index(args.equation)]]
        except IndexError as exc:
            raise UsageError(str(exc)) from None
    else:
        candidates = [
            eq for eq in system.equations
            if len(eq.lhs) == 4 and not eq.rhs and eq.constant == 1
        ]
    proven = 0
    for eq in candidates:
        try:
            _, trace = bks.build_singlet_relation(eq.lhs, eq.label)
        except (bks.NotFactorizable, bks.NotACrossProductFamily, ValueError) as exc:
            out.write(f"{eq.label}: not a singlet relation ({exc})\n")
            continue
        proven += 1
        out.write(f"{eq.label}: sum of {len(eq.lhs)} values = 1\n")
        for r, (p1, p2), (t1, t2) in zip(
            trace.input_rays, trace.factorizations, trace.substituted_terms
        ):
            out.write(f"  {r} = {p1.ray} x {p2.ray}  ->  v{t1.ray} v{t2.ray}\n")
        (a1, a2), (b1, b2) = trace.grouping
        out.write(f"  = [v{a1} + v{a2}] x [v{b1} + v{b2}] = 1\n")
    if args.equation and not proven:
        raise Failure(f"{args.equation} is not a singlet relation")
    if not proven:
        raise Failure("no equation is a singlet relation")
    return EXIT_OK


def cmd_count(args, out):
    system = _load(args.file)
    try:
        n = bks.count_propositions(system, args.mode)
    except bks.ModeMismatch as exc:
        raise Failure(str(exc)) from None
    out.write(f"{n}\n")
    return EXIT_OK


def cmd_lift(args, out):
    if args.zeros < 0:
        raise UsageError("--zeros must be nonnegative")
    system = _load(args.file)
    out.write(serialize_system(bks.lift_system(system, args.zeros)))
    return EXIT_OK


def cmd_export(args, out):
    system = _load(args.file)
    if args.format == "dot":
        out.write(export_dot(system))
    else:
        try:
            out.write(export_cnf(system))
        except SupportTooLarge as exc:
            raise Failure(str(exc)) from None
    return EXIT_OK


def cmd_report(args, out):
    system = _load(args.file)
    report = build_report(system)
    out.write(render_json(report) if args.json else render_text(report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bkscheck",
        description="Check value-assignment no-go proofs over rational rays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list or print built-in proofs")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="re-derive every equation from geometry")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="decide 0/1 satisfiability")
    p.add_argument("file")
    p.add_argument("--method", choices=["brute", "backtrack"], default="backtrack")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("parity", help="find a mod-2 contradiction certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("derive-state", help="eliminate values forced by the state line")
    p.add_argument("file")
    p.set_defaults(func=cmd_derive_state)

    p = sub.add_parser("singlet-relation", help="prove four-ray relations in the singlet state")
    p.add_argument("file")
    p.add_argument("--equation", help="label of the equation to prove")
    p.set_defaults(func=cmd_singlet_relation)

    p = sub.add_parser("count", help="count propositions used by a proof")
    p.add_argument("file")
    p.add_argument("--mode", required=True,
                   choices=["condition-d", "full", "full-with-state"])
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("lift", help="append zero components to every ray")
    p.add_argument("file")
    p.add_argument("--zeros", type=int, required=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("export", help="write DOT or DIMACS CNF")
    p.add_argument("file")
    p.add_argument("--format", choices=["dot", "cnf"], required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", help="full verification report")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except (ParseError, UsageError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Failure as exc:
        err.write(f"failed: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())

"""``gridsign`` command line.

Every command writes one JSON document to stdout, including on failure.
Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import complex as cx
from . import grid as grid_mod
from . import signs as sg
from .errors import AxiomViolation, GridSignError, MalformedInput
from .formats import (
    emit_report,
    gauge_to_json,
    parse_signs,
    signs_to_json,
    verification_to_json,
)
from .grid import DEFAULT_STATE_BOUND, GridDiagram, grid_states, parse_grid
from .homology import Z, Z2, bigraded_homology, compare_true_false, euler_characteristic, euler_to_json, homology_document, require_valid
from .parallel import thread_count


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    stdout: bytes
    stderr: str


class _Fail(Exception):
    """A command finished with a structured (non-exception) failure document."""

    def __init__(self, code: int, doc: dict, summary: str):
        self.code, self.doc, self.summary = code, doc, summary


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None


def _grid(path: str) -> GridDiagram:
    d = parse_grid(_read(path))
    grid_states(d.n)  # enforces the bound before any enumeration
    return d


def _signs(path: str, d: GridDiagram):
    s = parse_signs(_read(path))
    sg.check_total(d, s)
    return s


def _write(path: str | None, doc: dict) -> None:
    if path:
        Path(path).write_bytes(emit_report(doc))


def cmd_validate(args):
    d = parse_grid(_read(args.file))
    doc = {"valid": True, "grid": d.to_json(), "n": d.n, "m": d.m, "iota": [c + 1 for c in d.iota]}
    return doc, f"valid {d.n}x{d.n} grid, {d.m} component(s)"


def cmd_signs_solve(args):
    d = _grid(args.file)
    s = sg.solve_signs(d)
    doc = signs_to_json(s)
    _write(args.out, doc)
    return doc, f"solved {len(s.values)} rectangle signs"


def cmd_signs_verify(args):
    d = _grid(args.file)
    s = _signs(args.signs, d)
    report = sg.verify_axioms(d, s, args.convention or s.convention)
    doc = verification_to_json(report)
    if not report.ok:
        raise _Fail(2, doc, f"{len(report.violations)} violated constraint classes")
    return doc, f"all constraints hold ({report.convention} convention)"


def cmd_signs_twist(args):
    d = _grid(args.grid)
    s = _signs(args.signs, d)
    t = sg.twist(s)
    doc = signs_to_json(t)
    _write(args.out, doc)
    return doc, f"twisted to the {t.convention} convention"


def cmd_signs_gauge_diff(args):
    d = _grid(args.file)
    s1, s2 = _signs(args.s1, d), _signs(args.s2, d)
    if s1.convention != s2.convention:
        raise _Fail(2, {"equivalent": False, "reason": "conventions differ"}, "conventions differ")
    try:
        f = sg.gauge_difference(s1, s2)
    except sg.NotGaugeEquivalent as exc:
        raise _Fail(2, {"equivalent": False, "reason": str(exc)}, "not gauge equivalent") from None
    return {"equivalent": True, "gauge": gauge_to_json(f)}, "gauge equivalent"


def cmd_signs_count(args):
    d = _grid(args.file)
    system = sg.build_constraints(d)
    count = sg.count_solutions(d)
    kernel = count.bit_length() - 1
    doc = {
        "n": d.n,
        "variables": system.nvars,
        "constraints": len(system.rows),
        "rank": system.nvars - kernel,
        "kernel_dimension": kernel,
        "solutions": str(count),
    }
    return doc, f"2^{kernel} true sign assignments"


def cmd_complex_check(args):
    d = _grid(args.file)
    s = _signs(args.signs, d)
    c = cx.build_complex(d, s, args.version)
    dd = cx.d_squared(c)
    defects = cx.homogeneity_defects(c)
    n = d.n
    nonzero = [
        {
            "source": [v + 1 for v in x],
            "target": [v + 1 for v in z],
            "terms": [{"coef": coef, "u_exps": list(m[:n]), "v_exps": list(m[n:])} for m, coef in sorted(p.items())],
        }
        for x, row in dd.items()
        for z, p in row.items()
    ]
    doc = {
        "version": c.version,
        "generators": len(c.states),
        "entries": sum(len(col) for col in c.diff.values()),
        "d_squared_zero": not dd,
        "d_squared_nonzero": nonzero,
        "homogeneous": not defects,
    }
    if args.dump:
        _write(args.dump, cx.complex_to_json(c))
    if dd or defects:
        raise _Fail(2, doc, f"d^2 has {len(nonzero)} nonzero entries, {len(defects)} grading defects")
    return doc, "d^2 = 0 and the differential is homogeneous"


def _gated(args):
    d = _grid(args.file)
    s = _signs(args.signs, d)
    try:
        require_valid(d, s)
    except AxiomViolation as exc:
        raise _Fail(2, {"error": "AxiomViolation", "message": str(exc)}, str(exc)) from None
    return d, s


def cmd_homology(args):
    d, s = _gated(args)
    table = bigraded_homology(cx.build_complex(d, s, cx.TILDE), args.coefficients)
    doc = homology_document(d, s, table)
    _write(args.out, doc)
    return doc, f"total rank {table.total_rank}, torsion {'present' if table.has_torsion else 'none'}"


def cmd_euler(args):
    d, s = _gated(args)
    table = bigraded_homology(cx.build_complex(d, s, cx.TILDE), Z)
    chi = euler_to_json(euler_characteristic(table))
    return {"grid": d.to_json(), "convention": s.convention, "euler": chi}, f"euler characteristic {chi}"


def cmd_compare(args):
    d = _grid(args.file)
    if d.n > args.max_n:
        raise sg.BoundExceeded(f"n={d.n} exceeds --max-n {args.max_n}")
    doc = compare_true_false(d)
    if not (doc["z2_matches_oracle"] and doc["z2_matches_universal_coefficients"]):
        raise _Fail(3, doc, "Z/2 cross-checks disagree")
    return doc, "true and false homology agree" if doc["agree"] else "true and false homology DIFFER"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridsign", description="Sign assignments and integral grid homology.")
    p.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
    p.add_argument("--state-bound", type=int, default=DEFAULT_STATE_BOUND, help="largest n allowed for state enumeration")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    signs = sub.add_parser("signs").add_subparsers(dest="signs_command", required=True)
    s = signs.add_parser("solve")
    s.add_argument("file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_signs_solve)
    s = signs.add_parser("verify")
    s.add_argument("file")
    s.add_argument("signs")
    s.add_argument("--convention", choices=sg.CONVENTIONS)
    s.set_defaults(func=cmd_signs_verify)
    s = signs.add_parser("twist")
    s.add_argument("signs")
    s.add_argument("--grid", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_signs_twist)
    s = signs.add_parser("gauge-diff")
    s.add_argument("file")
    s.add_argument("s1")
    s.add_argument("s2")
    s.set_defaults(func=cmd_signs_gauge_diff)
    s = signs.add_parser("count")
    s.add_argument("file")
    s.set_defaults(func=cmd_signs_count)

    c = sub.add_parser("complex").add_subparsers(dest="complex_command", required=True)
    s = c.add_parser("check")
    s.add_argument("file")
    s.add_argument("signs")
    s.add_argument("--version", choices=(cx.FULL, cx.TILDE), default=cx.FULL)
    s.add_argument("--dump", help="also write the complex as JSON")
    s.set_defaults(func=cmd_complex_check)

    h = sub.add_parser("homology")
    h.add_argument("file")
    h.add_argument("signs")
    h.add_argument("--coefficients", choices=(Z, Z2), default=Z)
    h.add_argument("--out")
    h.set_defaults(func=cmd_homology)

    e = sub.add_parser("euler")
    e.add_argument("file")
    e.add_argument("signs")
    e.set_defaults(func=cmd_euler)

    cmp_ = sub.add_parser("compare")
    cmp_.add_argument("file")
    cmp_.add_argument("--max-n", type=int, default=cx.FULL_BOUND)
    cmp_.set_defaults(func=cmd_compare)
    return p


def run(argv: list[str]) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = 0 if exc.code == 0 else 1
        doc = {} if code == 0 else {"error": "UsageError", "message": "invalid command line"}
        return CommandOutcome(code, emit_report(doc), "")
    try:
        thread_count()
        if args.state_bound < 1:
            raise MalformedInput("--state-bound must be positive")
        grid_mod.state_bound = args.state_bound
        doc, summary = args.func(args)
        code = 0
    except _Fail as fail:
        doc, summary, code = fail.doc, fail.summary, fail.code
    except GridSignError as exc:
        code = exc.exit_code
        doc = {"error": type(exc).__name__, "message": str(exc)}
        summary = f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # noqa: BLE001 - anything else is an internal breach
        code = 3
        doc = {"error": "InternalError", "message": f"{type(exc).__name__}: {exc}"}
        summary = doc["message"]
    stderr = "" if args.quiet else summary + "\n"
    return CommandOutcome(code, emit_report(doc), stderr)


def main(argv: list[str] | None = None) -> int:
    outcome = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.buffer.write(outcome.stdout)
    sys.stdout.flush()
    if outcome.stderr:
        sys.stderr.write(outcome.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())

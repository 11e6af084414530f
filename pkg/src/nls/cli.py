"""Command-line front end (``nls``)."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .closure import (BUDGET_EXCEEDED, DEFAULT_MAX_ROUNDS, FINITE, INFINITE, check_general,
                      check_one_dim)
from .expr import ParseError
from .fields import lie_bracket
from .integrators import (EXACT, EXPLICIT, FLOAT, SEMI_IMPLICIT, MatrixRiccatiSystem,
                          RiccatiCoefficients, matrix_riccati_integrate, riccati_integrate)
from .io import (SchemaError, dumps_report, format_value, load_system, read_csv_trajectory)
from .polytope import newton_polytope
from .superposition import DegenerateConfiguration, RationalExpression, rule_variables, verify_rule

EXIT_CODES = {FINITE: 0, INFINITE: 10, BUDGET_EXCEEDED: 11}
EXIT_USAGE = 2
EXIT_FAILURE = 1


class UsageError(Exception):
    pass


def max_rounds_from(flag: int | None) -> int:
    """``--max-rounds`` beats ``NLS_MAX_ROUNDS`` beats the default."""
    if flag is not None:
        value = flag
    else:
        env = os.environ.get("NLS_MAX_ROUNDS")
        if env is None or env.strip() == "":
            return DEFAULT_MAX_ROUNDS
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"NLS_MAX_ROUNDS must be an integer, got {env!r}") from None
    if value < 1:
        raise UsageError("the round cap must be a positive integer")
    return value


def _load(path):
    try:
        return load_system(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _operator(doc, k: int, flag: str):
    n = len(doc.operators)
    if not 0 <= k < n:
        raise UsageError(f"{flag} {k} out of range; the document has {n} operators (0-based)")
    return doc.fields()[k]


def cmd_check(args) -> int:
    doc = _load(args.file)
    rounds = max_rounds_from(args.max_rounds)
    fields = doc.fields()
    if args.one_dim:
        if doc.dimension != 1:
            raise UsageError("--one-dim needs a single-variable system")
        report = check_one_dim(fields, rounds)
    else:
        report = check_general(fields, rounds)
    if args.json:
        print(dumps_report(report, document=doc))
    else:
        print(report.summary())
    return EXIT_CODES[report.verdict]


def cmd_bracket(args) -> int:
    doc = _load(args.file)
    X, Y = _operator(doc, args.i, "--i"), _operator(doc, args.j, "--j")
    Z = lie_bracket(X, Y)
    for name, comp in zip(doc.variables, Z.to_strings(doc.variables)):
        print(f"d/d{name}: {comp}")
    return 0


def cmd_polytope(args) -> int:
    doc = _load(args.file)
    X = _operator(doc, args.op, "--op")
    if X.is_zero():
        raise UsageError(f"operator {args.op} is zero and has no Newton polytope")
    for v in newton_polytope(X).sorted_vertices():
        print("(" + ",".join(str(c) for c in v) + ")")
    return 0


def _number(text: str, mode: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None
    return value if mode == EXACT else float(value)


def _emit_trajectory(traj, csv_path):
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(traj.to_csv())


def cmd_integrate_riccati(args) -> int:
    try:
        coeffs = RiccatiCoefficients.of(args.a0, args.a1, args.a2)
    except ParseError as exc:
        raise UsageError(f"bad coefficient: {exc}") from None
    traj = riccati_integrate(coeffs, _number(args.t0, args.mode), _number(args.x0, args.mode),
                             _number(args.h, args.mode), args.steps, args.scheme, args.mode)
    _emit_trajectory(traj, args.csv)
    t, x = traj.samples[-1]
    print(f"t={format_value(t)}, x={format_value(x)}")
    return 0


def cmd_integrate_matrix(args) -> int:
    try:
        with open(args.system, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.system}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.system} is not valid JSON: {exc}") from None
    missing = [key for key in ("A", "B", "C", "D", "W0") if key not in data]
    if missing:
        raise UsageError(f"matrix system is missing {', '.join(missing)}")
    try:
        system = MatrixRiccatiSystem(data["A"], data["B"], data["C"], data["D"])
    except (ValueError, ParseError) as exc:
        raise UsageError(str(exc)) from None
    W0 = [[_number(str(v), args.mode) for v in row] for row in data["W0"]]
    t0 = args.t0 if args.t0 is not None else str(data.get("t0", "0"))
    traj = matrix_riccati_integrate(system, _number(t0, args.mode), W0,
                                    _number(args.h, args.mode), args.steps, args.mode)
    _emit_trajectory(traj, args.csv)
    t, W = traj.samples[-1]
    rows = "; ".join(", ".join(format_value(v) for v in row) for row in W.tolist())
    print(f"t={format_value(t)}, W=[{rows}]")
    return 0


def cmd_cross_ratio(args) -> int:
    from .superposition import cross_ratio

    series = []
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                header, rows = read_csv_trajectory(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from None
        if len(header) != 2:
            raise UsageError(f"{path}: expected a scalar trajectory with header t,x")
        series.append(rows)
    if len({len(s) for s in series}) != 1:
        raise UsageError("trajectories have different lengths")
    print("t,cross_ratio")
    values = []
    for samples in zip(*series):
        ts = {s[0] for s in samples}
        if len(ts) != 1:
            raise UsageError(f"time grids differ: {sorted(map(str, ts))}")
        try:
            cr = cross_ratio(*(s[1] for s in samples))
        except DegenerateConfiguration as exc:
            print(f"{format_value(samples[0][0])},undefined ({exc})")
            continue
        values.append(cr)
        print(f"{format_value(samples[0][0])},{format_value(cr)}")
    constant = len(set(values)) <= 1
    print(("constant" if constant else "varies") + f" over {len(values)} samples", file=sys.stderr)
    return 0


def cmd_verify_rule(args) -> int:
    doc = _load(args.file)
    if doc.dimension != 1:
        raise UsageError("verify-rule needs a single-variable system")
    try:
        rule = RationalExpression.parse(args.rule, rule_variables(args.copies))
    except ParseError as exc:
        raise UsageError(f"bad rule: {exc}") from None
    verdict = verify_rule(rule, doc.fields(), args.copies)
    names = rule_variables(args.copies)
    for label, r in zip(doc.labels(), verdict.residuals):
        print(f"{label}: residual {r.to_string(names)}")
    print("PASS" if verdict.passed else "FAIL")
    return 0 if verdict.passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nls", description=__doc__)
    p.add_argument("--version", action="version", version=f"nls {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide finite-dimensionality of the operator algebra")
    c.add_argument("file")
    c.add_argument("--one-dim", action="store_true", help="use the degree criterion (d = 1)")
    c.add_argument("--json", action="store_true", help="emit the full JSON report")
    c.add_argument("--max-rounds", type=int, default=None,
                   help="round cap (overrides NLS_MAX_ROUNDS; default 25)")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bracket", help="print the commutator of two operators (0-based)")
    b.add_argument("file")
    b.add_argument("--i", type=int, required=True)
    b.add_argument("--j", type=int, required=True)
    b.set_defaults(func=cmd_bracket)

    q = sub.add_parser("polytope", help="print the Newton polytope vertices of one operator")
    q.add_argument("file")
    q.add_argument("--op", type=int, required=True)
    q.set_defaults(func=cmd_polytope)

    integ = sub.add_parser("integrate", help="run a Riccati difference scheme")
    isub = integ.add_subparsers(dest="kind", required=True)

    def common(sp):
        sp.add_argument("--h", required=True, help="step size, e.g. 1/10")
        sp.add_argument("--steps", type=int, required=True, help="number of steps")
        sp.add_argument("--mode", choices=[EXACT, FLOAT], default=EXACT)
        sp.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV")

    r = isub.add_parser("riccati", help="x' = a0(t) + a1(t) x + a2(t) x^2")
    for name in ("a0", "a1", "a2"):
        r.add_argument(f"--{name}", default="0", help="coefficient in t, e.g. 1/t")
    r.add_argument("--x0", required=True, help="initial value")
    r.add_argument("--t0", default="0", help="initial time")
    r.add_argument("--scheme", choices=[EXPLICIT, SEMI_IMPLICIT], default=SEMI_IMPLICIT)
    common(r)
    r.set_defaults(func=cmd_integrate_riccati)

    m = isub.add_parser("matrix", help="W' = A + BW + WC + WDW")
    m.add_argument("--system", required=True, help="JSON with A, B, C, D, W0 and optional t0")
    m.add_argument("--t0", default=None)
    common(m)
    m.set_defaults(func=cmd_integrate_matrix)

    x = sub.add_parser("cross-ratio", help="cross-ratio of four scalar trajectory CSV files")
    x.add_argument("files", nargs=4, help="CSV files with a t,x header")
    x.set_defaults(func=cmd_cross_ratio)

    v = sub.add_parser("verify-rule", help="check a candidate superposition rule")
    v.add_argument("file")
    v.add_argument("--rule", required=True, help="rational expression in x, x1, ..., xm")
    v.add_argument("--copies", type=int, required=True, help="number of copies m")
    v.set_defaults(func=cmd_verify_rule)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemaError) as exc:
        print(f"nls: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroDivisionError as exc:
        print(f"nls: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

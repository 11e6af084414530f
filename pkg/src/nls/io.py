"""Text front end: polynomial parsing, system and report JSON, trajectory CSV."""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from . import expr as _expr
from .algebra import LaurentPolynomial, TimeExpression, polynomial_from_ast
from .closure import (BUDGET_EXCEEDED, FINITE, INFINITE, ConditionRecord, DecisionReport,
                      DegreeWitness, RoundSummary, WitnessPair)
from .expr import ParseError
from .fields import VectorField, span_of


class SchemaError(ValueError):
    """A system document violates the schema; ``problems`` lists every violation."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid system document:\n  " + "\n  ".join(self.problems))


def parse_polynomial(text: str, variables: Sequence[str], allow_laurent: bool = False) -> LaurentPolynomial:
    """Parse ``text`` into a polynomial over ``variables``.

    Negative exponents are rejected unless ``allow_laurent`` is set.
    Unknown names and syntax errors raise :class:`ParseError`.
    """
    node = _expr.parse(text, names=variables)
    try:
        return polynomial_from_ast(node, list(variables), allow_laurent=allow_laurent)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), 1, 1) from None


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return format_rational(v)


@dataclass
class OperatorSpec:
    components: list[str]
    label: str | None = None


@dataclass
class SystemDocument:
    variables: list[str]
    operators: list[OperatorSpec]
    allow_laurent: bool = False
    time_coefficients: list[TimeExpression] | None = None

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def fields(self) -> list[VectorField]:
        return [VectorField([parse_polynomial(c, self.variables, self.allow_laurent)
                             for c in op.components]) for op in self.operators]

    def labels(self) -> list[str]:
        return [op.label or f"X{k + 1}" for k, op in enumerate(self.operators)]

    def to_dict(self) -> dict:
        out = {"variables": list(self.variables),
               "operators": [({"label": op.label} if op.label else {}) | {"components": op.components}
                             for op in self.operators]}
        if self.allow_laurent:
            out["allow_laurent"] = True
        if self.time_coefficients is not None:
            out["time_coefficients"] = [str(e) for e in self.time_coefficients]
        return out

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def parse_system(text: str | dict) -> SystemDocument:
    """Validate a system document, collecting every schema violation."""
    if isinstance(text, str):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError([f"not valid JSON: {exc}"]) from None
    else:
        data = text
    problems: list[str] = []
    if not isinstance(data, dict):
        raise SchemaError(["top level must be an object"])
    unknown = set(data) - {"variables", "allow_laurent", "operators", "time_coefficients"}
    for key in sorted(unknown):
        problems.append(f"unknown key {key!r}")
    variables = data.get("variables")
    if not isinstance(variables, list) or not variables or \
            not all(isinstance(v, str) and v.isidentifier() for v in variables):
        problems.append("'variables' must be a non-empty list of identifiers")
        variables = None
    elif len(set(variables)) != len(variables):
        problems.append("'variables' contains duplicates")
    allow = data.get("allow_laurent", False)
    if not isinstance(allow, bool):
        problems.append("'allow_laurent' must be a boolean")
        allow = False
    ops = data.get("operators")
    specs: list[OperatorSpec] = []
    if not isinstance(ops, list) or not ops:
        problems.append("'operators' must be a non-empty list")
        ops = []
    for k, op in enumerate(ops):
        where = f"operators[{k}]"
        if not isinstance(op, dict):
            problems.append(f"{where} must be an object")
            continue
        for key in sorted(set(op) - {"label", "components"}):
            problems.append(f"{where}: unknown key {key!r}")
        label = op.get("label")
        if label is not None and not isinstance(label, str):
            problems.append(f"{where}.label must be a string")
        comps = op.get("components")
        if not isinstance(comps, list) or not all(isinstance(c, str) for c in comps):
            problems.append(f"{where}.components must be a list of strings")
            continue
        if variables is not None:
            if len(comps) != len(variables):
                problems.append(f"{where} has {len(comps)} components for "
                                f"{len(variables)} variables")
            for i, c in enumerate(comps):
                try:
                    parse_polynomial(c, variables, allow)
                except ParseError as exc:
                    problems.append(f"{where}.components[{i}]: {exc}")
        specs.append(OperatorSpec(list(comps), label))
    times = data.get("time_coefficients")
    parsed_times = None
    if times is not None:
        if not isinstance(times, list) or not all(isinstance(s, str) for s in times):
            problems.append("'time_coefficients' must be a list of strings")
        else:
            parsed_times = []
            for i, s in enumerate(times):
                try:
                    parsed_times.append(TimeExpression.parse(s))
                except ParseError as exc:
                    problems.append(f"time_coefficients[{i}]: {exc}")
    if problems:
        raise SchemaError(problems)
    return SystemDocument(list(variables), specs, allow, parsed_times)


def load_system(path) -> SystemDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# --------------------------------------------------------------------------
# reports

_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
_RATIONAL_OR_NULL = {"anyOf": [_RATIONAL, {"type": "null"}]}
_INTS = {"type": "array", "items": {"type": "integer"}}
_RATIONALS = {"type": "array", "items": _RATIONAL}
_FIELDS = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["tool", "version", "verdict", "algorithm", "max_rounds", "rounds", "input"],
    "properties": {
        "tool": {"const": "nls"},
        "version": {"type": "string"},
        "verdict": {"enum": [FINITE, INFINITE, BUDGET_EXCEEDED]},
        "algorithm": {"enum": ["degree", "newton-polytope"]},
        "max_rounds": {"type": "integer", "minimum": 0},
        "round": {"type": "integer", "minimum": 0},
        "input_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "rounds": {"type": "array", "items": {
            "type": "object", "required": ["round", "operators", "dimension"],
            "properties": {k: {"type": "integer"} for k in ("round", "operators", "dimension")}}},
        "input": {"type": "object", "required": ["variables", "operators"], "properties": {
            "variables": {"type": "array", "items": {"type": "string"}},
            "operators": _FIELDS}},
        "dimension": {"type": "integer", "minimum": 0},
        "basis": _FIELDS,
        "generators": _FIELDS,
        "witness": {"oneOf": [
            {"type": "object",
             "required": ["kind", "i", "j", "v", "u", "V", "U", "conditions", "operators"],
             "properties": {
                 "kind": {"const": "vertex-pair"}, "i": {"type": "integer"},
                 "j": {"type": "integer"}, "v": _INTS, "u": _INTS, "V": _RATIONALS,
                 "U": _RATIONALS, "operators": _FIELDS,
                 "conditions": {
                     "type": "object",
                     "required": ["i", "ii", "iii", "iv", "v", "norm_sq_sum", "norm_sq_v",
                                  "norm_sq_u", "K", "uV", "vU", "uU", "vV", "s1", "s2"],
                     "properties": {
                         **{k: {"type": "boolean"} for k in ("i", "ii", "iii", "iv", "v")},
                         **{k: {"type": "integer"} for k in
                            ("norm_sq_sum", "norm_sq_v", "norm_sq_u")},
                         "K": _RATIONALS,
                         **{k: _RATIONAL for k in ("uV", "vU", "uU", "vV")},
                         "s1": _RATIONAL_OR_NULL, "s2": _RATIONAL_OR_NULL}}}},
            {"type": "object", "required": ["kind", "i", "j", "degrees", "operators"],
             "properties": {"kind": {"const": "degrees"}, "i": {"type": "integer"},
                            "j": {"type": "integer"}, "degrees": _INTS,
                            "operators": _FIELDS}},
        ]},
    },
    "allOf": [
        {"if": {"properties": {"verdict": {"const": FINITE}}},
         "then": {"required": ["dimension", "basis", "generators"]}},
        {"if": {"properties": {"verdict": {"const": INFINITE}}},
         "then": {"required": ["witness"]}},
    ],
}


def _vec(v) -> list[str]:
    return [format_rational(c) for c in v]


def _unvec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in v)


def _opt(q):
    return None if q is None else format_rational(q)


def _conditions_to_dict(rec: ConditionRecord) -> dict:
    return {
        "i": rec.norm_growth, "ii": rec.minkowski_vertex, "iii": rec.nonzero_bracket,
        "iv": rec.chain_u, "v": rec.chain_v,
        "norm_sq_sum": rec.norm_sq_sum, "norm_sq_v": rec.norm_sq_v, "norm_sq_u": rec.norm_sq_u,
        "K": _vec(rec.K), "uV": format_rational(rec.uV), "vU": format_rational(rec.vU),
        "uU": format_rational(rec.uU), "vV": format_rational(rec.vV),
        "s1": _opt(rec.s1), "s2": _opt(rec.s2),
    }


def _conditions_from_dict(d: dict) -> ConditionRecord:
    fr = lambda s: None if s is None else Fraction(s)
    return ConditionRecord(d["i"], d["ii"], d["iii"], d["iv"], d["v"], d["norm_sq_sum"],
                           d["norm_sq_v"], d["norm_sq_u"], _unvec(d["K"]), Fraction(d["uV"]),
                           Fraction(d["vU"]), Fraction(d["uU"]), Fraction(d["vV"]),
                           fr(d["s1"]), fr(d["s2"]))


def _fields_to_json(fields, names) -> list[list[str]]:
    return [X.to_strings(names) for X in fields]


def _fields_from_json(data, names) -> list[VectorField]:
    return [VectorField([parse_polynomial(c, names, allow_laurent=True) for c in comps])
            for comps in data]


def report_to_dict(report: DecisionReport, variables: Sequence[str] | None = None,
                   document: SystemDocument | None = None) -> dict:
    d = report.operators[0].dimension
    names = list(variables) if variables is not None else (
        document.variables if document is not None else [f"x{k + 1}" for k in range(d)])
    out: dict = {
        "tool": "nls",
        "version": __version__,
        "verdict": report.verdict,
        "algorithm": report.algorithm,
        "max_rounds": report.max_rounds,
        "rounds": [{"round": r.round, "operators": r.operators, "dimension": r.dimension}
                   for r in report.rounds],
        "input": {"variables": names, "operators": _fields_to_json(report.operators, names)},
    }
    if document is not None:
        out["input_hash"] = document.digest()
    if report.round is not None:
        out["round"] = report.round
    if report.verdict == FINITE:
        out["dimension"] = report.dimension
        out["basis"] = _fields_to_json(report.basis.fields(), names)
        out["generators"] = _fields_to_json(report.generators, names)
    if report.verdict == INFINITE:
        w = report.witness
        if isinstance(w, WitnessPair):
            out["witness"] = {"kind": "vertex-pair", "i": w.i, "j": w.j, "v": list(w.v),
                              "u": list(w.u), "V": _vec(w.V), "U": _vec(w.U),
                              "conditions": _conditions_to_dict(w.conditions)}
        else:
            out["witness"] = {"kind": "degrees", "i": w.i, "j": w.j, "degrees": list(w.degrees)}
        out["witness"]["operators"] = _fields_to_json(report.witness_operators, names)
    return out


def report_from_dict(data: dict) -> DecisionReport:
    names = data["input"]["variables"]
    report = DecisionReport(
        verdict=data["verdict"], algorithm=data["algorithm"],
        operators=_fields_from_json(data["input"]["operators"], names),
        rounds=[RoundSummary(r["round"], r["operators"], r["dimension"]) for r in data["rounds"]],
        round=data.get("round"), max_rounds=data["max_rounds"])
    if report.verdict == FINITE:
        report.dimension = data["dimension"]
        report.basis = span_of(_fields_from_json(data["basis"], names))
        report.generators = _fields_from_json(data["generators"], names)
    elif report.verdict == INFINITE:
        w = data["witness"]
        if w["kind"] == "vertex-pair":
            report.witness = WitnessPair(w["i"], w["j"], tuple(w["v"]), tuple(w["u"]),
                                         _unvec(w["V"]), _unvec(w["U"]),
                                         _conditions_from_dict(w["conditions"]))
        else:
            report.witness = DegreeWitness(w["i"], w["j"], tuple(w["degrees"]))
        report.witness_operators = _fields_from_json(w["operators"], names)
    elif report.verdict != BUDGET_EXCEEDED:
        raise ValueError(f"unknown verdict {report.verdict!r}")
    return report


def dumps_report(report: DecisionReport, document: SystemDocument | None = None) -> str:
    return json.dumps(report_to_dict(report, document=document), indent=2, sort_keys=True)


def loads_report(text: str) -> DecisionReport:
    return report_from_dict(json.loads(text))


# --------------------------------------------------------------------------
# trajectories


def _state_cells(state) -> list:
    arr = np.asarray(state, dtype=object)
    return list(arr.flat) if arr.ndim else [state]


def trajectory_to_csv(traj) -> str:
    """CSV with header ``t,x`` (scalar) or ``t,w11,w12,...`` (matrix, row-major)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    first = traj.samples[0][1]
    arr = np.asarray(first, dtype=object)
    if arr.ndim == 0:
        header = ["t", "x"]
    else:
        header = ["t"] + [f"w{i + 1}{j + 1}" for i in range(arr.shape[0]) for j in range(arr.shape[1])]
    writer.writerow(header)
    for t, state in traj.samples:
        writer.writerow([format_value(t)] + [format_value(v) for v in _state_cells(state)])
    return buf.getvalue()


def _parse_number(s: str):
    s = s.strip()
    if any(ch in s for ch in ".eEn") and "/" not in s:
        return float(s)
    return Fraction(s)


def read_csv_trajectory(text: str) -> tuple[list[str], list[tuple]]:
    """Rows as ``(t, values...)`` with Fractions for ``p/q`` cells and floats otherwise."""
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or not rows[0] or rows[0][0] != "t":
        raise ValueError("trajectory CSV must start with a 't,...' header")
    return rows[0], [tuple(_parse_number(c) for c in row) for row in rows[1:] if row]

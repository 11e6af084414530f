import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from nls import __version__
from nls.closure import BUDGET_EXCEEDED, check_general, check_one_dim, verify_finite
from nls.fields import VectorField
from nls.integrators import MatrixRiccatiSystem, RiccatiCoefficients, matrix_riccati_integrate, \
    riccati_integrate
from nls.io import (SchemaError, dumps_report, load_system, loads_report, parse_system,
                    read_csv_trajectory, report_from_dict, report_to_dict, trajectory_to_csv)

import randgen

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def test_three_variable_document():
    doc = load_system(DATA / "three_variable.json")
    assert doc.variables == ["u", "v", "w"] and len(doc.operators) == 2
    X1, X2 = doc.fields()
    assert X2 == VectorField.from_strings(["u*w", "u", "w^2/2"], ["u", "v", "w"])
    assert X1.components[0].terms == {(0, 2, 2): Fraction(1, 2), (2, 0, 0): -2}


def test_riccati_document():
    doc = parse_system('{"variables": ["x1"], "operators": '
                       '[{"components": ["1"]}, {"components": ["x1"]}, {"components": ["x1^2"]}]}')
    fields = doc.fields()
    assert [f.dimension for f in fields] == [1, 1, 1]
    assert [f.components[0].degree() for f in fields] == [0, 1, 2]
    assert doc.labels() == ["X1", "X2", "X3"]


def test_component_count_mismatch():
    with pytest.raises(SchemaError, match="2 components for 3 variables"):
        parse_system({"variables": ["a", "b", "c"], "operators": [{"components": ["a", "b"]}]})


def test_all_schema_problems_reported():
    bad = {
        "variables": ["a", "b"],
        "operators": [{"components": ["a"]}, {"components": ["a + ", "b"]},
                      {"label": 3, "components": ["c", "1"]}, "oops"],
        "allow_laurent": "yes",
        "extra": 1,
    }
    with pytest.raises(SchemaError) as info:
        parse_system(bad)
    problems = info.value.problems
    assert len(problems) >= 6
    text = "\n".join(problems)
    for fragment in ("extra", "allow_laurent", "operators[0]", "operators[1]",
                     "operators[2].label", "operators[2].components[0]", "operators[3]"):
        assert fragment in text


def test_invalid_json():
    with pytest.raises(SchemaError, match="not valid JSON"):
        parse_system("{")


def test_laurent_gate():
    doc = {"variables": ["x"], "operators": [{"components": ["x^-1"]}]}
    with pytest.raises(SchemaError, match="allow_laurent"):
        parse_system(doc)
    doc["allow_laurent"] = True
    assert parse_system(doc).fields()[0].components[0].terms == {(-1,): 1}


def test_time_coefficients_are_metadata():
    doc = parse_system({"variables": ["x"], "operators": [{"components": ["x"]}],
                        "time_coefficients": ["1/t"]})
    assert doc.time_coefficients[0].evaluate(Fraction(4)) == Fraction(1, 4)
    with pytest.raises(SchemaError, match="time_coefficients"):
        parse_system({"variables": ["x"], "operators": [{"components": ["x"]}],
                      "time_coefficients": ["sin(t)"]})


def test_digest_is_stable():
    a = parse_system({"variables": ["x"], "operators": [{"components": ["x"], "label": "A"}]})
    b = parse_system('{"operators": [{"label": "A", "components": ["x"]}], "variables": ["x"]}')
    assert a.digest() == b.digest() and len(a.digest()) == 64


# ---- reports


def _round_trip(report, doc=None):
    text = dumps_report(report, doc)
    back = loads_report(text)
    assert dumps_report(back, doc) == text
    return json.loads(text), back


def test_finite_report_round_trip():
    doc = load_system(DATA / "riccati.json")
    data, back = _round_trip(check_general(doc.fields()), doc)
    assert data["verdict"] == "finite" and data["dimension"] == 3
    assert data["version"] == __version__ and data["input_hash"] == doc.digest()
    assert verify_finite(back)


def test_infinite_report_round_trip():
    doc = load_system(DATA / "cubic.json")
    data, back = _round_trip(check_general(doc.fields()), doc)
    w = data["witness"]
    assert (w["i"], w["j"], w["v"], w["u"], w["V"], w["U"]) == (0, 1, [1], [2], ["1"], ["1"])
    assert all(w["conditions"][k] for k in ("i", "ii", "iii", "iv", "v"))
    assert back.revalidate_witness()


def test_degree_report_round_trip():
    doc = load_system(DATA / "cubic.json")
    data, back = _round_trip(check_one_dim(doc.fields()), doc)
    assert data["witness"]["kind"] == "degrees" and back.revalidate_witness()


def test_budget_report_round_trip():
    ops = [VectorField.from_strings(["1", "0"], ["a", "b"]),
           VectorField.from_strings(["0", "a^3"], ["a", "b"])]
    data, back = _round_trip(check_general(ops, max_rounds=1))
    assert data["verdict"] == BUDGET_EXCEEDED and back.verdict == BUDGET_EXCEEDED


def test_random_reports_round_trip():
    rng = random.Random(51)
    for _ in range(40):
        ops = [randgen.nonzero_field(rng, 2, terms=2, lo=-1, hi=2) for _ in range(2)]
        report = check_general(ops, 3)
        back = report_from_dict(report_to_dict(report))
        assert report_to_dict(back) == report_to_dict(report)
        if report.verdict == "infinite":
            assert back.revalidate_witness()


def test_report_rejects_unknown_verdict():
    data = report_to_dict(check_general([VectorField.from_strings(["x"], ["x"])]))
    data["verdict"] = "maybe"
    with pytest.raises(ValueError):
        report_from_dict(data)


# ---- CSV


def test_csv_scalar_exact():
    traj = riccati_integrate(RiccatiCoefficients.of(0, 1, "1/t"), 1, 1, Fraction(1, 10), 2)
    text = trajectory_to_csv(traj)
    assert text.splitlines()[0] == "t,x"
    header, rows = read_csv_trajectory(text)
    assert rows == [tuple(s) for s in traj.samples]


def test_csv_float_digits():
    traj = riccati_integrate(RiccatiCoefficients.of(0, 1, "1/t"), 1, 1, Fraction(1, 10), 1,
                             mode="float")
    line = trajectory_to_csv(traj).splitlines()[2]
    assert line == f"{1.1:.17g},{11 / 9:.17g}"
    assert read_csv_trajectory(trajectory_to_csv(traj))[1][1] == (1.1000000000000001, 11 / 9)


def test_csv_matrix_header():
    sys_ = MatrixRiccatiSystem([[0, 1]], [[0]], [[0, 0], [0, 0]], [[0], [0]])
    text = matrix_riccati_integrate(sys_, 0, [[1, 2]], Fraction(1, 2), 1).to_csv()
    assert text == "t,w11,w12\n0,1,2\n1/2,1,5/2\n"


def test_csv_header_required():
    with pytest.raises(ValueError):
        read_csv_trajectory("x,t\n1,2\n")


def test_reports_match_json_schema():
    jsonschema = pytest.importorskip("jsonschema")
    from nls.io import REPORT_SCHEMA

    jsonschema.Draft202012Validator.check_schema(REPORT_SCHEMA)
    for name in ("riccati.json", "cubic.json", "three_variable.json"):
        doc = load_system(DATA / name)
        report = check_general(doc.fields())
        jsonschema.validate(json.loads(dumps_report(report, doc)), REPORT_SCHEMA)
    degree = check_one_dim(load_system(DATA / "cubic.json").fields())
    jsonschema.validate(report_to_dict(degree), REPORT_SCHEMA)
    broken = report_to_dict(degree)
    del broken["witness"]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(broken, REPORT_SCHEMA)

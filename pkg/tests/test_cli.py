import json
import shutil
import subprocess
from pathlib import Path

import pytest

from nls.cli import main
from nls.io import loads_report, read_csv_trajectory

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_finite(capsys):
    code, out, _ = run(capsys, "check", DATA / "riccati.json")
    assert (code, out.strip()) == (0, "FINITE, dim 3")


def test_check_infinite_witness(capsys):
    code, out, _ = run(capsys, "check", DATA / "cubic.json")
    assert (code, out.strip()) == (10, "INFINITE (witness v=(1), u=(2))")


def test_check_one_dim_flag(capsys):
    code, out, _ = run(capsys, "check", "--one-dim", DATA / "cubic.json")
    assert (code, out.strip()) == (10, "INFINITE (degrees 2 and 3)")


def test_check_one_dim_needs_line_system(capsys):
    code, _, err = run(capsys, "check", "--one-dim", DATA / "three_variable.json")
    assert code == 2 and "single-variable" in err


NILPOTENT = ('{"variables": ["a", "b"], "operators": [{"components": ["1", "0"]}, '
             '{"components": ["0", "a^3"]}]}')


def test_check_budget(capsys, tmp_path):
    doc = tmp_path / "nilpotent.json"
    doc.write_text(NILPOTENT)
    code, out, _ = run(capsys, "check", "--max-rounds", "1", doc)
    assert code == 11 and out.startswith("BUDGET EXCEEDED")
    code, _, err = run(capsys, "check", "--max-rounds", "0", doc)
    assert code == 2 and "positive" in err


def test_env_round_cap(capsys, tmp_path, monkeypatch):
    doc = tmp_path / "nilpotent.json"
    doc.write_text(NILPOTENT)
    monkeypatch.setenv("NLS_MAX_ROUNDS", "2")
    assert run(capsys, "check", doc)[0] == 11
    # the flag beats the environment
    assert run(capsys, "check", "--max-rounds", "6", doc) == (0, "FINITE, dim 5\n", "")
    monkeypatch.setenv("NLS_MAX_ROUNDS", "lots")
    code, _, err = run(capsys, "check", doc)
    assert code == 2 and "NLS_MAX_ROUNDS" in err


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--json", DATA / "cubic.json")
    assert code == 10
    report = loads_report(out)
    assert report.revalidate_witness()
    assert json.loads(out)["input_hash"]


def test_exit_codes_follow_verdict(capsys):
    for name in ("riccati.json", "cubic.json", "three_variable.json",
                 "three_variable_as_printed.json"):
        code, out, _ = run(capsys, "check", "--json", DATA / name)
        verdict = json.loads(out)["verdict"]
        assert code == {"finite": 0, "infinite": 10, "budget-exceeded": 11}[verdict]


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["check"])
    assert info.value.code == 2
    code, _, err = run(capsys, "check", tmp_path / "missing.json")
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"variables": ["x", "y"], "operators": [{"components": ["x"]}]}')
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "1 components for 2 variables" in err


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", DATA / "riccati.json", "--i", "0", "--j", "2")
    assert code == 0 and out.strip() == "d/dx: 2*x"
    code, _, err = run(capsys, "bracket", DATA / "riccati.json", "--i", "0", "--j", "7")
    assert code == 2 and "out of range" in err


def test_polytope(capsys):
    code, out, _ = run(capsys, "polytope", DATA / "three_variable.json", "--op", "1")
    # u*w d/du + u d/dv + (w^2/2) d/dw  ->  exponents (0,0,1), (1,-1,0), (0,0,1)
    assert (code, out.split()) == (0, ["(0,0,1)", "(1,-1,0)"])


def test_integrate_riccati_example(capsys):
    code, out, _ = run(capsys, "integrate", "riccati", "--a0", "0", "--a1", "1", "--a2", "1/t",
                       "--x0", "1", "--t0", "1", "--h", "1/10", "--steps", "1",
                       "--scheme", "semi-implicit", "--mode", "exact")
    assert (code, out.strip()) == (0, "t=11/10, x=11/9")


def test_integrate_riccati_csv(capsys, tmp_path):
    path = tmp_path / "x.csv"
    run(capsys, "integrate", "riccati", "--a2", "1/t", "--a1", "1", "--x0", "1", "--t0", "1",
        "--h", "1/10", "--steps", "3", "--csv", path)
    header, rows = read_csv_trajectory(path.read_text())
    assert header == ["t", "x"] and len(rows) == 4


def test_integrate_riccati_pole(capsys):
    code, _, err = run(capsys, "integrate", "riccati", "--a2", "1", "--x0", "1", "--h", "1",
                       "--steps", "1")
    assert code == 1 and "step 0" in err


def test_integrate_matrix(capsys, tmp_path):
    system = tmp_path / "m.json"
    system.write_text(json.dumps({"A": [["0"]], "B": [["0"]], "C": [["0"]], "D": [["1"]],
                                  "W0": [["1"]]}))
    code, out, _ = run(capsys, "integrate", "matrix", "--system", system, "--h", "1/2",
                       "--steps", "1")
    assert (code, out.strip()) == (0, "t=1/2, W=[2]")


def test_cross_ratio_command(capsys, tmp_path):
    paths = []
    for k, x0 in enumerate(["1/3", "2/3", "4/3", "7/3"]):
        p = tmp_path / f"x{k}.csv"
        run(capsys, "integrate", "riccati", "--a1", "1", "--a2", "1/t", "--t0", "1",
            "--x0", x0, "--h", "1/10", "--steps", "5", "--csv", p)
        paths.append(p)
    code, out, err = run(capsys, "cross-ratio", *paths)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,cross_ratio" and len(lines) == 7
    assert len({line.split(",")[1] for line in lines[1:]}) == 1
    assert "constant" in err


def test_verify_rule_command(capsys):
    rule = "((x - x1)/(x1 - x2)) / ((x - x3)/(x2 - x3))"
    code, out, _ = run(capsys, "verify-rule", DATA / "riccati.json", "--rule", rule,
                       "--copies", "3")
    assert code == 0 and out.strip().endswith("PASS")
    code, out, _ = run(capsys, "verify-rule", DATA / "riccati.json", "--rule", "x*x1",
                       "--copies", "3")
    assert code == 1 and out.strip().endswith("FAIL")


@pytest.mark.skipif(shutil.which("nls") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["nls", "check", str(DATA / "riccati.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "FINITE, dim 3"

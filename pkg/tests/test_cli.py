import json
import subprocess
import sys

import pytest

from redspider.cli import run_command
from redspider.rainworm import delta_halt


def call(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = call(capsys, *argv)
    return code, json.loads(out)


def test_simulate_builtin(capsys):
    code, rep = report(capsys, "simulate", "--machine", "halt")
    assert code == 0 and rep["result"]["k"] == 1
    assert rep["symbols"]["alpha"] == 6


def test_simulate_machine_file(capsys, tmp_path):
    f = tmp_path / "delta_halt.json"
    f.write_text(json.dumps(delta_halt().to_json()))
    trace = tmp_path / "trace.txt"
    code, rep = report(capsys, "simulate", "--machine", str(f), "--trace-out", str(trace))
    assert code == 0 and rep["result"]["k"] == 1
    assert str(f) in rep["inputs"]
    assert trace.read_text().splitlines() == ["alpha eta11", "alpha gamma1 eta0"]


def test_budget_exhaustion_exit_code(capsys):
    code, rep = report(capsys, "simulate", "--machine", "loop", "--budget", "30")
    assert code == 3 and rep["result"]["halted"] is False


def test_separation_demo(capsys):
    code, rep = report(capsys, "separation-demo", "--t", "2", "--tprime", "3")
    assert code == 0 and rep["result"]["pattern_found"] is True


def test_reports_are_byte_identical(capsys):
    a = call(capsys, "truncate-M", "--depth", "5")
    b = call(capsys, "truncate-M", "--depth", "5")
    assert a == b and a[0] == 0


def test_finite_model_and_compile_rainworm(capsys):
    code, rep = report(capsys, "finite-model", "--machine", "halt-grid")
    assert code == 0 and rep["result"]["discrepancies"] == []
    code, rep = report(capsys, "compile-rainworm", "--machine", "halt")
    assert code == 0 and len(rep["result"]["rules"]) == 2


def test_grid_and_chase(capsys):
    code, rep = report(capsys, "grid", "--t", "2")
    assert code == 0 and rep["result"]["foam_edges"] == 50
    code, rep = report(capsys, "chase", "--stages", "2")
    assert code == 0 and rep["result"]["stage_sizes"] == [41, 748, 826]


def test_precompile_and_compile_round_trip(capsys, tmp_path):
    from redspider.sepexample import t_inf
    rules = tmp_path / "t.json"
    rules.write_text(json.dumps([r.to_json() for r in t_inf()]))
    code, rep = report(capsys, "precompile", "--rules", str(rules))
    assert code == 0 and len(rep["result"]["rules"]) == 9
    l1 = tmp_path / "l1.json"
    l1.write_text(json.dumps(rep["result"]["rules"]))
    code, rep = report(capsys, "compile", "--rules", str(l1))
    assert code == 0 and rep["result"]["s"] == 10 and len(rep["result"]["queries"]) == 9


def test_export_dot(capsys, tmp_path):
    code, out = call(capsys, "export-dot", "--figure", "1", "--stages", "3")
    assert code == 0 and out.startswith("digraph")
    assert "α" in out and "β1" in out and "η1" in out
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"edges": [{"label": None, "src": "a", "dst": "b"}]}))
    code, out = call(capsys, "export-dot", "--in", str(g))
    assert code == 0 and '"a" -> "b" [label="∅"]' in out


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_command(["simulate", "--machine", str(bad)]) == 2
    bad.write_text(json.dumps({"A0": ["x"], "A1": ["x"], "instructions": []}))
    assert run_command(["simulate", "--machine", str(bad)]) == 2
    assert run_command(["simulate", "--machine", "/no/such/file"]) == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run_command(["bogus"])
    assert exc.value.code == 1
    assert run_command([]) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "redspider", "simulate", "--machine", "halt"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["k"] == 1

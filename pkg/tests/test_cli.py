import csv
import io
import json
import math

import jsonschema
import pytest

from qcontrol.cli import SCHEMA_PATH, main

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload


def strip_time(payload):
    return {k: v for k, v in payload.items() if k != "wall_time_s"}


def test_verify_default(capsys):
    code, payload = run_json(capsys, "verify")
    assert code == 0
    assert payload["command"] == "verify" and payload["seed"] == 42
    assert all(r["pass"] for r in payload["results"])
    assert len(payload["results"]) >= 12


def test_verify_impossible_tolerance(capsys):
    code, payload = run_json(capsys, "verify", "--tolerance", "1e-30")
    assert code == 1
    failed = [r for r in payload["results"] if not r["pass"]]
    assert failed and all(r["value"] > 1e-30 for r in failed)


def test_verify_d3(capsys):
    code, payload = run_json(capsys, "verify", "--target-dim", "3")
    assert code == 0
    assert payload["config"]["target_dim"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--bogus"],
        ["verify", "--target-dim", "0"],
        ["nogo", "search", "--gates", "foo"],
        ["nogo", "search", "--gates", "xzh", "--target-dim", "3"],
        ["nogo", "residual", "--cap", "1.5"],
        ["nogo"],
        ["phase-demo", "--grid-points", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("QCONTROL_SEED", "7")
    _, payload = run_json(capsys, "verify")
    assert payload["seed"] == 7


def test_nogo_search_singleton(capsys):
    code, payload = run_json(capsys, "nogo", "search", "--gates", "singleton:X", "--restarts", "2", "--max-iters", "100")
    assert code == 0
    top = payload["results"][0]
    assert top["name"] == "worst_case_fidelity_a1"
    assert top["value"] >= 1 - 1e-6 and top["threshold"] == pytest.approx(1 - 1e-6)


def test_nogo_search_deterministic(capsys):
    argv = ["nogo", "search", "--gates", "xzh", "--ancilla-dim", "2", "--restarts", "2", "--max-iters", "60", "--seed", "5"]
    _, first = run_json(capsys, *argv)
    _, second = run_json(capsys, *argv, "--workers", "2")
    assert strip_time(first) == strip_time(second)
    assert first["report"]["seed"] == 5
    fids = [r["value"] for r in first["results"] if r["name"].startswith("worst_case")]
    assert fids[1] >= fids[0] - 1e-12


def test_nogo_residual_capped(capsys, tmp_path):
    path = tmp_path / "slices.csv"
    code, payload = run_json(
        capsys, "nogo", "residual", "--projected", "--cap", "0.9", "--restarts", "4", "--csv", str(path)
    )
    assert code == 0
    assert payload["results"][0]["value"] >= 0.05
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["param_index", "sweep_value", "residual"]
    assert len(rows) == 1 + 7 * 65


def test_nogo_residual_uncapped_records_minimum(capsys):
    code, payload = run_json(capsys, "nogo", "residual", "--restarts", "2")
    assert code == 0
    assert payload["results"][0]["threshold"] is None
    assert payload["report"]["best_value"] <= 1e-6


def test_phase_demo(capsys, tmp_path):
    code, out = run(capsys, "phase-demo", "--phi", "0", str(math.pi))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["phi", "lhs_covariance_residual", "rhs_trace_distance", "sin_half_phi"]
    assert [float(v) for v in rows[1]] == [0, 0, 0, 0]
    phi, lhs, rhs, sin_half = map(float, rows[2])
    assert lhs <= 1e-12 and rhs == pytest.approx(1, abs=1e-15) and sin_half == 1
    out_path = tmp_path / "demo.csv"
    assert main(["phase-demo", "--output", str(out_path)]) == 0
    grid = list(csv.reader(out_path.open()))[1:]
    assert len(grid) == 32
    assert max(abs(float(r[2]) - float(r[3])) for r in grid) <= 1e-10
    # 17 significant digits
    assert rows[2][0] == "3.1415926535897931"


def test_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["verify", "--output", str(path)]) == 0
    assert capsys.readouterr().out == ""
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)

import io
import json
import math

import pytest

from cpt_entangle.cli import ScenarioConfig, run
from cpt_entangle.errors import ValidationError


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err, io.StringIO(stdin))
    return code, out.getvalue(), err.getvalue()


def test_spectrum():
    code, out, _ = call("spectrum", "--r", "1", "--s", "1", "--t", "1", "--theta", "0.5235987755982988")
    data = json.loads(out)
    assert code == 0
    assert abs(data["energies"][0]) < 1e-12 and abs(data["energies"][1] - math.sqrt(3)) < 1e-12
    assert abs(data["alpha"] - math.pi / 6) < 1e-12


def test_spectrum_asymmetric():
    code, out, _ = call("spectrum", "--r", "0", "--s", "4", "--t", "1")
    assert code == 0 and json.loads(out)["metric_eigenvalues"] is None


def test_broken_phase_exit_code():
    code, out, err = call("spectrum", "--r", "2", "--theta", "1.5707963267948966")
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "BrokenPTPhase"


def test_usage_error_exit_code():
    code, _, _ = call("spectrum", "--r", "abc")
    assert code == 1
    code, _, _ = call()
    assert code == 1


def test_algebra_check():
    code, out, _ = call("algebra-check")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert max(data["residuals"].values()) < 1e-12


def test_singlet_sweep():
    code, out, _ = call("singlet-sweep", "--alpha-max", "0.5", "--steps", "6")
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "alpha,E_closed_form,E_pipeline,delta"
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    assert len(rows) == 6
    assert rows[0][:3] == [0.0, 1.0, 1.0]
    oracle = [r[2] for r in rows]
    assert all(b < a for a, b in zip(oracle, oracle[1:]))


def test_singlet_sweep_nan_past_half():
    code, out, _ = call("singlet-sweep", "--alpha-max", "1.0", "--steps", "3")
    assert code == 0 and "nan" in out.split("\n")[-2]


def test_entropy_singlet_cpt_eigen():
    amps = "0:0,0.7071067811865476:0,-0.7071067811865476:0,0:0"
    code, out, _ = call("entropy", "--amplitudes", amps, "--basis", "cpt-eigen")
    data = json.loads(out)
    assert code == 0
    assert abs(data["pipeline"] - 1) < 1e-12 and abs(data["closed_form"] - 1) < 1e-12
    assert data["is_product"] is False


def test_entropy_bad_amplitudes():
    code, _, err = call("entropy", "--amplitudes", "1:0,0:0")
    assert code == 1 and json.loads(err)["error"] == "ValidationError"


def test_evolve_csv(tmp_path):
    path = tmp_path / "e.csv"
    code, out, _ = call("evolve", "--steps", "4", "--output", str(path))
    assert code == 0 and out == ""
    text = path.read_bytes()
    assert b"\r" not in text
    lines = text.decode().strip().split("\n")
    assert lines[0].startswith("t,re_00,im_00") and lines[0].endswith(",E")
    assert len(lines) == 5


def test_rate_csv_header():
    code, out, _ = call("rate", "--steps", "3", "--r1", "0", "--r2", "0")
    assert code == 0
    assert out.split("\n")[0] == "t,lambda,E,gamma,bound,lambda_closed_form"


def test_hmax_sigma_x():
    code, out, _ = call("hmax", "--r1", "0", "--r2", "0", "--theta1", "0", "--theta2", "0")
    data = json.loads(out)
    assert code == 0 and abs(data["h_max"] - 1) < 1e-6
    assert data["diagnostics"]["converged"]


def test_config_roundtrip(tmp_path):
    code, out, _ = call("evolve", "--dump-config", "--r1", "0.3", "--seed", "7")
    cfg = json.loads(out)
    assert cfg["system1"]["r"] == 0.3 and cfg["options"]["seed"] == 7
    code2, out2, _ = call("evolve", "--dump-config", "--config", "-", stdin=out)
    assert code2 == 0 and out2 == out
    p = tmp_path / "c.json"
    p.write_text(out)
    assert call("evolve", "--dump-config", "--config", str(p))[1] == out


def test_config_validation():
    with pytest.raises(ValidationError):
        ScenarioConfig.from_dict({"times": {"start": 1, "stop": 0, "steps": 3}}).validate()
    code, _, err = call("evolve", "--config", "-", stdin="{not json")
    assert code == 1


def test_cli_deterministic():
    a = call("rate", "--steps", "5", "--seed", "2")
    b = call("rate", "--steps", "5", "--seed", "2")
    assert a == b and a[0] == 0

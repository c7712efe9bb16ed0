import json
import subprocess
import sys

import numpy as np
import pytest

from qgcd.circuit import build_qpe_circuit, parse_text
from qgcd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0] == "m,probability"
    rows = [line.split(",") for line in lines[1:]]
    return [int(m) for m, _ in rows], np.array([float(p) for _, p in rows])


def test_gcd_35_40(capsys):
    code, out, _ = run(capsys, "gcd", "--x", "35", "--r", "40", "--seed", "1")
    assert code == 0
    assert "gcd = 5" in out and "N = 8" in out and "seed 1" in out


def test_gcd_equal_inputs(capsys):
    code, out, _ = run(capsys, "gcd", "--x", "13", "--r", "13")
    assert code == 0 and "gcd = 13" in out and "no simulation" in out


def test_gcd_protocol_b_trace(capsys):
    code, out, _ = run(capsys, "gcd", "--x", "21", "--r", "126", "--protocol", "b", "--seed", "7")
    assert code == 0
    assert "gcd = 21" in out and "iter 0: x_i = 21, r_i = 126" in out


def test_gcd_json(capsys):
    code, out, _ = run(capsys, "gcd", "--x", "21", "--r", "126", "--format", "json", "--reps", "5")
    doc = json.loads(out)
    assert code == 0 and doc["gcd"] == 21
    assert doc["instance"] == {"x": 21, "r": 126, "L": 7, "N": 6}
    assert len(doc["samples"]) == 5 and doc["config"]["protocol"] == "a"


def test_gcd_protocol_failure_exit_code(capsys):
    code, out, err = run(capsys, "gcd", "--x", "35", "--r", "40", "--protocol", "b", "--max-iters", "1", "--seed", "3")
    # one round can only succeed if the first draw is s/N = 1/8 or 7/8
    assert code in (0, 4)
    if code == 4:
        assert "gcd = failed" in out and "failed" in err


def test_dist_35_40(capsys):
    code, out, _ = run(capsys, "dist", "--x", "35", "--r", "40", "--t", "4", "--method", "exact")
    ms, p = read_csv(out)
    assert code == 0 and ms == list(range(16))
    assert np.abs(p - np.where(np.arange(16) % 2 == 0, 0.125, 0)).max() < 1e-12


def test_dist_sixths_t10(capsys):
    code, out, _ = run(capsys, "dist", "--x", "21", "--r", "126", "--t", "10")
    ms, p = read_csv(out)
    assert len(ms) == 1024 and abs(p.sum() - 1) < 1e-9
    centres = [round(s * 1024 / 6) % 1024 for s in range(6)]
    assert p[centres].sum() > 0.75


def test_dist_auto_t(capsys):
    _, out, _ = run(capsys, "dist", "--x", "35", "--r", "40")
    ms, _ = read_csv(out)
    assert len(ms) == 512


@pytest.mark.parametrize("method", ["statevector", "kitaev"])
def test_dist_sampled_is_byte_identical(tmp_path, method):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        assert main(["dist", "--x", "35", "--r", "40", "--t", "4", "--method", method,
                     "--shots", "100000", "--seed", "0", "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"\r" not in paths[0].read_bytes()


def test_dist_json(capsys):
    _, out, _ = run(capsys, "dist", "--x", "35", "--r", "40", "--t", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["probability"][2] == 0.125 and len(doc["probability"]) == 16


def test_circuit_35_40(capsys):
    code, out, _ = run(capsys, "circuit", "--x", "35", "--r", "40", "--t", "4")
    lines = out.splitlines()
    assert code == 0
    assert sum(line.startswith("h ") for line in lines) == 8
    assert sum(line.startswith("cmodadd") for line in lines) == 4
    assert "# smallest angle pi/8" in lines
    assert "# modadd elementary gates (4L+2 per adder, per cited scheme) = 104" in lines
    assert parse_text(out) == build_qpe_circuit(35, 40, 4)


def test_circuit_auto(capsys):
    _, out, _ = run(capsys, "circuit", "--epsilon", "0.25", "--x", "35", "--r", "40", "--t", "auto")
    assert "qreg q[9]; wreg w[40];" in out
    assert "# t_shor = 15" in out and "# t_this = 9" in out


def test_circuit_json(capsys):
    _, out, _ = run(capsys, "circuit", "--x", "35", "--r", "40", "--t", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["report"]["modadd_elementary_estimate"] == 104
    assert doc["report"]["smallest_phase_angle"] == "pi/8"


def test_usage_and_domain_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["dist", "--x", "3"])
    assert exc.value.code == 2
    assert run(capsys, "dist", "--x", "3", "--r", "1")[0] == 2
    assert run(capsys, "circuit", "--x", "80", "--r", "40", "--t", "3")[0] == 2
    assert run(capsys, "gcd", "--x", "3", "--r", "7", "--epsilon", "1.5")[0] == 2


def test_resource_limit_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("QGCD_MAX_DIM", "1000")
    code, _, err = run(capsys, "dist", "--x", "3", "--r", "40", "--t", "6", "--method", "statevector")
    assert code == 3 and "exceeds" in err


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())


def test_verify_fault_injection(capsys):
    code, out, err = run(capsys, "verify", "--quick", "--inject-fault", "phase-sign")
    assert code == 1
    assert any(line.startswith("FAIL") and "eigenvalues" in line for line in out.splitlines())
    assert "eigenvalues" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qgcd", "gcd", "--x", "35", "--r", "40"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "gcd = 5" in proc.stdout

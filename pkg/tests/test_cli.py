import json
import subprocess
import sys

import pytest

from qftkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gaussian_csv(capsys):
    code, out, _ = run(capsys, "gaussian", "--q", "1.5", "--n", "5", "--check")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,closed_form,oracle,abs_err"
    assert len(lines) == 6
    k, closed, orc, err = map(float, lines[3].split(","))
    assert k == 0.0 and closed == 1.0 and err < 1e-10


def test_gaussian_deterministic(capsys, monkeypatch):
    _, a, _ = run(capsys, "gaussian", "--n", "9")
    monkeypatch.setenv("QFTKIT_THREADS", "4")
    _, b, _ = run(capsys, "gaussian", "--n", "9")
    assert a == b


def test_gaussian_classical_json(capsys):
    code, out, _ = run(capsys, "gaussian", "--q", "1", "--format", "json", "--n", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["columns"][0] == "k"
    assert all(r[3] < 1e-10 for r in doc["rows"])


def test_usage_errors(capsys):
    code, _, err = run(capsys, "gaussian", "--q", "2.0")
    assert code == 2 and "q must lie in [1,2)" in err
    assert run(capsys, "gaussian", "--n", "1")[0] == 2
    assert run(capsys, "gaussian", "--alpha", "-1")[0] == 2
    assert run(capsys, "verify", "nope")[0] == 2
    assert run(capsys, "series", "--q", "1.05", "--x", "50")[0] == 2


def test_tolerance_failure_exit(capsys):
    code, _, err = run(capsys, "gaussian", "--n", "3", "--check", "--tol", "1e-300")
    assert code == 1 and "tolerance" in err


def test_transform_and_series(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "transform", "--density", "laplace", "--imag", "0.5", "--n", "3", "--output", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "k,value_re,value_im,abs_err_estimate"
    code, out, _ = run(capsys, "series", "--n", "3", "--check")
    assert code == 0 and len(out.splitlines()) == 4


def test_invert_box(capsys):
    code, out, _ = run(capsys, "invert", "--density", "box", "--n", "7", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["max_abs_err"] < 1e-2


def test_verify_qprime(capsys):
    code, out, err = run(capsys, "verify", "qprime")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["passed"]
    assert "PASS" in err


def test_console_entry():
    r = subprocess.run([sys.executable, "-m", "qftkit", "gaussian", "--n", "2"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith("k,")

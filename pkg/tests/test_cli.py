import json
import subprocess
import sys

import pytest

from jetframe.cli import EXIT_INCOMPATIBLE, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_connection_text(capsys):
    code, out, _ = run(capsys, "connection")
    assert code == EXIT_OK
    assert "theta[3][4] = (1/2*f_p - 1/2)*w1" in out
    assert out.count("matches=true") == 6


def test_connection_json_schema(capsys):
    code, out, _ = run(capsys, "connection", "--f", "generic", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and set(doc) == {"meta", "connection"}
    assert doc["connection"]["theta"]["theta[2][3]"] == [[[1], "-1/2"]]
    assert doc["connection"]["theta"]["theta[1][2]"] == [[[3], "-1/2"], [[4], "-1/2*f_y"]]


def test_frame_command(capsys):
    code, out, _ = run(capsys, "frame", "--format", "json")
    doc = json.loads(out)
    assert doc["connection"]["d_table"]["d w2"] == [[[1, 3], "1"]]
    assert doc["connection"]["d_table"]["d w1"] == []


def test_curvature_json(capsys):
    code, out, _ = run(capsys, "curvature", "--format", "json")
    doc = json.loads(out)["curvature"]
    assert code == EXIT_OK
    assert doc["R"]["R[2][3][2][3]"] == "1/4"
    assert doc["bianchi_residual"] == {}
    assert [e["entry"] for e in doc["errata"]] == ["R^1_314", "R^1_413", "R^2_434"]


def test_curvature_concrete_f_has_no_published_ledger(capsys):
    code, out, _ = run(capsys, "curvature", "--f", "0", "--format", "json")
    doc = json.loads(out)["curvature"]
    assert "published" not in doc and doc["R"]["R[1][4][1][4]"] == "-3/4"


def test_surface_linear_section_is_minimal(capsys):
    code, out, _ = run(capsys, "surface", "--f", "generic", "--q", "alpha(x)*y+beta(x)", "--format", "json")
    doc = json.loads(out)["surface"]
    assert code == EXIT_OK
    assert doc["minimal"] is True and doc["totally_geodesic"] is False
    assert doc["f_on_section"] == "y*alpha_x(x) + p*alpha(x) + beta_x(x)"
    assert {e["id"] for e in doc["errata"]} >= {"h12-factor", "II-13-vs-h13", "unit-slope-totally-geodesic"}


def test_surface_degenerate_gauss(capsys):
    code, out, _ = run(capsys, "surface", "--q", "degenerate", "--gauss", "--format", "json")
    doc = json.loads(out)["surface"]
    assert code == EXIT_OK and doc["gauss_zero"] is True and doc["gauss_residual"] == {}


def test_classify_flags(capsys):
    code, out, _ = run(capsys, "classify", "--q", "y^2")
    assert code == EXIT_OK and "minimal = false" in out


def test_incompatible_section_exit(capsys):
    code, out, err = run(capsys, "surface", "--q", "p^2")
    assert code == EXIT_INCOMPATIBLE and "violation: Q_p != 0" in err and out == ""
    code, _, err = run(capsys, "classify", "--f", "2*p*y + q - y^2", "--q", "y^2")
    assert code == EXIT_INCOMPATIBLE and "(got 2*y)" in err


def test_parse_error_exit(capsys):
    code, _, err = run(capsys, "connection", "--f", "q/(1+p")
    assert code == EXIT_INPUT and "column 7" in err


def test_verify_requires_concrete_f(capsys):
    code, _, err = run(capsys, "verify")
    assert code == EXIT_INPUT and "concrete" in err


def test_verify_all_pass(capsys):
    code, out, _ = run(capsys, "verify", "--f", "p*q + y", "--points", "10", "--seed", "7", "--format", "json")
    doc = json.loads(out)["verify"]
    assert code == EXIT_OK and doc["all_pass"] is True
    assert len(doc["samples"]) == 10 and all(s["compared"] == 36 for s in doc["samples"])


def test_verify_failure_exit(capsys):
    code, out, err = run(capsys, "verify", "--f", "q", "--points", "2", "--tol", "1e-30", "--format", "json")
    doc = json.loads(out)["verify"]
    assert code == EXIT_VERIFY and doc["all_pass"] is False
    assert doc["samples"][0]["failures"][0]["verdict"] == "fail"
    assert "FAIL" in err


def test_verify_surface_oracle(capsys):
    code, out, _ = run(capsys, "verify", "--f", "y + p*(2*y+x) + (q-y^2-x*y)^2", "--q", "y^2+x*y",
                       "--points", "3", "--oracle", "analytic", "--format", "json")
    doc = json.loads(out)["verify"]
    assert code == EXIT_OK and doc["all_pass"]
    assert all(r["gauss_residual"] < 1e-8 for r in doc["surface"]["samples"])


@pytest.mark.parametrize("argv", [
    ["verify", "--f", "p*q + y", "--points", "4", "--seed", "3", "--format", "json"],
    ["curvature", "--format", "json"],
    ["surface", "--q", "y^2", "--format", "json"],
])
def test_json_is_byte_identical(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jetframe.cli", "classify", "--q", "x", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["surface"]["branch"] == "degenerate"

import json
import math
import subprocess
import sys

import pytest

from hexfourier.analysis import ExperimentReport, make_row
from hexfourier.cli import fmt, main, report_from_json, report_to_json


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def data_lines(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_kernel_eval_dirichlet(capsys):
    code, out, _ = run(["kernel-eval", "--kernel", "dirichlet", "--n", "3", "--t", "0,0,0"], capsys)
    assert code == 0
    assert data_lines(out) == ["t1,t2,t3,value", "0,0,0,37"]


def test_kernel_eval_variants(capsys):
    pts = ["--t", "0.2,0.1,-0.3", "--t", "0,0,0"]
    code, out, _ = run(["kernel-eval", "--kernel", "poisson", "--r", "0.5", "--format", "json",
                        *pts], capsys)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[1]["value"] == 13
    for k in (["theta", "--n", "2"], ["cesaro", "--n", "2", "--delta", "1"],
              ["dirichlet-direct", "--n", "2"], ["poisson-series", "--r", "0.3"]):
        code, out, _ = run(["kernel-eval", "--kernel", *k, *pts], capsys)
        assert code == 0 and len(data_lines(out)) == 3


def test_lebesgue_header_and_schema(capsys):
    code, out, _ = run(["lebesgue", "--delta", "1", "--n-max", "3", "--grid-n", "128",
                        "--format", "csv"], capsys)
    assert code == 0
    lines = data_lines(out)
    assert lines[0] == "n,L,ratio"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "1", "2", "3"]
    assert lines[1] == "0,1,1"
    assert out.endswith("\n") and "\r" not in out
    assert "# grid_n=[128, 128, 128, 128]" in out


@pytest.mark.parametrize("argv, header", [
    (["moment", "--delta", "0.5", "--n-values", "1,2"], "n,d,bound,ratio"),
    (["poisson-moment", "--r", "0.5,0.7"], "r,lambda,bound,ratio"),
    (["lemma1", "--delta", "0.5", "--n-max", "2", "--u-count", "3"], "n,u,measured,bound,ratio"),
    (["cesaro-approx", "--delta", "1", "--n-values", "2,4", "--eval-n", "6", "--n-dirs", "12"],
     "n,error,omega,bound,ratio"),
    (["poisson-approx", "--r", "0.5", "--n-dirs", "12"], "r,error,omega,bound,ratio"),
    (["coeffs", "--function", "f1", "--n-max", "2"], "j1,j2,j3,re,im"),
])
def test_headers(argv, header, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert data_lines(out)[0] == header


def test_coeffs_json(capsys):
    code, out, _ = run(["coeffs", "--function", "f2", "--n-max", "4", "--grid-n", "32",
                        "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    coeffs = data["coefficients"]
    assert len(coeffs) == 61
    assert list(coeffs)[0] == "-4,0,4"
    re0, im0 = coeffs["0,0,0"]
    assert re0 == pytest.approx(2.39545973726) and im0 == pytest.approx(0, abs=1e-12)
    assert coeffs["1,0,-1"][0] == pytest.approx(coeffs["0,1,-1"][0])


@pytest.mark.parametrize("argv", [
    ["kernel-eval", "--kernel", "dirichlet", "--n", "3", "--t", "0,0,1"],
    ["kernel-eval", "--kernel", "dirichlet", "--n", "3", "--t", "0,0"],
    ["kernel-eval", "--kernel", "cesaro", "--n", "3", "--t", "0,0,0"],
    ["kernel-eval", "--kernel", "poisson", "--t", "0,0,0"],
    ["lebesgue", "--delta", "1"],
    ["lebesgue", "--n-max", "3"],
    ["lebesgue", "--delta", "1", "--n-max", "-1"],
    ["coeffs", "--function", "nope", "--n-max", "2"],
    ["cesaro-approx", "--delta", "1", "--n-max", "4", "--eval-n", "-3"],
    ["lebesgue", "--delta", "1", "--n-max", "2", "--format", "xml"],
    ["frobnicate"],
    [],
])
def test_invalid_flags_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["poisson-moment", "--r", "1.0"],
    ["poisson-approx", "--r", "0.5,1.2"],
    ["kernel-eval", "--kernel", "poisson", "--r", "1", "--t", "0,0,0"],
    ["lebesgue", "--delta", "-0.5", "--n-max", "2"],
    ["lemma1", "--delta", "1.5", "--n-max", "2"],
])
def test_numerical_failures_exit_1(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1
    assert out == "" and "numerical failure" in err


def test_json_round_trip(capsys):
    code, out, _ = run(["lemma1", "--delta", "0.25", "--n-max", "3", "--u-count", "4",
                        "--format", "json"], capsys)
    assert code == 0
    rep = report_from_json(out)
    assert isinstance(rep, ExperimentReport)
    assert report_to_json(rep) == out
    assert len(rep.rows) == 16 and "u" in rep.rows[0].extra

    rep = ExperimentReport([make_row(1, 1 / 3, 0.7, omega=0.25), make_row(0, 2.0, 0.0)],
                           {"delta": 0.5})
    back = report_from_json(report_to_json(rep))
    assert back.metadata == rep.metadata
    for a, b in zip(rep.rows, back.rows):
        assert (a.param, a.bound, a.extra) == (b.param, b.bound, b.extra)
        assert b.measured == pytest.approx(a.measured, rel=1e-12)
    # zero bound with a nonzero measurement gives an infinite ratio
    assert back.rows[0].ratio == math.inf


def test_fmt():
    assert fmt(37.0) == "37"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(-0.0) == "0"
    assert fmt(float("inf")) == "inf"
    assert fmt(3) == "3"


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(["poisson-moment", "--r", "0.5", "--output", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_bytes().decode().splitlines()[-1].startswith("0.5,")


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "hexfourier", "moment", "--delta", "0.5", "--n-max", "4",
           "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["rows"]

import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qbarrier import cli
from qbarrier.params import ModelParams
from qbarrier.quantized import probability


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fock_row_csv_format(capsys):
    code, out, _ = run(["fock", "--cap-lambda", "1", "--n0", "2"], capsys)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "lambda_cap,n0,n,probability"
    assert out.endswith("\n") and "\r" not in out
    recs = rows(out)
    p = ModelParams.from_cap_lambda(1.0)
    for r in recs:
        # 12 significant digits in scientific notation
        mant = r["probability"].split("e")[0].lstrip("-")
        assert len(mant.replace(".", "")) == 12
        assert float(r["probability"]) == pytest.approx(
            probability(2, int(r["n"]), p), rel=1e-11, abs=1e-300)
    keys = [(float(r["lambda_cap"]), int(r["n0"]), int(r["n"])) for r in recs]
    assert keys == sorted(keys)


def test_round_trip_closure(capsys):
    _, out, _ = run(["thermal", "--cap-lambda", "1.5"], capsys)
    for r in rows(out):
        v = r["probability"]
        assert cli.fmt(float(v)) == v


def test_json_mirrors_csv(capsys):
    _, c, _ = run(["vacuum", "--cap-lambda", "0.7"], capsys)
    _, j, _ = run(["vacuum", "--cap-lambda", "0.7", "--format", "json"], capsys)
    doc = json.loads(j)
    assert doc["columns"] == ["n", "probability"]
    recs = rows(c)
    assert len(recs) == len(doc["records"])
    for a, b in zip(recs, doc["records"]):
        assert int(a["n"]) == b["n"]
        assert float(a["probability"]) == b["probability"]


def test_classical_and_entropy_and_sweep(capsys):
    code, out, _ = run(["classical", "--lambda-bar", "1", "--omega-tau", str(math.pi)], capsys)
    assert code == 0
    recs = rows(out)
    j0 = [r for r in recs if r["n"] == "0"][0]
    assert float(j0["probability"]) == pytest.approx(0.050127080984469568505, rel=1e-11)
    code, out, _ = run(["entropy", "--cap-lambda", "1", "--n0", "0"], capsys)
    assert float(rows(out)[0]["entropy"]) == pytest.approx(1.3048422422562514843, rel=1e-11)
    code, out, _ = run(["sweep", "--sweep-param", "cap_lambda", "--start", "0",
                        "--stop", "1", "--num", "5", "--workers", "3"], capsys)
    assert code == 0
    recs = rows(out)
    assert [int(r["index"]) for r in recs] == list(range(5))
    for r in recs:
        assert float(r["mean_photons"]) == pytest.approx(float(r["value"]) ** 2, abs=1e-9)


def test_sweep_workers_deterministic(capsys):
    base = ["sweep", "--sweep-param", "n0", "--start", "0", "--stop", "40", "--num", "9",
            "--cap-lambda", "0.5"]
    _, a, _ = run(base + ["--workers", "1"], capsys)
    _, b, _ = run(base + ["--workers", "4"], capsys)
    assert a == b


def test_coherent_both_writes_two_files(tmp_path, capsys):
    out = tmp_path / "coh.csv"
    code, _, _ = run(["coherent", "--cap-lambda", "1", "--alpha-abs", "3",
                      "--out", str(out)], capsys)
    assert code == 0
    assert rows(out.read_text())[0]["position_tag"] == "x_plus"
    circle = tmp_path / "coh_circle.csv"
    assert circle.read_text().startswith("x_over_period,re_xi,im_xi\n")


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ncap-lambda = 2.0\nn0 = 1\n")
    _, out, _ = run(["fock", "--config", str(cfg)], capsys)
    assert {r["lambda_cap"] for r in rows(out)} == {cli.fmt(2.0)}
    _, out, _ = run(["fock", "--config", str(cfg), "--cap-lambda", "0.5"], capsys)
    assert {r["lambda_cap"] for r in rows(out)} == {cli.fmt(0.5)}
    # preset < file: the file's coupling replaces the preset's list
    _, out, _ = run(["fock", "--preset", "fig3", "--config", str(cfg)], capsys)
    assert {r["lambda_cap"] for r in rows(out)} == {cli.fmt(2.0)}


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["fock", "--lambda-bar", "1", "--cap-lambda", "1"],
    ["fock", "--cap-lambda", "1", "--omega-tau", str(2 * math.pi)],
    ["fock", "--tail-tol", "2"],
    ["fock", "--config", "/nonexistent/file.cfg"],
    ["fock", "--cap-lambda", "-1"],
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err


def test_bad_config_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign here\n")
    assert run(["fock", "--config", str(cfg)], capsys)[0] == 2
    cfg.write_text("unknown_key = 3\n")
    assert run(["fock", "--config", str(cfg)], capsys)[0] == 2


def test_numeric_error_exit_3(capsys):
    code, _, err = run(["fock", "--cap-lambda", "2", "--n0", "0", "--e0-ratio", "3"], capsys)
    assert code == 3
    assert "EvanescentModeError" in err


def test_unwritable_output_exit_2(tmp_path, capsys):
    code, _, err = run(["vacuum", "--cap-lambda", "1",
                        "--out", str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 2
    assert "cannot write" in err


def test_atomic_write_leaves_no_partial_file(tmp_path, monkeypatch):
    target = tmp_path / "out.csv"
    target.write_text("old\n")

    def boom(src, dst):
        raise OSError(28, "No space left on device")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        cli.write_atomic(str(target), "new\n")
    assert target.read_text() == "old\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_validate_and_inject_fault(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(["validate", "--out", str(a)], capsys)[0] == 0
    assert run(["validate", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["passed"] and all(c["passed"] for c in doc["checks"])
    code, out, _ = run(["validate", "--inject-fault"], capsys)
    assert code == 1
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert "route_analytic_vs_algebraic" in failed


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "qbarrier.cli", "vacuum", "--cap-lambda", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    n = np.array([float(r["probability"]) for r in rows(res.stdout)])
    assert abs(n.sum() - 1.0) < 1e-10

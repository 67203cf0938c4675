import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from critwin.cli import run

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 0, err
    body = json.loads(out)
    jsonschema.validate(body, SCHEMA)
    return body


def test_counts(capsys):
    body = report(capsys, "counts", "--k", "4", "--m", "4")
    assert body["value"] == "15"
    big = report(capsys, "counts", "--k", "40", "--l", "3")
    assert int(big["value"]) > 2**200


def test_counts_asymptotic_and_upper(capsys):
    assert report(capsys, "counts", "--k", "30", "--l", "0", "--mode", "asymptotic")["method"] == "ASYMPTOTIC"
    assert report(capsys, "counts", "--k", "30", "--l", "0", "--mode", "upper")["method"] == "UPPER_BOUND"


def test_tails_report(capsys):
    body = report(capsys, "tails", "--n", "100000", "--lambda", "0", "--k", "4309", "--event", "L1_GE")
    assert body["estimate"] == pytest.approx(0.0692, rel=2e-3)
    assert body["budgets"]["relative"] > 0 and body["budgets"]["absolute"] > 0
    assert body["statement"] == "L1_TAIL"
    exact = report(capsys, "tails", "--n", "3", "--k", "2", "--l", "-1", "--event", "CV_EDGES")
    assert exact["value"] == "8/27"
    bound = report(capsys, "tails", "--n", "10000", "--k", "1000", "--event", "L1_GT_BOUND")
    assert bound["value"] == 1.0


def test_window_violation_exits_2(capsys):
    code, out, err = invoke(capsys, "tails", "--n", "100", "--lambda", "50", "--k", "10", "--event", "L1_GE")
    assert code == 2
    assert "requires lambda <= n^(1/12)/5" in err
    assert out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["counts", "--k", "4", "--m", "4", "--bogus"],
        ["tails", "--n", "100", "--k", "10"],
        ["compare", "--n", "100", "--event", "L1_GE", "--a", ""],
        ["simulate", "--n", "10", "--target", "L1_GE"],
        ["simulate", "--n", "10", "--k", "2", "--target", "L1_GE", "--replicas", "0"],
        ["moments", "--n", "0", "--k", "1", "--quantity", "Y"],
    ],
)
def test_validation_errors_exit_2(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_eval(capsys):
    assert report(capsys, "eval", "--quantity", "d", "--l", "3")["value"] == "1105/7776"
    assert report(capsys, "eval", "--quantity", "G", "--lambda", "0", "--x", "2", "--n", "10")["value"] == 1.0
    assert report(capsys, "eval", "--quantity", "N", "--n", "1000000")["value"] == "31622"
    assert report(capsys, "eval", "--quantity", "p", "--n", "6")["value"] == "1/6"
    gamma = report(capsys, "eval", "--quantity", "gamma", "--l", "1")
    assert gamma["value"] == pytest.approx(5 / 24, abs=1e-12)


def test_moments(capsys):
    assert report(capsys, "moments", "--n", "3", "--k", "2", "--l", "-1", "--quantity", "X", "--mode", "exact")["value"] == "4/9"
    body = report(capsys, "moments", "--n", "100000", "--k", "4309", "--quantity", "Z")
    assert body["value"] == pytest.approx(0.0692, rel=2e-3)
    assert body["budgets"]["kind"] == "M1"
    y2 = report(capsys, "moments", "--n", "4", "--k", "2", "--quantity", "Y2", "--mode", "exact")
    assert y2["method"] == "EXACT_RATIONAL"


def test_simulate_json_and_csv(capsys, tmp_path):
    body = report(capsys, "simulate", "--n", "2", "--pmf", "CV", "--replicas", "2000", "--seed", "4")
    assert sum(body["histogram"].values()) == 2000
    body = report(capsys, "simulate", "--n", "200", "--k", "10", "--target", "L1_GE", "--replicas", "500")
    assert body["ci_low"] <= body["estimate"] <= body["ci_high"]
    out = tmp_path / "r.csv"
    assert run(["simulate", "--n", "200", "--k", "10", "--target", "CV_GE", "--format", "csv", "--output", str(out)]) == 0
    text = out.read_bytes()
    assert b"\r" not in text
    assert text.splitlines()[0] == b"target,n,lambda,k,replicas,seed,successes,estimate,ci_low,ci_high"
    assert b"runtime_ms" not in text


def test_compare_small_n_exact_columns(capsys):
    body = report(capsys, "compare", "--n", "6", "--event", "CV_GE", "--ks", "1,2,3,4", "--replicas", "3000")
    for row in body["rows"]:
        assert row["exact"] == row["enumeration"]
        assert row["ratio_exact_enumeration"] == "1"
    body = report(capsys, "compare", "--n", "5", "--event", "L1_GE", "--ks", "2,3", "--replicas", "100")
    assert all(row["enumeration"] is not None and row["exact"] is None for row in body["rows"])


def test_validate(capsys):
    body = report(capsys, "validate")
    assert body["passed"] is True
    assert all(row["passed"] for row in body["rows"])


def test_cache_roundtrip(tmp_path, monkeypatch, capsys):
    cache = tmp_path / "counts.txt"
    monkeypatch.setenv("CRITWIN_CACHE", str(cache))
    report(capsys, "counts", "--k", "9", "--m", "12", "--write-cache")
    lines = cache.read_text().splitlines()
    assert any(line.split()[:2] == ["9", "12"] for line in lines)
    assert report(capsys, "counts", "--k", "9", "--m", "12")["value"] == next(
        line.split()[2] for line in lines if line.split()[:2] == ["9", "12"]
    )


def test_write_cache_without_env_is_rejected(monkeypatch, capsys):
    monkeypatch.delenv("CRITWIN_CACHE", raising=False)
    assert invoke(capsys, "counts", "--k", "4", "--m", "4", "--write-cache")[0] == 2


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "critwin.cli", "--help"], capture_output=True, text=True, check=True)
    assert "CSV headers" in out.stdout
    for cmd in ("eval", "counts", "moments", "tails", "simulate", "compare", "validate"):
        assert cmd in out.stdout

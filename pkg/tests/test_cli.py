from __future__ import annotations

import json
import subprocess
import sys

import pytest

from metawhit.cli import UsageError, dispatch, main, run_batch, thread_count


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_whittaker_report(capsys):
    code, rep = run(["compute", "whittaker", "--cartan", "A1", "--n", "3", "--lambda", "1", "--q", "7"], capsys)
    assert code == 0
    assert rep["equal"] is True and rep["ok"] is True
    assert rep["command"] == "compute whittaker"
    assert rep["params"]["lambda"] == "1"
    assert rep["data"]["n_table"] == {"1": 3}
    assert rep["data"]["lambda0_basis"] == [[3]]
    coweights = [t["coweight"] for t in rep["formal"]["terms"]]
    assert coweights == [[-2], [1]]


def test_nondominant_lambda_reports_zero(capsys):
    code, rep = run(["compute", "whittaker", "--cartan", "A2", "--n", "2", "--lambda=-1,2"], capsys)
    assert code == 0 and rep["nondominant"] is True
    assert rep["formal"] == {"terms": []}


@pytest.mark.parametrize(
    "argv",
    [
        ["oracle", "gauss", "--p", "8", "--n", "2"],
        ["oracle", "gauss", "--p", "7", "--n", "2"],
        ["verify", "nonsense"],
        ["compute", "whittaker", "--cartan", "Z9", "--n", "2", "--lambda", "1"],
        ["compute", "whittaker", "--cartan", "A2", "--n", "2", "--lambda", "1"],
        ["compute", "whittaker", "--cartan", "A2", "--lambda", "1,1"],
        ["verify", "cg-braid", "--cartan", "A1", "--n", "2"],
        ["verify", "intertwiner", "--cartan", "A1", "--n", "2"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_oracle_commands(capsys):
    code, rep = run(["oracle", "gauss", "--p", "7", "--n", "3"], capsys)
    assert code == 0 and rep["g0"][0] == pytest.approx(-1)
    assert "data" not in rep
    code, rep = run(["oracle", "rank1", "--p", "7", "--n", "3", "--pairing", "3"], capsys)
    assert code == 0 and rep["max_residual"] < 1e-8


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "macdonald", "--cartan", "A2", "--n", "2"],
        ["verify", "cs", "--cartan", "A2", "--n", "1", "--box", "1"],
        ["verify", "fg", "--cartan", "B2", "--n", "2"],
        ["verify", "hecke", "--cartan", "A2", "--n", "2", "--box", "1"],
        ["verify", "involution", "--cartan", "A1", "--n", "3"],
        ["verify", "tau", "--cartan", "A1", "--n", "3", "--box", "1"],
        ["verify", "intertwiner", "--cartan", "A1", "--n", "3", "--q", "7", "--box", "1"],
        ["compute", "spherical", "--cartan", "A2", "--n", "2", "--lambda", "0,0", "--q", "5"],
    ],
)
def test_verify_commands_pass(argv):
    code, rep = dispatch(argv)
    assert code == 0, rep
    assert rep["data"]["n"] == int(argv[argv.index("--n") + 1])


def test_cs_reports_both_normalizations():
    _, rep = dispatch(["verify", "cs", "--cartan", "A2", "--n", "1", "--lambda", "1,1"])
    case, = rep["cases"]
    assert case["character_equal"] and case["weyl_numerator_equal"]


def test_scattering_is_deterministic():
    argv = ["verify", "scattering", "--cartan", "A1", "--n", "2", "--q", "13", "--seed", "5", "--families", "10"]
    outs = [
        subprocess.run([sys.executable, "-m", "metawhit", *argv], capture_output=True, text=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["ok"] is True


def test_empty_batch(tmp_path, capsys):
    path = tmp_path / "jobs.json"
    path.write_text(json.dumps({"jobs": []}))
    assert run_batch(str(path)) == {"jobs": 0, "failures": 0}
    code, rep = run(["--jobs", str(path)], capsys)
    assert code == 0 and rep == {"jobs": 0, "failures": 0}


def test_batch_order_and_failures(tmp_path, monkeypatch):
    monkeypatch.setenv("MWF_THREADS", "2")
    path = tmp_path / "jobs.json"
    jobs = [
        {"command": "oracle gauss", "params": {"p": 7, "n": 3}},
        {"command": "oracle gauss", "params": {"p": 8, "n": 3}},
        {"command": "compute whittaker", "params": {"cartan": "A1", "n": 2, "lambda": [2]}},
    ]
    path.write_text(json.dumps({"jobs": jobs}))
    summary = run_batch(str(path))
    assert summary["jobs"] == 3 and summary["failures"] == 1
    assert [r["exit"] for r in summary["results"]] == [0, 2, 0]
    assert summary == run_batch(str(path), threads=1)


def test_malformed_batch(tmp_path, capsys):
    path = tmp_path / "jobs.json"
    path.write_text("{not json")
    assert main(["--jobs", str(path)]) == 2
    path.write_text(json.dumps({"tasks": []}))
    assert main(["--jobs", str(path)]) == 2
    assert main(["--jobs", str(tmp_path / "missing.json")]) == 2


def test_thread_count(monkeypatch):
    monkeypatch.setenv("MWF_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("MWF_THREADS", "zero")
    with pytest.raises(UsageError):
        thread_count()
    monkeypatch.setenv("MWF_THREADS", "0")
    with pytest.raises(UsageError):
        thread_count()


def test_text_output(capsys):
    assert main(["--output", "text", "oracle", "gauss", "--p", "7", "--n", "1"]) == 0
    assert "ok: true" in capsys.readouterr().out

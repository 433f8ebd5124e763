import csv
import io
import json
import subprocess
import sys

import pytest

from shortinv.cli import EXPERIMENT_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exists(capsys):
    code, out, _ = run(capsys, "exists", "--p", "11", "--i1", "2:4", "--i2", "3:5")
    assert code == 0
    rep = json.loads(out)
    assert rep["exists"] is True and rep["witness"] == [4, 3]


def test_kloosterman(capsys):
    code, out, _ = run(capsys, "kloosterman", "--p", "5", "--a", "1", "--b", "1")
    assert code == 0 and "0.381966" in out
    assert json.loads(out)["value"] == pytest.approx(0.3819660112501051)


def test_poisson_check(capsys):
    code, out, _ = run(capsys, "poisson-check", "--p", "101", "--H", "20", "--K", "20", "--J", "5", "--seed", "7")
    assert code == 0
    assert json.loads(out)["residual"] < 1e-8


def test_poisson_check_failure_exit(capsys):
    # A negative tolerance can never be met.
    code, _, _ = run(capsys, "poisson-check", "--p", "101", "--H", "20", "--J", "2", "--tol", "-1")
    assert code == 1


def test_poisson_check_family_file(tmp_path, capsys):
    f = tmp_path / "fam.json"
    f.write_text(json.dumps({"p": 101, "H": 20, "K": 16, "centers": [[30, 40], [60, 20]]}))
    code, out, _ = run(capsys, "poisson-check", "--family", str(f))
    assert code == 0 and json.loads(out)["J"] == 2


@pytest.mark.parametrize("argv", [
    ["poisson-check", "--p", "100", "--H", "20", "--J", "5"],
    ["poisson-check", "--p", "1009", "--H", "2", "--J", "5"],
    ["exists", "--p", "11", "--i1", "0:4", "--i2", "3:5"],
    ["experiment", "--p", "101", "--H", "200", "--trials", "2"],
    ["kloosterman", "--p", "9", "--a", "1", "--b", "1"],
    ["audit", "--p", "101", "--H", "20", "--J", "2", "--kind", "general"],
])
def test_invalid_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert len(err.strip().splitlines()) == 1 and "error" in err


def test_argparse_errors_exit_2():
    r = subprocess.run([sys.executable, "-m", "shortinv", "exists", "--p", "11", "--i1", "bad", "--i2", "1:2"],
                       capture_output=True, text=True)
    assert r.returncode == 2


def test_thresholds(capsys):
    code, out, _ = run(capsys, "thresholds", "--p", "1009", "--H", "100", "--X", "50")
    rep = json.loads(out)
    assert code == 0 and rep["thm3"] == pytest.approx(17879.4058577615)
    assert rep["thm4_J_min"] == pytest.approx(403.26, abs=0.01)


def test_weil_scan(capsys):
    code, out, _ = run(capsys, "weil-scan", "--p-max", "60", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 16
    assert all(float(r["margin"]) <= 1 for r in rows)


def test_meanvalue(capsys):
    code, out, _ = run(capsys, "meanvalue", "--p", "1009", "--H", "30", "--J", "30", "--seed", "1")
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "meanvalue", "--p", "101", "--H", "10", "--intervals", "1:8,20:29")
    assert code == 0 and json.loads(out)["J"] == 2


def test_experiment_csv_columns_and_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["experiment", "--p", "211", "--H", "10", "--kind", "x_spaced", "--X", "4",
            "--trials", "5", "--format", "csv", "--jobs", "2"]
    assert main(argv + ["-o", str(a)]) in (0, 1)
    assert main(argv + ["-o", str(b)]) in (0, 1)
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0]
    assert header == ",".join(EXPERIMENT_COLUMNS)


def test_experiment_json_roundtrip(tmp_path, capsys):
    f = tmp_path / "rep.json"
    assert main(["experiment", "--p", "211", "--H", "10", "--kind", "general", "--trials", "5", "-o", str(f)]) == 0
    rep = json.loads(f.read_text())
    assert rep["empirical_min_J"] >= 1 and rep["runtime"] is None
    code, out, _ = run(capsys, "verify", "--report", str(f))
    assert code == 0 and json.loads(out)["verified"]
    rep["empirical_min_J"] += 7
    f.write_text(json.dumps(rep))
    code, _, _ = run(capsys, "verify", "--report", str(f))
    assert code == 1


def test_experiment_record_runtime(capsys):
    code, out, _ = run(capsys, "experiment", "--p", "211", "--H", "60", "--trials", "3", "--record-runtime")
    assert code == 0 and json.loads(out)["runtime"] > 0


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--p", "1009", "--H", "150", "--K", "150", "--kind",
                       "x_spaced", "--X", "160", "--J", "5")
    rep = json.loads(out)
    assert code == 0 and rep["audits"][0]["ratio"] < 100


def test_jobs_env(monkeypatch):
    from shortinv import cli
    monkeypatch.setenv("SHORTINV_JOBS", "3")
    assert cli._jobs_default() == 3
    monkeypatch.setenv("SHORTINV_JOBS", "x")
    assert cli._jobs_default() == 1

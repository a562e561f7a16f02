import csv
import io
import json
import subprocess
import sys

import pytest

from gvp2.cli import CSV_COLUMNS, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_csv(capsys):
    code, out, _ = run(["compute", "--dmax", "3", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS
    body = [tuple(map(int, r)) for r in rows[1:]]
    assert (3, 0, 1, 27, 7, 27, 7) in body
    assert (3, 1, 0, -10, 10, 10, 10) in body


def test_compute_degree_one(capsys):
    code, out, _ = run(["compute", "--dmax", "1", "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data == [{"d": 1, "gd": 0, "n": [3], "N": [3], "E": [3], "M": [3]}]


def test_compute_table_format(capsys):
    code, out, _ = run(["compute", "--dmax", "2"], capsys)
    assert code == 0
    assert "d = 2" in out and "-6" in out


@pytest.mark.parametrize("argv", [
    ["compute", "--dmax", "0"],
    ["compute"],
    ["compute", "--dmax", "2", "--format", "xml"],
    ["frobnicate"],
    ["bench", "--floor-margin", "-1"],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert "usage error" in err


def test_export_json_schema(tmp_path, capsys):
    target = tmp_path / "tables.json"
    code, out, _ = run(["export", "--dmax", "4", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert [t["d"] for t in data] == [1, 2, 3, 4]
    for t in data:
        assert set(t) == {"d", "gd", "n", "N", "E", "M"}
        assert all(len(t[k]) == t["gd"] + 1 for k in ("n", "N", "E", "M"))


def test_thread_count_gives_identical_bytes(tmp_path, capsys, monkeypatch):
    paths = []
    for i, threads in enumerate(("1", "3")):
        path = tmp_path / f"out{i}.json"
        assert main(["export", "--dmax", "8", "--threads", threads, "--out", str(path)]) == 0
        paths.append(path)
    monkeypatch.setenv("GV_THREADS", "2")
    env_path = tmp_path / "env.json"
    assert main(["export", "--dmax", "8", "--out", str(env_path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes() == env_path.read_bytes()


def test_verify_single_identity(capsys):
    code, out, _ = run(["verify", "--identity", "q-binomial"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "pass"
    assert [r["name"] for r in report["results"]] == ["q-binomial"]


def test_verify_vacuous(capsys):
    code, out, _ = run(["verify", "--dmax", "1"], capsys)
    assert code == 0
    statuses = {r["status"] for r in json.loads(out)["results"]}
    assert statuses == {"pass", "skipped"}


def test_verify_reports_failures(capsys):
    code, out, _ = run(["verify", "--dmax", "6", "--identity", "C_{d,2}-table", "--identity", "E1"], capsys)
    report = json.loads(out)
    assert code == 1
    assert report["status"] == "fail"
    assert report["results"][1]["status"] == "pass"


def test_verify_unknown_identity(capsys):
    code, _, err = run(["verify", "--identity", "nope"], capsys)
    assert code == 3
    assert "nope" in err


def test_verify_list(capsys):
    code, out, _ = run(["verify", "--list"], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("q-binomial\t")


def test_precision_failure_exit_code(capsys, monkeypatch):
    from gvp2 import cli
    from gvp2.qseries import PrecisionError

    def broken(self, d):
        raise PrecisionError("floor too shallow")

    monkeypatch.setattr(cli.Pipeline, "table", broken)
    code, _, err = run(["compute", "--dmax", "2"], capsys)
    assert code == 2
    assert "degree 1" in err


def test_bench(capsys):
    code, out, _ = run(["bench", "--dmax", "12"], capsys)
    assert code == 0
    report = json.loads(out)
    counts = [row["triples"] for row in report["degrees"]]
    assert counts[1] == 9 and counts[11] == 7868
    assert counts == sorted(counts)
    for row in report["degrees"]:
        assert 0 < row["surviving_triples"] <= row["triples"]
    assert set(report["cache"]) >= {"hits", "misses", "hit_rate"}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gvp2", "compute", "--dmax", "1", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "1,0,0,3,3,3,3"

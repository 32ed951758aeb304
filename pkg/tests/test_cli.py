import hashlib
import json
import shutil

import pytest

from kinmerit.cli import run

REPORT_FILES = ["metadata.json", "pairs.csv"] + [f"table{i}.csv" for i in range(1, 7)]


def tree_digest(path):
    return {p.relative_to(path).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(path.rglob("*")) if p.is_file()}


def test_validate_fixture(fixture_dir, capsys):
    assert run(["validate", "--in", str(fixture_dir)]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_report_writes_tables(fixture_dir, tmp_path):
    before = tree_digest(fixture_dir)
    out = tmp_path / "out"
    assert run(["report", "--in", str(fixture_dir), "--out", str(out), "--quiet"]) == 0
    names = {p.name for p in out.iterdir()}
    assert set(REPORT_FILES) <= names
    meta = json.loads((out / "metadata.json").read_text())
    assert {"version", "config_echo", "timestamps", "skipped_publications", "warnings"} <= set(meta)
    assert meta["skipped_publications"] == 2 and meta["pairs"] == 2
    assert tree_digest(fixture_dir) == before


def test_report_json(fixture_dir, tmp_path):
    assert run(["report", "--in", str(fixture_dir), "--out", str(tmp_path), "--format", "json",
                "--quiet"]) == 0
    doc = json.loads((tmp_path / "table1.json").read_text())
    assert "children" in doc["groups"]


@pytest.mark.parametrize("cmd, produced", [
    ("score", ["baselines.csv", "scores.csv"]), ("rank", ["rankings.csv"]),
    ("detect", ["pairs.csv"]), ("compare", ["compare_overall.csv"]),
])
def test_other_subcommands(fixture_dir, tmp_path, cmd, produced):
    assert run([cmd, "--in", str(fixture_dir), "--out", str(tmp_path), "--quiet"]) == 0
    for name in produced + ["metadata.json"]:
        assert (tmp_path / name).is_file()


def test_synth_then_report(tmp_path):
    data, out = tmp_path / "synth", tmp_path / "out"
    assert run(["synth", "--seed", "42", "--out", str(data), "--quiet"]) == 0
    assert (data / "ground_truth.csv").is_file()
    assert run(["report", "--in", str(data), "--out", str(out), "--quiet"]) == 0
    assert set(REPORT_FILES) <= {p.name for p in out.iterdir()}


def test_power(tmp_path):
    cfg = tmp_path / "s.toml"
    cfg.write_text("n_sds = 3\nresearchers_per_sds = 20\nplanted_pairs = 2\n")
    assert run(["power", "--config", str(cfg), "--replications", "3", "--out",
                str(tmp_path / "p"), "--quiet"]) == 0
    doc = json.loads((tmp_path / "p" / "power.json").read_text())
    assert doc["replications"] == 3 and doc["n_planted"] == 6


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["report"], ["report", "--in", "x"], ["validate", "--bogus"],
    ["compare", "--in", "x", "--out", "y", "--dimension", "gender"],
    ["power", "--out", "p", "--replications", "0"],
])
def test_usage_errors(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 2


def test_out_equal_in_is_usage_error(fixture_dir, tmp_path):
    data = tmp_path / "d"
    shutil.copytree(fixture_dir, data)
    assert run(["report", "--in", str(data), "--out", str(data), "--quiet"]) == 2


def test_invalid_data_exits_one(fixture_dir, tmp_path, capsys):
    data = tmp_path / "d"
    shutil.copytree(fixture_dir, data)
    with open(data / "authorships.csv", "a") as fh:
        fh.write("P01,3,R77,U1\n")
    assert run(["validate", "--in", str(data)]) == 1
    assert "1 violations" in capsys.readouterr().out
    assert run(["report", "--in", str(data), "--out", str(tmp_path / "o"), "--quiet"]) == 1


def test_malformed_and_missing_input_exit_one(fixture_dir, tmp_path):
    data = tmp_path / "d"
    shutil.copytree(fixture_dir, data)
    (data / "roster.csv").write_text("garbage\n\x00\x01,,\n")
    assert run(["validate", "--in", str(data), "--quiet"]) == 1
    assert run(["validate", "--in", str(tmp_path / "nowhere"), "--quiet"]) == 1


def test_version(capsys):
    assert run(["--version"]) == 0
    assert capsys.readouterr().out.startswith("kinmerit ")

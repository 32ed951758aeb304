import csv
import json
import shutil

import pytest

from kinmerit.cohort import Comparison, CohortReport, GroupStats
from kinmerit.ingest import (
    ParseError, ValidationError, load_bundle, load_config, read_report, write_bundle,
    write_report,
)
from kinmerit.model import ObservationConfig
from kinmerit.stats import TTestResult


def count_data_lines(path):
    with open(path, encoding="utf-8") as fh:
        return sum(1 for line in fh if line.strip()) - 1


def test_fixture_counts(fixture_dir, fixture_bundle):
    assert count_data_lines(fixture_dir / "roster.csv") == 12
    assert count_data_lines(fixture_dir / "publications.csv") == 30
    assert len(fixture_bundle.researchers) == 12
    assert len(fixture_bundle.publications) == 30
    assert fixture_bundle.config.min_group_children == 1
    assert "ROSSI" in fixture_bundle.config.national_surname_exclusions
    assert fixture_bundle.config.regional_surname_exclusions["Sicilia"] == {"GALLO"}


@pytest.fixture
def copy_dir(fixture_dir, tmp_path):
    d = tmp_path / "data"
    shutil.copytree(fixture_dir, d)
    return d


def test_header_only_publications(copy_dir):
    (copy_dir / "publications.csv").write_text("pub_id,year,citations,categories\n")
    (copy_dir / "authorships.csv").write_text("pub_id,position,author_ref,university_id\n")
    assert load_bundle(copy_dir).publications == ()


def test_unknown_rank_token_names_row(copy_dir):
    p = copy_dir / "rank_events.csv"
    lines = p.read_text().splitlines()
    lines[4] = "R02,2002,LECTURER"
    p.write_text("\n".join(lines) + "\n")
    with pytest.raises(ParseError, match="row 5") as exc:
        load_bundle(copy_dir)
    assert exc.value.row == 5


def test_wrong_column_count(copy_dir):
    with open(copy_dir / "publications.csv", "a") as fh:
        fh.write("P99,2005,3\n")
    with pytest.raises(ParseError, match="expected 4 columns"):
        load_bundle(copy_dir)


def test_missing_file(copy_dir):
    (copy_dir / "taxonomy.csv").unlink()
    with pytest.raises(FileNotFoundError):
        load_bundle(copy_dir)


def test_validation_error(copy_dir):
    with open(copy_dir / "authorships.csv", "a") as fh:
        fh.write("P01,3,R77,U1\n")
    with pytest.raises(ValidationError) as exc:
        load_bundle(copy_dir)
    assert exc.value.report.kinds() == {"dangling_reference": 1}


def test_bundle_round_trip(fixture_bundle, tmp_path):
    write_bundle(fixture_bundle, tmp_path / "a")
    again = load_bundle(tmp_path / "a")
    assert again == fixture_bundle
    write_bundle(again, tmp_path / "b")
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
        assert b"\r\n" not in f.read_bytes()


def test_row_order_does_not_matter(copy_dir, fixture_bundle):
    for name in ("roster.csv", "rank_events.csv", "authorships.csv", "publications.csv"):
        p = copy_dir / name
        head, *rows = p.read_text().splitlines()
        p.write_text("\n".join([head] + rows[::-1]) + "\n")
    assert load_bundle(copy_dir) == fixture_bundle


def test_config_override(fixture_dir, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("window_start = 2005\nwelch = true\ntop10_fraction = 0.05\n")
    b = load_bundle(fixture_dir, config_path=cfg)
    assert (b.config.window_start, b.config.window_end) == (2005, 2008)
    assert b.config.welch and b.config.top_fractions == (0.2, 0.05)
    assert load_config(cfg).min_faculty_years == 3
    cfg.write_text("colour = 3\n")
    with pytest.raises(ParseError, match="unknown config keys"):
        load_config(cfg)


def table1_report():
    groups = (
        GroupStats("children", 2, 55.5, 0.0, 50.0, 50.0, 50.0, 0.0, 0.0),
        GroupStats("non_children_same_seniority", 3, 41.25, 33.333333333333336, 33.333333333333336,
                   33.333333333333336, 0.0, 0.0, 0.0),
        GroupStats("all_non_children", 0, None, None, None, None, None, None, None),
    )
    comps = (Comparison("", "children", "non_children_same_seniority",
                        TTestResult(1.25, 3, 0.2999), ""),
             Comparison("", "children", "all_non_children", None, "too small"))
    return CohortReport("overall", groups, comps, {"x": 1.5, "y": None},
                        {"config": {"window": [2004, 2008]}})


def test_report_csv_shape_and_round_trip(tmp_path):
    rep = table1_report()
    path = write_report(rep, tmp_path / "table1.csv", "csv")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["segment", "label", "n_observations", "avg_percentile",
                       "pct_no_publications", "pct_no_citations", "pct_above_median",
                       "pct_top20", "pct_top10", "pct_absolute_top"]
    assert [r[1] for r in rows[1:]] == [g.label for g in rep.groups]
    assert rows[3][3] == ""
    assert read_report(path, "csv") == rep


def test_report_json_keyed_by_group(tmp_path):
    rep = table1_report()
    path = write_report(rep, tmp_path / "table1.json", "json")
    doc = json.loads(path.read_text())
    assert list(doc["groups"]) == ["children", "non_children_same_seniority", "all_non_children"]
    assert doc["groups"]["children"]["avg_percentile"] == 55.5
    assert read_report(path, "json") == rep


def test_report_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        write_report(table1_report(), tmp_path / "missing" / "dir" / "t.csv")

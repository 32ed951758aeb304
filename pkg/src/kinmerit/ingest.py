"""On-disk formats: the dataset directory, the flat config file and report outputs.

A dataset directory holds::

    roster.csv            researcher_id,full_name,surname,university_id,region,sds_code,hire_year,leave_year
    rank_events.csv       researcher_id,year,rank
    publications.csv      pub_id,year,citations,categories      (categories ';'-separated)
    authorships.csv       pub_id,position,author_ref,university_id
    taxonomy.csv          sds_code,uda_code,life_science
    region_area.csv       region,area
    surnames_national.txt one surname per line                  (optional)
    surnames_regional.csv region,surname                        (optional)
    config.toml           flat key = value observation settings  (optional)

All emitted files are UTF-8 with LF line endings and rows in a canonical
order, so writing the same bundle twice gives identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, fields
from pathlib import Path
from typing import Any, Iterable, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .baseline import CitationBaseline
from .cohort import Comparison, CohortReport, GroupStats, TTestResult
from .kinship import KinshipPair
from .model import (
    Area, Authorship, DatasetBundle, FieldTaxonomy, ObservationConfig, Publication,
    Rank, Researcher, TaxonEntry, ValidationReport, validate_dataset,
)
from .ranking import RankedScore
from .scoring import ScoreCard

ROSTER_HEADER = ["researcher_id", "full_name", "surname", "university_id", "region",
                 "sds_code", "hire_year", "leave_year"]
RANK_EVENTS_HEADER = ["researcher_id", "year", "rank"]
PUBLICATIONS_HEADER = ["pub_id", "year", "citations", "categories"]
AUTHORSHIPS_HEADER = ["pub_id", "position", "author_ref", "university_id"]
TAXONOMY_HEADER = ["sds_code", "uda_code", "life_science"]
REGION_AREA_HEADER = ["region", "area"]
REGIONAL_SURNAMES_HEADER = ["region", "surname"]
BASELINES_HEADER = ["year", "category", "median", "n_cited"]
SCORES_HEADER = ["researcher_id", "P", "t_years", "n_publications", "n_cited_publications"]
RANKINGS_HEADER = ["researcher_id", "sds_code", "rank", "P", "percentile", "above_median",
                   "top20", "top10", "absolute_top", "bottom20", "bottom10"]
PAIRS_HEADER = ["child_id", "parent_ids", "university_id", "surname", "cardinality_class"]
GROUND_TRUTH_HEADER = ["child_id", "parent_id"]
TTESTS_HEADER = ["segment", "group_a", "group_b", "t_statistic", "degrees_of_freedom",
                 "p_two_tailed", "degenerate", "note"]

STAT_COLUMNS = ["n_observations", "avg_percentile", "pct_no_publications", "pct_no_citations",
                "pct_above_median", "pct_top20", "pct_top10", "pct_absolute_top"]
BOTTOM_COLUMNS = ["pct_bottom10", "pct_bottom20"]

REQUIRED_FILES = ("roster.csv", "rank_events.csv", "publications.csv", "authorships.csv",
                  "taxonomy.csv", "region_area.csv")


class ParseError(ValueError):
    """A malformed row or file; carries the file name and 1-based row number."""

    def __init__(self, path: Path | str, row: int | None, message: str):
        self.path = str(path)
        self.row = row
        where = f"{Path(path).name}" + (f", row {row}" if row is not None else "")
        super().__init__(f"{where}: {message}")


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        lines = "\n".join(f"  {v}" for v in report)
        super().__init__(f"{len(report)} validation violation(s):\n{lines}")


# ---------------------------------------------------------------- reading

def _rows(path: Path, header: Sequence[str]) -> Iterable[tuple[int, list[str]]]:
    """Yield (row number, cells); row 1 is the header."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise ParseError(path, None, "empty file, header expected") from None
        if [h.strip() for h in got] != list(header):
            raise ParseError(path, 1, f"header {got} does not match {list(header)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(path, lineno,
                                 f"expected {len(header)} columns, found {len(row)}")
            yield lineno, [c.strip() for c in row]


def _int(path, lineno, value, what):
    try:
        return int(value)
    except ValueError:
        raise ParseError(path, lineno, f"{what} {value!r} is not an integer") from None


def _read_config(path: Path) -> dict[str, Any]:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(path, None, str(exc)) from None
    known = {f.name for f in fields(ObservationConfig)} | {
        "entry_window_start", "entry_window_end", "top20_fraction", "top10_fraction"}
    unknown = set(raw) - known
    if unknown:
        raise ParseError(path, None, f"unknown config keys {sorted(unknown)}")
    kw: dict[str, Any] = {k: v for k, v in raw.items() if k not in
                          {"entry_window_start", "entry_window_end",
                           "top20_fraction", "top10_fraction"}}
    defaults = ObservationConfig()
    if "entry_window_start" in raw or "entry_window_end" in raw:
        kw["entry_window"] = (raw.get("entry_window_start", defaults.entry_window[0]),
                              raw.get("entry_window_end", defaults.entry_window[1]))
    if "top20_fraction" in raw or "top10_fraction" in raw:
        kw["top_fractions"] = (raw.get("top20_fraction", defaults.top_fractions[0]),
                               raw.get("top10_fraction", defaults.top_fractions[1]))
    for key in ("national_surname_exclusions", "regional_surname_exclusions",
                "region_area_map"):
        if key in kw:
            raise ParseError(path, None, f"{key} is read from its own file, not config")
    return kw


def load_config(path: Path | str, base: ObservationConfig | None = None) -> ObservationConfig:
    """Read a flat config file, overriding scalars of ``base`` (defaults if None)."""
    base = base or ObservationConfig()
    current = {f.name: getattr(base, f.name) for f in fields(ObservationConfig)}
    current.update(_read_config(Path(path)))
    return ObservationConfig(**current)


def load_bundle(directory: Path | str, config_path: Path | str | None = None,
                validate: bool = True) -> DatasetBundle:
    """Load and validate a dataset directory.

    ``config_path`` replaces the directory's own ``config.toml`` when given.
    Raises FileNotFoundError, ParseError or ValidationError.
    """
    d = Path(directory)
    for name in REQUIRED_FILES:
        if not (d / name).is_file():
            raise FileNotFoundError(f"missing required file {d / name}")

    events: dict[str, list[tuple[int, Rank]]] = {}
    p = d / "rank_events.csv"
    for lineno, (rid, year, rank) in _rows(p, RANK_EVENTS_HEADER):
        try:
            parsed = Rank.parse(rank)
        except ValueError as exc:
            raise ParseError(p, lineno, str(exc)) from None
        events.setdefault(rid, []).append((_int(p, lineno, year, "year"), parsed))

    researchers = []
    p = d / "roster.csv"
    for lineno, row in _rows(p, ROSTER_HEADER):
        rid, name, surname, uni, region, sds, hire, leave = row
        researchers.append(Researcher(
            researcher_id=rid, full_name=name, surname=surname, university_id=uni,
            region=region, sds_code=sds,
            rank_events=tuple(sorted(events.get(rid, []))),
            hire_year=_int(p, lineno, hire, "hire_year"),
            leave_year=_int(p, lineno, leave, "leave_year") if leave else None,
        ))
    roster_ids = {r.researcher_id for r in researchers}
    orphans = sorted(set(events) - roster_ids)
    if orphans:
        raise ParseError(d / "rank_events.csv", None,
                         f"rank events for researchers not on roster: {orphans}")

    authorships: dict[str, list[Authorship]] = {}
    p = d / "authorships.csv"
    for lineno, (pid, pos, ref, uni) in _rows(p, AUTHORSHIPS_HEADER):
        if not ref:
            raise ParseError(p, lineno, "empty author_ref")
        authorships.setdefault(pid, []).append(
            Authorship(_int(p, lineno, pos, "position"), ref, uni))

    publications = []
    p = d / "publications.csv"
    for lineno, (pid, year, cites, cats) in _rows(p, PUBLICATIONS_HEADER):
        publications.append(Publication(
            pub_id=pid, year=_int(p, lineno, year, "year"),
            citations=_int(p, lineno, cites, "citations"),
            categories=tuple(c.strip() for c in cats.split(";") if c.strip()),
            authorships=tuple(authorships.get(pid, ())),
        ))
    pub_ids = {pub.pub_id for pub in publications}
    orphans = sorted(set(authorships) - pub_ids)
    if orphans:
        raise ParseError(d / "authorships.csv", None,
                         f"authorships for unknown publications: {orphans}")

    entries = {}
    p = d / "taxonomy.csv"
    for lineno, (sds, uda, life) in _rows(p, TAXONOMY_HEADER):
        if life not in ("0", "1"):
            raise ParseError(p, lineno, f"life_science must be 0 or 1, got {life!r}")
        if sds in entries:
            raise ParseError(p, lineno, f"SDS {sds!r} listed twice")
        entries[sds] = TaxonEntry(uda, life == "1")
    taxonomy = FieldTaxonomy(entries)

    area_map = {}
    p = d / "region_area.csv"
    for lineno, (region, area) in _rows(p, REGION_AREA_HEADER):
        try:
            area_map[region] = Area.parse(area)
        except ValueError as exc:
            raise ParseError(p, lineno, str(exc)) from None

    national: set[str] = set()
    p = d / "surnames_national.txt"
    if p.is_file():
        national = {line.strip() for line in p.read_text(encoding="utf-8").splitlines()
                    if line.strip()}
    regional: dict[str, set[str]] = {}
    p = d / "surnames_regional.csv"
    if p.is_file():
        for _, (region, surname) in _rows(p, REGIONAL_SURNAMES_HEADER):
            regional.setdefault(region, set()).add(surname)

    scalars: dict[str, Any] = {}
    cfg_file = Path(config_path) if config_path is not None else d / "config.toml"
    if config_path is not None and not cfg_file.is_file():
        raise FileNotFoundError(f"missing config file {cfg_file}")
    if cfg_file.is_file():
        scalars = _read_config(cfg_file)
    config = ObservationConfig(**scalars, national_surname_exclusions=national,
                               regional_surname_exclusions=regional,
                               region_area_map=area_map)

    researchers.sort(key=lambda r: r.researcher_id)
    publications.sort(key=lambda x: x.pub_id)
    bundle = DatasetBundle(tuple(researchers), tuple(publications), taxonomy, config)
    if validate:
        report = validate_dataset(bundle.researchers, bundle.publications, taxonomy, config)
        if not report.ok:
            raise ValidationError(report)
    return bundle


# ---------------------------------------------------------------- writing

def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def _write_text(path: Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")


def dump_config(config: ObservationConfig) -> str:
    lines = [
        f"window_start = {config.window_start}",
        f"window_end = {config.window_end}",
        f"entry_window_start = {config.entry_window[0]}",
        f"entry_window_end = {config.entry_window[1]}",
        f"census_date = {json.dumps(config.census_date)}",
        f"min_faculty_years = {config.min_faculty_years}",
        f"sds_publishing_share_threshold = {config.sds_publishing_share_threshold!r}",
        f"bottom_tier_fraction = {config.bottom_tier_fraction!r}",
        f"bottom_decile_fraction = {config.bottom_decile_fraction!r}",
        f"top20_fraction = {config.top_fractions[0]!r}",
        f"top10_fraction = {config.top_fractions[1]!r}",
        f"absolute_top_fraction = {config.absolute_top_fraction!r}",
        f"min_group_children = {config.min_group_children}",
        f"welch = {'true' if config.welch else 'false'}",
    ]
    if config.advancement_horizon is not None:
        lines.append(f"advancement_horizon = {config.advancement_horizon}")
    return "\n".join(lines) + "\n"


def write_bundle(bundle: DatasetBundle, directory: Path | str) -> Path:
    """Write ``bundle`` in the canonical directory layout (inverse of :func:`load_bundle`)."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    researchers = sorted(bundle.researchers, key=lambda r: r.researcher_id)
    _write_csv(d / "roster.csv", ROSTER_HEADER, (
        (r.researcher_id, r.full_name, r.surname, r.university_id, r.region, r.sds_code,
         r.hire_year, r.leave_year) for r in researchers))
    _write_csv(d / "rank_events.csv", RANK_EVENTS_HEADER, (
        (r.researcher_id, y, k.name) for r in researchers for y, k in r.rank_events))
    pubs = sorted(bundle.publications, key=lambda x: x.pub_id)
    _write_csv(d / "publications.csv", PUBLICATIONS_HEADER, (
        (p.pub_id, p.year, p.citations, ";".join(p.categories)) for p in pubs))
    _write_csv(d / "authorships.csv", AUTHORSHIPS_HEADER, (
        (p.pub_id, a.position, a.author_ref, a.university_id)
        for p in pubs for a in p.authorships))
    _write_csv(d / "taxonomy.csv", TAXONOMY_HEADER, (
        (sds, e.uda_code, int(e.life_science))
        for sds, e in sorted(bundle.taxonomy.entries.items())))
    cfg = bundle.config
    _write_csv(d / "region_area.csv", REGION_AREA_HEADER, (
        (region, area.value) for region, area in sorted(cfg.region_area_map.items())))
    _write_text(d / "surnames_national.txt",
                "".join(s + "\n" for s in sorted(cfg.national_surname_exclusions)))
    _write_csv(d / "surnames_regional.csv", REGIONAL_SURNAMES_HEADER, (
        (region, s) for region, names in sorted(cfg.regional_surname_exclusions.items())
        for s in sorted(names)))
    _write_text(d / "config.toml", dump_config(cfg))
    return d


def write_baselines(baseline: CitationBaseline, path: Path | str) -> None:
    _write_csv(Path(path), BASELINES_HEADER, (
        (year, cat, baseline.cells[(year, cat)], baseline.n_cited[(year, cat)])
        for year, cat in sorted(baseline.cells)))


def write_scores(cards: dict[str, ScoreCard], path: Path | str) -> None:
    _write_csv(Path(path), SCORES_HEADER, (
        (c.researcher_id, c.P, c.t_years, c.n_publications, c.n_cited_publications)
        for _, c in sorted(cards.items())))


def write_rankings(ranked: dict[str, RankedScore], path: Path | str) -> None:
    _write_csv(Path(path), RANKINGS_HEADER, (
        (r.researcher_id, r.cohort_key[0], r.cohort_key[1].name, r.P, r.percentile,
         r.tiers.above_median, r.tiers.top20, r.tiers.top10, r.tiers.absolute_top,
         r.tiers.bottom20, r.tiers.bottom10)
        for _, r in sorted(ranked.items())))


def write_pairs(pairs: Sequence[KinshipPair], path: Path | str) -> None:
    _write_csv(Path(path), PAIRS_HEADER, (
        (p.child_id, ";".join(sorted(p.parent_ids)), p.university_id, p.surname,
         p.cardinality_class.value) for p in pairs))


def read_pairs(path: Path | str) -> list[tuple[str, tuple[str, ...], str, str, str]]:
    return [(c, tuple(ps.split(";")), u, s, k) for _, (c, ps, u, s, k) in
            _rows(Path(path), PAIRS_HEADER)]


def write_ground_truth(pairs: Iterable[tuple[str, str]], path: Path | str) -> None:
    _write_csv(Path(path), GROUND_TRUTH_HEADER, sorted(pairs))


def read_ground_truth(path: Path | str) -> list[tuple[str, str]]:
    return [(c, p) for _, (c, p) in _rows(Path(path), GROUND_TRUTH_HEADER)]


# ---------------------------------------------------------------- reports

def _report_columns(report: CohortReport) -> list[str]:
    cols = ["segment", "label"] + STAT_COLUMNS
    if any(g.pct_bottom10 is not None or g.pct_bottom20 is not None for g in report.groups):
        cols += BOTTOM_COLUMNS
    return cols


def _group_key(g: GroupStats) -> str:
    return f"{g.segment}/{g.label}" if g.segment else g.label


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def report_to_json(report: CohortReport) -> str:
    doc = {
        "dimension": report.dimension,
        "groups": {_group_key(g): asdict(g) for g in report.groups},
        "comparisons": [
            {"segment": c.segment, "group_a": c.group_a, "group_b": c.group_b,
             "result": None if c.result is None else asdict(c.result), "note": c.note}
            for c in report.comparisons],
        "summary": dict(report.summary),
        "metadata": dict(report.metadata),
    }
    return json.dumps(_json_safe(doc), indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _sidecars(path: Path) -> tuple[Path, Path]:
    return (path.with_name(path.stem + "_ttests.csv"),
            path.with_name(path.stem + "_meta.json"))


def write_report(report: CohortReport, path: Path | str, format: str = "csv") -> Path:
    """Write a cohort report as CSV (plus two sidecar files) or a single JSON document.

    CSV layout: one row per group and one column per statistic; the t-tests
    go to ``<stem>_ttests.csv`` and dimension/summary/metadata to
    ``<stem>_meta.json`` so that :func:`read_report` can rebuild the report.
    """
    path = Path(path)
    if format == "json":
        _write_text(path, report_to_json(report))
        return path
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    cols = _report_columns(report)
    _write_csv(path, cols, ([getattr(g, c) for c in cols] for g in report.groups))
    tests_path, meta_path = _sidecars(path)
    _write_csv(tests_path, TTESTS_HEADER, (
        (c.segment, c.group_a, c.group_b,
         *((None, None, None, None) if c.result is None else
           (c.result.t_statistic, c.result.degrees_of_freedom, c.result.p_two_tailed,
            c.result.degenerate)),
         c.note) for c in report.comparisons))
    meta = {"dimension": report.dimension, "summary": dict(report.summary),
            "metadata": dict(report.metadata)}
    _write_text(meta_path, json.dumps(_json_safe(meta), indent=2, ensure_ascii=False) + "\n")
    return path


def _num(value: str, kind=float):
    if value == "":
        return None
    return kind(value)


def _df(value: str):
    if value == "":
        return None
    number = float(value)
    return int(number) if number.is_integer() and "." not in value else number


def _group_from_dict(d: dict) -> GroupStats:
    return GroupStats(**d)


def read_report(path: Path | str, format: str = "csv") -> CohortReport:
    path = Path(path)
    if format == "json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        groups = tuple(_group_from_dict(g) for g in doc["groups"].values())
        comps = tuple(
            Comparison(c["segment"], c["group_a"], c["group_b"],
                       None if c["result"] is None else TTestResult(
                           **{k: float(v) if isinstance(v, str) else v
                              for k, v in c["result"].items()}),
                       c["note"])
            for c in doc["comparisons"])
        return CohortReport(doc["dimension"], groups, comps, doc["summary"], doc["metadata"])
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    with open(path, encoding="utf-8", newline="") as fh:
        header = next(csv.reader(fh))
    groups = []
    for _, row in _rows(path, header):
        rec = dict(zip(header, row))
        kw: dict[str, Any] = {"segment": rec["segment"], "label": rec["label"],
                              "n_observations": int(rec["n_observations"])}
        for c in STAT_COLUMNS[1:] + BOTTOM_COLUMNS:
            if c in rec:
                kw[c] = _num(rec[c])
        groups.append(GroupStats(**kw))
    tests_path, meta_path = _sidecars(path)
    comps = []
    for _, (seg, a, b, t, df, p, degenerate, note) in _rows(tests_path, TTESTS_HEADER):
        result = None
        if t != "":
            result = TTestResult(float(t), _df(df), float(p), degenerate == "1")
        comps.append(Comparison(seg, a, b, result, note))
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    return CohortReport(meta["dimension"], tuple(groups), tuple(comps),
                        meta["summary"], meta["metadata"])

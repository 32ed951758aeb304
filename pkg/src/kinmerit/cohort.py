"""Comparison groups, their summary statistics and the report tables.

Percentiles used here always come from the global SDS x rank ranking; a
group's statistics never re-rank its members among themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .kinship import KinshipPair, entry_year
from .model import UDA_LABELS, Area, DatasetBundle, ObservationConfig
from .ranking import RankedScore
from .scoring import ScoreCard
from .stats import InsufficientDataError, TTestResult, students_t_test

DIMENSIONS = ("overall", "uda", "area", "advancement", "parents")

CHILDREN = "children"
CONTROLS = "non_children_same_seniority"
ALL_NON_CHILDREN = "all_non_children"
PARENTS = "parents"
NON_PARENTS = "non_parents"


@dataclass(frozen=True)
class GroupStats:
    label: str
    n_observations: int
    avg_percentile: float | None
    pct_no_publications: float | None
    pct_no_citations: float | None
    pct_above_median: float | None
    pct_top20: float | None
    pct_top10: float | None
    pct_absolute_top: float | None
    pct_bottom10: float | None = None
    pct_bottom20: float | None = None
    segment: str = ""


@dataclass(frozen=True)
class Comparison:
    segment: str
    group_a: str
    group_b: str
    result: TTestResult | None
    note: str = ""


@dataclass(frozen=True)
class CohortReport:
    dimension: str
    groups: tuple[GroupStats, ...]
    comparisons: tuple[Comparison, ...]
    summary: Mapping[str, float | None] = field(default_factory=dict)
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def group(self, label: str, segment: str = "") -> GroupStats:
        for g in self.groups:
            if g.label == label and g.segment == segment:
                return g
        raise KeyError((segment, label))

    def segments(self) -> list[str]:
        return list(dict.fromkeys(g.segment for g in self.groups))

    def only_segment(self, segment: str) -> "CohortReport":
        return CohortReport(
            self.dimension,
            tuple(g for g in self.groups if g.segment == segment),
            tuple(c for c in self.comparisons if c.segment == segment),
            self.summary, self.metadata)


def config_echo(config: ObservationConfig) -> dict[str, Any]:
    return {
        "window": [config.window_start, config.window_end],
        "entry_window": list(config.entry_window),
        "census_date": config.census_date,
        "min_faculty_years": config.min_faculty_years,
        "sds_publishing_share_threshold": config.sds_publishing_share_threshold,
        "bottom_tier_fraction": config.bottom_tier_fraction,
        "bottom_decile_fraction": config.bottom_decile_fraction,
        "top_fractions": list(config.top_fractions),
        "absolute_top_fraction": config.absolute_top_fraction,
        "advancement_horizon": config.horizon,
        "min_group_children": config.min_group_children,
        "t_test": "welch" if config.welch else "pooled",
        "n_national_exclusions": len(config.national_surname_exclusions),
        "n_regional_exclusions": sum(len(v) for v in config.regional_surname_exclusions.values()),
    }


def report_metadata(bundle: DatasetBundle,
                    scorecards: Mapping[str, ScoreCard]) -> dict[str, Any]:
    return {
        "config": config_echo(bundle.config),
        "t_test_input": "percentile",
        "absolute_top_definition": f"percentile >= {100 * (1 - bundle.config.absolute_top_fraction):g}",
        "skipped_publications": sum(c.n_skipped for c in scorecards.values()),
        "renormalized_weightings": sum(c.n_renormalized for c in scorecards.values()),
    }


def seniority_matched_controls(children: Iterable[str], bundle: DatasetBundle) -> set[str]:
    """Non-children who entered or advanced to a junior rank in the entry window."""
    children = set(children)
    return {r.researcher_id for r in bundle.researchers
            if r.researcher_id not in children and entry_year(r, bundle) is not None}


def _pct(count: int, n: int) -> float:
    return 100.0 * count / n


def group_stats(label: str, researcher_ids: Sequence[str],
                ranked: Mapping[str, RankedScore], scorecards: Mapping[str, ScoreCard],
                with_bottom: bool = False, segment: str = "") -> GroupStats:
    """Average percentile and tier shares (in %) over a group.

    ``researcher_ids`` may repeat an id (one parent matched to two children
    counts twice). An empty group yields n = 0 and None everywhere.
    """
    ids = list(researcher_ids)
    n = len(ids)
    if n == 0:
        return GroupStats(label, 0, *([None] * 7),
                          pct_bottom10=None, pct_bottom20=None, segment=segment)
    rs = [ranked[i] for i in ids]
    cards = [scorecards[i] for i in ids]
    return GroupStats(
        label=label,
        n_observations=n,
        avg_percentile=sum(r.percentile for r in rs) / n,
        pct_no_publications=_pct(sum(not c.has_publications for c in cards), n),
        pct_no_citations=_pct(sum(not c.has_citations for c in cards), n),
        pct_above_median=_pct(sum(r.tiers.above_median for r in rs), n),
        pct_top20=_pct(sum(r.tiers.top20 for r in rs), n),
        pct_top10=_pct(sum(r.tiers.top10 for r in rs), n),
        pct_absolute_top=_pct(sum(r.tiers.absolute_top for r in rs), n),
        pct_bottom10=_pct(sum(r.tiers.bottom10 for r in rs), n) if with_bottom else None,
        pct_bottom20=_pct(sum(r.tiers.bottom20 for r in rs), n) if with_bottom else None,
        segment=segment,
    )


def compare(segment: str, label_a: str, ids_a: Sequence[str], label_b: str,
            ids_b: Sequence[str], ranked: Mapping[str, RankedScore],
            welch: bool = False) -> Comparison:
    a = [ranked[i].percentile for i in ids_a]
    b = [ranked[i].percentile for i in ids_b]
    try:
        result = students_t_test(a, b, welch=welch)
    except InsufficientDataError as exc:
        return Comparison(segment, label_a, label_b, None, str(exc))
    return Comparison(segment, label_a, label_b, result,
                      "degenerate: zero variance in both groups" if result.degenerate else "")


def advanced_in_rank(researcher_id: str, bundle: DatasetBundle) -> bool:
    """Promotion to a strictly higher rank after cohort entry, up to the horizon."""
    r = bundle.researcher(researcher_id)
    entry = entry_year(r, bundle)
    if entry is None:
        return False
    entry_rank = r.rank_at(entry)
    horizon = bundle.config.horizon
    return any(entry < y <= horizon and rank > entry_rank for y, rank in r.rank_events)


def _children_and_controls(bundle: DatasetBundle, pairs: Sequence[KinshipPair],
                           ranked: Mapping[str, RankedScore]) -> tuple[list[str], list[str]]:
    child_ids = {p.child_id for p in pairs}
    children = sorted(c for c in child_ids if c in ranked)
    controls = sorted(c for c in seniority_matched_controls(child_ids, bundle) if c in ranked)
    return children, controls


def _share(part: int, whole: int) -> float | None:
    return None if whole == 0 else 100.0 * part / whole


def career_advancement_analysis(bundle: DatasetBundle, pairs: Sequence[KinshipPair],
                                ranked: Mapping[str, RankedScore],
                                scorecards: Mapping[str, ScoreCard]) -> CohortReport:
    """Split children and controls by promotion and flag bottom-tier promotions."""
    cfg = bundle.config
    children, controls = _children_and_controls(bundle, pairs, ranked)
    split = {}
    for name, members in ((CHILDREN, children), ("non_children", controls)):
        flags = {i: advanced_in_rank(i, bundle) for i in members}
        adv = [i for i in members if flags[i]]
        stay = [i for i in members if not flags[i]]
        split[name] = (stay, adv)
    groups = []
    for name, (stay, adv) in split.items():
        groups.append(group_stats(f"{name}_not_advanced", stay, ranked, scorecards, True))
        groups.append(group_stats(f"{name}_advanced", adv, ranked, scorecards, True))
    comps = (
        compare("", f"{CHILDREN}_advanced", split[CHILDREN][1],
                "non_children_not_advanced", split["non_children"][0], ranked, cfg.welch),
        compare("", f"{CHILDREN}_not_advanced", split[CHILDREN][0],
                "non_children_advanced", split["non_children"][1], ranked, cfg.welch),
    )
    summary: dict[str, float | None] = {}
    for name, (stay, adv) in split.items():
        members = stay + adv
        summary[f"{name}_advanced_share"] = _share(len(adv), len(members))
        summary[f"{name}_potential_nepotism_rate"] = _share(
            sum(ranked[i].tiers.bottom20 for i in adv), len(adv))
        top = [i for i in members if ranked[i].tiers.top20]
        summary[f"{name}_top20_not_advanced_share"] = _share(
            len(set(top) & set(stay)), len(top))
    return CohortReport("advancement", tuple(groups), comps, summary,
                        report_metadata(bundle, scorecards))


def _overall(bundle, pairs, ranked, scorecards):
    cfg = bundle.config
    children, controls = _children_and_controls(bundle, pairs, ranked)
    child_keys = {ranked[c].cohort_key for c in children}
    child_set = set(children)
    everyone_else = sorted(i for i, r in ranked.items()
                           if i not in child_set and r.cohort_key in child_keys)
    groups = (group_stats(CHILDREN, children, ranked, scorecards),
              group_stats(CONTROLS, controls, ranked, scorecards),
              group_stats(ALL_NON_CHILDREN, everyone_else, ranked, scorecards))
    comps = (compare("", CHILDREN, children, CONTROLS, controls, ranked, cfg.welch),
             compare("", CHILDREN, children, ALL_NON_CHILDREN, everyone_else, ranked, cfg.welch))
    return groups, comps, {}


def _segmented(segment_of, order, bundle, pairs, ranked, scorecards, with_total):
    cfg = bundle.config
    children, controls = _children_and_controls(bundle, pairs, ranked)
    groups, comps = [], []
    segments = [(s, [c for c in children if segment_of(c) == s],
                 [c for c in controls if segment_of(c) == s]) for s in order]
    if with_total:
        segments.append(("Total", children, controls))
    for seg, kids, ctrl in segments:
        groups.append(group_stats(CHILDREN, kids, ranked, scorecards, segment=seg))
        groups.append(group_stats(CONTROLS, ctrl, ranked, scorecards, segment=seg))
        comps.append(compare(seg, CHILDREN, kids, CONTROLS, ctrl, ranked, cfg.welch))
    return tuple(groups), tuple(comps)


def _by_uda(bundle, pairs, ranked, scorecards):
    tax = bundle.taxonomy
    children, controls = _children_and_controls(bundle, pairs, ranked)
    uda = {i: tax.uda(bundle.researcher(i).sds_code) for i in children + controls}
    counts: dict[str, int] = {}
    for c in children:
        counts[uda[c]] = counts.get(uda[c], 0) + 1
    big = {u for u, n in counts.items() if n >= bundle.config.min_group_children}
    present = sorted(set(uda.values()))
    order = sorted(big) + (["Other"] if any(u not in big for u in present) else [])
    groups, comps = _segmented(lambda i: uda[i] if uda[i] in big else "Other", order,
                               bundle, pairs, ranked, scorecards, with_total=True)
    labels = {u: UDA_LABELS.get(u, u) for u in big}
    return groups, comps, {}, {"uda_labels": labels}


def _by_area(bundle, pairs, ranked, scorecards):
    area_map = bundle.config.region_area_map
    children, controls = _children_and_controls(bundle, pairs, ranked)
    area = {i: area_map[bundle.researcher(i).region].value for i in children + controls}
    order = [a.value for a in Area if a.value in set(area.values())]
    groups, comps = _segmented(area.get, order, bundle, pairs, ranked, scorecards,
                               with_total=False)
    summary = {}
    n_c, n_nc = len(children), len(controls)
    for a in order:
        summary[f"{a}_children_share"] = _share(sum(area[i] == a for i in children), n_c)
        summary[f"{a}_non_children_share"] = _share(sum(area[i] == a for i in controls), n_nc)
    return groups, comps, summary


def _representative_parent(parent_ids: Iterable[str], bundle: DatasetBundle,
                           ranked: Mapping[str, RankedScore]) -> str | None:
    """The longest-serving full professor among the pair's ranked parents."""
    candidates = [p for p in parent_ids if p in ranked]
    if not candidates:
        return None
    return min(candidates, key=lambda p: (bundle.researcher(p).full_since() or 0, p))


def _parents(bundle, pairs, ranked, scorecards):
    cfg = bundle.config
    parent_set = sorted({p for pair in pairs for p in pair.parent_ids if p in ranked})
    keys = {ranked[p].cohort_key for p in parent_set}
    pset = set(parent_set)
    non_parents = sorted(i for i, r in ranked.items() if i not in pset and r.cohort_key in keys)
    seg5, seg6 = "parents_vs_non_parents", "children_vs_parents"
    groups = [group_stats(PARENTS, parent_set, ranked, scorecards, segment=seg5),
              group_stats(NON_PARENTS, non_parents, ranked, scorecards, segment=seg5)]
    comps = [compare(seg5, PARENTS, parent_set, NON_PARENTS, non_parents, ranked, cfg.welch)]
    kids, elders = [], []
    for pair in sorted(pairs, key=lambda p: p.child_id):
        if pair.child_id not in ranked:
            continue
        parent = _representative_parent(pair.parent_ids, bundle, ranked)
        if parent is None:
            continue
        kids.append(pair.child_id)
        elders.append(parent)
    groups += [group_stats(CHILDREN, kids, ranked, scorecards, segment=seg6),
               group_stats(PARENTS, elders, ranked, scorecards, segment=seg6)]
    comps.append(compare(seg6, CHILDREN, kids, PARENTS, elders, ranked, cfg.welch))
    return tuple(groups), tuple(comps), {}


def build_report(bundle: DatasetBundle, pairs: Sequence[KinshipPair],
                 ranked: Mapping[str, RankedScore], scorecards: Mapping[str, ScoreCard],
                 dimension: str = "overall") -> CohortReport:
    """Assemble one comparison table.

    ``overall``: children, seniority-matched controls and all non-children
    sharing the children's SDS x rank cohorts. ``uda`` and ``area``:
    children vs controls per disciplinary area or geographic area.
    ``advancement``: see :func:`career_advancement_analysis`. ``parents``:
    two segments, parents vs non-parents of the same cohorts, and children
    vs one linked parent per pair where both are ranked.
    """
    if dimension not in DIMENSIONS:
        raise ValueError(f"unknown dimension {dimension!r}; expected one of {DIMENSIONS}")
    if dimension == "advancement":
        return career_advancement_analysis(bundle, pairs, ranked, scorecards)
    meta = report_metadata(bundle, scorecards)
    if dimension == "overall":
        groups, comps, summary = _overall(bundle, pairs, ranked, scorecards)
    elif dimension == "uda":
        groups, comps, summary, extra = _by_uda(bundle, pairs, ranked, scorecards)
        meta.update(extra)
    elif dimension == "area":
        groups, comps, summary = _by_area(bundle, pairs, ranked, scorecards)
    else:
        groups, comps, summary = _parents(bundle, pairs, ranked, scorecards)
    return CohortReport(dimension, tuple(groups), tuple(comps), summary, meta)

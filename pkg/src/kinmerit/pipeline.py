"""Run the whole chain: baselines, scores, rankings, kinship pairs, report tables."""

from __future__ import annotations

from dataclasses import dataclass

from .baseline import CitationBaseline, compute_baselines
from .cohort import CohortReport, build_report
from .kinship import KinshipLink, KinshipPair, find_pairs
from .model import DatasetBundle
from .ranking import RankedScore, rank_population
from .scoring import ScoreCard, score_all

TABLES = {
    "table1": ("overall", None),
    "table2": ("uda", None),
    "table3": ("area", None),
    "table4": ("advancement", None),
    "table5": ("parents", "parents_vs_non_parents"),
    "table6": ("parents", "children_vs_parents"),
}


@dataclass(frozen=True)
class PipelineResult:
    bundle: DatasetBundle
    baseline: CitationBaseline
    scorecards: dict[str, ScoreCard]
    ranked: dict[str, RankedScore]
    links: list[KinshipLink]
    pairs: list[KinshipPair]

    def report(self, dimension: str) -> CohortReport:
        return build_report(self.bundle, self.pairs, self.ranked, self.scorecards, dimension)

    def tables(self) -> dict[str, CohortReport]:
        built: dict[str, CohortReport] = {}
        out = {}
        for name, (dimension, segment) in TABLES.items():
            if dimension not in built:
                built[dimension] = self.report(dimension)
            rep = built[dimension]
            out[name] = rep if segment is None else rep.only_segment(segment)
        return out


def run_pipeline(bundle: DatasetBundle) -> PipelineResult:
    baseline = compute_baselines(bundle.publications)
    cards = score_all(bundle, baseline)
    ranked = rank_population(bundle, cards)
    links, pairs = find_pairs(bundle)
    return PipelineResult(bundle, baseline, cards, ranked, links, pairs)

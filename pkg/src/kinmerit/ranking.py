"""Eligibility filters and percentile ranks within SDS x academic-rank cohorts."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .model import DatasetBundle, ObservationConfig, Rank
from .scoring import ScoreCard

CohortKey = tuple[str, Rank]


@dataclass(frozen=True)
class TierFlags:
    above_median: bool
    top20: bool
    top10: bool
    absolute_top: bool
    bottom20: bool
    bottom10: bool


@dataclass(frozen=True)
class RankedScore:
    researcher_id: str
    cohort_key: CohortKey
    P: float
    percentile: float
    tiers: TierFlags


def eligible_sds(bundle: DatasetBundle, scorecards: Mapping[str, ScoreCard]) -> set[str]:
    """SDS codes where the publishing share among scored researchers meets the threshold."""
    total: dict[str, int] = defaultdict(int)
    publishing: dict[str, int] = defaultdict(int)
    for rid, card in scorecards.items():
        sds = bundle.researcher(rid).sds_code
        total[sds] += 1
        publishing[sds] += card.has_publications
    threshold = Fraction(str(bundle.config.sds_publishing_share_threshold))
    return {sds for sds, n in total.items() if Fraction(publishing[sds], n) >= threshold}


def eligible_researchers(bundle: DatasetBundle,
                         scorecards: Mapping[str, ScoreCard] | None = None) -> set[str]:
    """Researchers with enough faculty years, in an SDS that passes :func:`eligible_sds`.

    Without ``scorecards`` only the faculty-years condition is applied.
    """
    cfg = bundle.config
    keep = {r.researcher_id for r in bundle.researchers
            if cfg.faculty_years(r) >= cfg.min_faculty_years}
    if scorecards is None:
        return keep
    sds_ok = eligible_sds(bundle, scorecards)
    return {rid for rid in keep if bundle.researcher(rid).sds_code in sds_ok}


def midrank_counts(values: Iterable[float]) -> np.ndarray:
    """Twice the midrank count per member: 2*#{k != j: v_k < v_j} + #{k != j: v_k == v_j}.

    Integer-valued, so the percentile is 50 * count / (n - 1) without any
    rounding in the pairwise part.
    """
    v = np.asarray(list(values), dtype=float)
    s = np.sort(v)
    below = np.searchsorted(s, v, side="left")
    ties = np.searchsorted(s, v, side="right") - below - 1
    return 2 * below + ties


def percentile_ranks(scores: Mapping[str, float] | Iterable[tuple[str, float]],
                     exact: bool = False) -> dict[str, float | Fraction]:
    """Midrank percentiles (0 worst, 100 best) for one cohort.

    Member j gets ``100 * (#lower + 0.5 * #tied_others) / (n - 1)``. A cohort
    of one is placed at 50. With ``exact=True`` values are Fractions.
    """
    items = list(scores.items()) if isinstance(scores, Mapping) else list(scores)
    n = len(items)
    if n == 0:
        raise ValueError("empty cohort")
    ids = [rid for rid, _ in items]
    if len(set(ids)) != n:
        raise ValueError("duplicate researcher id in cohort")
    if n == 1:
        return {ids[0]: Fraction(50) if exact else 50.0}
    counts = midrank_counts(p for _, p in items)
    if exact:
        return {rid: Fraction(50 * int(c), n - 1) for rid, c in zip(ids, counts)}
    return {rid: 50.0 * int(c) / (n - 1) for rid, c in zip(ids, counts)}


def _upper_threshold(fraction: float) -> float:
    return round(100.0 * (1.0 - fraction), 9)


def classify_tiers(percentile: float, config: ObservationConfig) -> TierFlags:
    top20, top10 = config.top_fractions
    return TierFlags(
        above_median=percentile > 50,
        top20=percentile >= _upper_threshold(top20),
        top10=percentile >= _upper_threshold(top10),
        absolute_top=percentile >= _upper_threshold(config.absolute_top_fraction),
        bottom20=percentile < round(100.0 * config.bottom_tier_fraction, 9),
        bottom10=percentile < round(100.0 * config.bottom_decile_fraction, 9),
    )


def cohort_key(bundle: DatasetBundle, researcher_id: str) -> CohortKey | None:
    r = bundle.researcher(researcher_id)
    rank = r.rank_at(bundle.config.window_end)
    return None if rank is None else (r.sds_code, rank)


def rank_population(bundle: DatasetBundle,
                    scorecards: Mapping[str, ScoreCard]) -> dict[str, RankedScore]:
    """Rank every eligible researcher against their SDS x rank-at-window-end cohort."""
    eligible = eligible_researchers(bundle, scorecards)
    cohorts: dict[CohortKey, dict[str, float]] = defaultdict(dict)
    for rid in sorted(eligible):
        key = cohort_key(bundle, rid)
        if key is not None and rid in scorecards:
            cohorts[key][rid] = scorecards[rid].P
    ranked = {}
    for key in sorted(cohorts, key=lambda k: (k[0], k[1].value)):
        members = cohorts[key]
        for rid, pct in percentile_ranks(members).items():
            ranked[rid] = RankedScore(rid, key, members[rid], pct,
                                      classify_tiers(pct, bundle.config))
    return dict(sorted(ranked.items()))

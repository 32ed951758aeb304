"""Research productivity ranking and same-surname kinship cohort analysis."""

__version__ = "0.1.0"

from .baseline import CitationBaseline, compute_baselines, normalized_impact
from .cohort import (
    CohortReport, GroupStats, build_report, career_advancement_analysis, group_stats,
    seniority_matched_controls,
)
from .ingest import load_bundle, read_report, write_bundle, write_report
from .kinship import (
    KinshipLink, KinshipPair, candidate_children, candidate_parents, detect_links,
    find_pairs, resolve_pairs,
)
from .model import (
    DatasetBundle, FieldTaxonomy, ObservationConfig, Publication, Rank, Researcher,
    validate_dataset,
)
from .pipeline import PipelineResult, run_pipeline
from .ranking import (
    classify_tiers, eligible_researchers, eligible_sds, percentile_ranks, rank_population,
)
from .scoring import ScoreCard, author_weight, author_weights, productivity, score_all
from .stats import TTestResult, students_t_test
from .synthgen import SynthConfig, detection_power, generate

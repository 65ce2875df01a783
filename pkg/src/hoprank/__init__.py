"""Toolkit for expert elicitation over attack scenarios: collect rankings of
attack vectors and interval ratings of their hops, then analyze consensus,
agreement, outliers, and hop-derived difficulty rankings."""

from .aggregation import (
    AggregationMethod,
    IntervalStats,
    MissingResponseError,
    OwaWeights,
    av_score,
    derive_ranking,
    interval_stats,
    owa,
    owa_weights,
)
from .consensus import (
    AgreementMatrix,
    GroupStats,
    MethodResult,
    OutlierLabel,
    OutlierThresholds,
    ScatterPoint,
    agreement_matrix,
    classify_outliers,
    cohort_concordance,
    cohort_method_comparison,
    expert_agreement,
    group_mean_ranking,
    group_vs_set,
    mean_ranks,
    method_comparison,
    scatter_distances,
)
from .dataio import (
    Dataset,
    DatasetError,
    DatasetFormatError,
    DatasetValidationError,
    Provenance,
    dataset_hash,
    load_dataset,
    save_dataset,
)
from .model import (
    AttackVector,
    Expert,
    Hop,
    IntervalResponse,
    Question,
    Ranking,
    RankingSheet,
    Scenario,
    Violation,
    validate_scenario,
)
from .rankstats import (
    AgreementStats,
    ConcordanceStat,
    footrule,
    kendall_w,
    random_rankings,
    ranks_from_scores,
    spearman_rho,
)
from .report import (
    ALL_METHODS,
    AnalysisReport,
    BaselineStats,
    ReportConfig,
    random_baseline,
    run_report,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationMethod",
    "AgreementMatrix",
    "AgreementStats",
    "ALL_METHODS",
    "AnalysisReport",
    "AttackVector",
    "BaselineStats",
    "ConcordanceStat",
    "Dataset",
    "DatasetError",
    "DatasetFormatError",
    "DatasetValidationError",
    "Expert",
    "GroupStats",
    "Hop",
    "IntervalResponse",
    "IntervalStats",
    "MethodResult",
    "MissingResponseError",
    "OutlierLabel",
    "OutlierThresholds",
    "OwaWeights",
    "Provenance",
    "Question",
    "Ranking",
    "RankingSheet",
    "ReportConfig",
    "ScatterPoint",
    "Scenario",
    "Violation",
    "agreement_matrix",
    "av_score",
    "classify_outliers",
    "cohort_concordance",
    "cohort_method_comparison",
    "dataset_hash",
    "derive_ranking",
    "expert_agreement",
    "footrule",
    "group_mean_ranking",
    "group_vs_set",
    "interval_stats",
    "kendall_w",
    "load_dataset",
    "mean_ranks",
    "method_comparison",
    "owa",
    "owa_weights",
    "random_baseline",
    "random_rankings",
    "ranks_from_scores",
    "run_report",
    "save_dataset",
    "scatter_distances",
    "spearman_rho",
    "validate_scenario",
    "__version__",
]

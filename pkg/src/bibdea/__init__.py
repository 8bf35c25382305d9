"""Field-standardized research output indicators and DEA efficiency scoring
of university research units, with percentile and cost-weighted reporting."""

from .analytics import (
    AggregateScores,
    EligibilityDecision,
    Histogram,
    PercentileScore,
    QuadrantSummary,
    aggregate_weighted,
    efficiency_matrix,
    eligibility_filter,
    histogram,
    percentile_rank,
    percentile_scores,
    productivity_ratio,
    rank_divergence,
)
from .bibliometrics import (
    StandardizedPublication,
    first_last_share_dmu,
    fractional_count,
    fractional_count_life_science,
    fractional_count_standard,
    positional_weights,
    scientific_strength,
    standardize_citations,
)
from .dea import allocative_efficiency, cost_efficiency, evaluate_sds, technical_efficiency
from .io import build_median_table, emit, ingest, load_config
from .model import (
    DEFAULT_COSTS,
    AssessmentDataset,
    CostVector,
    DataError,
    DatasetValidationError,
    DmuInput,
    EfficiencyScores,
    MedianLookupError,
    MedianTable,
    PublicationRecord,
    SdsDataset,
    dataset_violations,
    staff_cost,
    validate_dataset,
)
from .report import (
    AssessmentConfig,
    AssessmentReport,
    InstitutionResult,
    ScoreRow,
    SdsResult,
    run_assessment,
)
from .simplex import LinearProgram, LpSolution, SolverError, solve_lp

__version__ = "0.1.0"

__all__ = [
    "AggregateScores",
    "AssessmentConfig",
    "AssessmentDataset",
    "AssessmentReport",
    "CostVector",
    "DEFAULT_COSTS",
    "DataError",
    "DatasetValidationError",
    "DmuInput",
    "EfficiencyScores",
    "EligibilityDecision",
    "Histogram",
    "InstitutionResult",
    "LinearProgram",
    "LpSolution",
    "MedianLookupError",
    "MedianTable",
    "PercentileScore",
    "PublicationRecord",
    "QuadrantSummary",
    "ScoreRow",
    "SdsDataset",
    "SdsResult",
    "SolverError",
    "StandardizedPublication",
    "aggregate_weighted",
    "allocative_efficiency",
    "build_median_table",
    "cost_efficiency",
    "dataset_violations",
    "efficiency_matrix",
    "eligibility_filter",
    "emit",
    "evaluate_sds",
    "first_last_share_dmu",
    "fractional_count",
    "fractional_count_life_science",
    "fractional_count_standard",
    "histogram",
    "ingest",
    "load_config",
    "percentile_rank",
    "percentile_scores",
    "positional_weights",
    "productivity_ratio",
    "rank_divergence",
    "run_assessment",
    "scientific_strength",
    "solve_lp",
    "staff_cost",
    "standardize_citations",
    "technical_efficiency",
    "validate_dataset",
]

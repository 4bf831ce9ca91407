"""metricheck: checklist-style meta-evaluation of NLG metrics.

Given benchmark records carrying human aspect ratings and automatic metric
scores for several systems, the library quantifies how well each metric
(a) discriminates quality bands and systems (two-sample KS distance),
(b) reproduces human preference orders (normalized edit similarity), and
(c) correlates with human judgments across in-domain and shifted datasets,
plus order-sensitive pairwise win fractions.
"""

from .checklist import (
    AspectPreference,
    ChecklistReport,
    PairSpec,
    QualityBand,
    QualityThresholds,
    Skipped,
    TransferResult,
    WinMatrix,
    aspect_level_ks,
    aspect_level_preference,
    load_corpus,
    make_pairs,
    run_checklist,
    split_quality,
    system_level_ks,
    system_level_preference,
    transfer_experiment,
    win_matrix,
)
from .config import ConfigError, RunConfig, parse_config
from .corpus import (
    DatasetSpec,
    Record,
    SystemSummary,
    ValidationReport,
    aggregate_annotators,
    load_records,
    serialize,
    system_summaries,
    validate,
)
from .preference import (
    PreferenceOrder,
    SimilarityScore,
    UtilityTable,
    edit_distance,
    linearize,
    preference_order,
    preference_similarity,
)
from .render import render, to_rows, write_report
from .stats import CorrelationResult, Ecdf, KsReport, correlation, ecdf, ks_distance
from .textmetrics import (
    NgramScore,
    TokenizerOptions,
    bleu,
    rouge_n,
    token_edit_distance,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "AspectPreference",
    "ChecklistReport",
    "PairSpec",
    "QualityBand",
    "QualityThresholds",
    "Skipped",
    "TransferResult",
    "WinMatrix",
    "aspect_level_ks",
    "aspect_level_preference",
    "load_corpus",
    "make_pairs",
    "run_checklist",
    "split_quality",
    "system_level_ks",
    "system_level_preference",
    "transfer_experiment",
    "win_matrix",
    "ConfigError",
    "RunConfig",
    "parse_config",
    "render",
    "to_rows",
    "write_report",
    "DatasetSpec",
    "Record",
    "SystemSummary",
    "ValidationReport",
    "aggregate_annotators",
    "load_records",
    "serialize",
    "system_summaries",
    "validate",
    "PreferenceOrder",
    "SimilarityScore",
    "UtilityTable",
    "edit_distance",
    "linearize",
    "preference_order",
    "preference_similarity",
    "CorrelationResult",
    "Ecdf",
    "KsReport",
    "correlation",
    "ecdf",
    "ks_distance",
    "NgramScore",
    "TokenizerOptions",
    "bleu",
    "rouge_n",
    "token_edit_distance",
    "tokenize",
    "__version__",
]

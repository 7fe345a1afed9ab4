"""Rank-similarity metrics for feature-importance explanations.

The core is :func:`shreyan_similarity`, a position-weighted agreement score
between two rankings. Around it sit baseline rank metrics, two in-repo
local explainers (LIME-style and KernelSHAP), small synthetic learners and
a study pipeline comparing explainer agreement across learning tasks.
"""
from .exceptions import DataError, ExplainSimError, NumericAssertionError, RankingError
from .explainers import (
    ExplainerConfig,
    exact_linear_shap,
    explain,
    kernel_shap_explain,
    lime_explain,
    shapley_kernel_weight,
)
from .io import ingest_importances, write_importances
from .learners import (
    fit,
    linear_model,
    make_classification,
    make_regression,
    split_and_standardize,
)
from .metrics import (
    compare_rankings,
    d_max,
    kendall_tau,
    pearson_similarity_normalized,
    shreyan_similarity,
    spearman_distance,
    weighted_difference,
    weighted_kendall_tau,
)
from .ranking import ImportanceRecord, RankedList, canonicalize_pair, invert, rank_features
from .stats import (
    kde,
    pooled_ttest,
    sample_metric_distribution,
    summarize,
    ttest_from_summary,
)
from .study import StudyConfig, compare_explainers, emit_reports, run_study

__version__ = "0.1.0"

"""fsbench: a benchmarking harness for feature-selection methods.

Evaluates feature rankings across feature-ratio grids with supervised,
unsupervised, model-agnostic, and custom metrics, summarizes metric curves
into single scores with stability estimates, compares methods across
datasets with standard and magnitude-aware rank statistics (including
critical-difference output), stress-tests selector runtime, and serves
persisted results to an interactive dashboard.
"""

__version__ = "0.1.0"

from .datasets import Dataset, DatasetError, load_dataset, make_synthetic, standardize, write_dataset
from .selection import (
    FeatureRanking,
    RatioGrid,
    SelectorSpec,
    build_grid,
    built_in_selectors,
    get_selector,
    random_baseline,
    rank_features,
    subprocess_selector,
    take_subset,
    variance_baseline,
)
from .learners import (
    ForestModel,
    KMeansResult,
    PrincipalBasis,
    forest_fit,
    forest_predict,
    forest_predict_proba,
    kmeans,
    optimal_assignment,
    principal_basis,
)
from .metrics import (
    BUILTIN_METRICS,
    CustomMetric,
    MetricError,
    aad,
    accuracy,
    auc,
    clustering_accuracy,
    eval_custom,
    nmi,
)
from .fsdem import MetricCurve, fsdem_score, fsdem_stability
from .rankstats import (
    RankSummary,
    ScoreTable,
    cd_diagram_svg,
    friedman_nemenyi,
    latex_rank_table,
    mars_ranks,
    standard_ranks,
)
from .runner import (
    EvaluationRecord,
    ForestClassifier,
    RunConfig,
    RunResult,
    TimingRecord,
    derive_seed,
    run,
    timer,
)

"""Gaussian graphical model reconstruction, simulation, and benchmarking."""

from .edges import EdgeDecisionSet, pair_arrays, pair_count, pair_index
from .errors import (
    DimensionMismatch,
    EmptyCurve,
    EmptySweep,
    GgmError,
    GridMismatch,
    InsufficientSamples,
    InvalidK,
    InvalidM,
    InvalidProbability,
    LoadError,
    NonNumericCell,
    NonpositiveDiagonal,
    NotPositiveDefinite,
    OutOfRange,
    RaggedRow,
    SingularLocalCovariance,
    TooFewSamples,
    ZeroVariance,
)
from .evaluate import (
    BenchmarkReport,
    BenchmarkRow,
    ConfusionCounts,
    NetworkComparison,
    RocCurve,
    auc,
    average_curves,
    benchmark,
    compare_networks,
    confusion,
    decision_sweep,
    default_grid,
    roc_sweep,
)
from .glasso import (
    ConvergenceWarning,
    GlassoConfig,
    GlassoFit,
    glasso_edges,
    glasso_fit,
    glasso_path,
    kkt_residual,
)
from .graphs import (
    AdjacencyMatrix,
    barabasi_albert,
    chain_graph,
    erdos_renyi,
    from_edges,
    generate_graph,
    watts_strogatz,
)
from .linalg import invert_spd, is_spd, min_eigenvalue, scale_matrix
from .lpc import (
    LpcConfig,
    LpcStatistics,
    lpc_decisions_at,
    lpc_neighborhood,
    lpc_pair,
    lpc_reconstruct,
    lpc_statistics,
    lpc_test_statistic,
)
from .ridge import (
    RidgeConfig,
    RidgeScores,
    ggmridge_reconstruct,
    ggmridge_scores,
    ridge_decisions_at,
    ridge_partial_correlations,
)
from .stats import (
    DataMatrix,
    empirical_covariance,
    fisher_z,
    norm_cdf,
    norm_ppf,
    pearson_critical_r,
    pearson_matrix,
    standardize_columns,
)
from .synth import (
    SynthesisDraw,
    covariance_from_precision,
    sample_gaussian,
    synthesize_dataset,
    synthesize_precision,
)

__version__ = "0.1.0"

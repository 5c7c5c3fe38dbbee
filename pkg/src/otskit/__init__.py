"""Ordinal time series toolkit: probability features, distance-based marginal
and serial dependence measures, asymptotic inference, dissimilarity mining and
synthetic generators."""

from .core import (
    AssumptionWarning,
    ClampWarning,
    DegenerateStateError,
    NumericSeries,
    OrdinalSeries,
    OtsDataset,
    StateDistance,
    StateSpace,
    build_state_distance,
    validate_asymmetry_assumption,
)
from .dependence import (
    DependenceSummary,
    cumulative_binarization,
    cumulative_correlations,
    dependence_summary,
    empirical_quantile,
    lagged_expected_distance,
    mixed_linear_correlations,
    mixed_quantile_correlations,
    ordinal_cohens_kappa,
    total_c_cor,
    total_mixed_c_cor,
    total_mixed_c_qcor,
)
from .features import (
    MarginalFeatureSet,
    divc_expected_distance,
    expected_distance_to_state,
    marginal_feature_set,
    ordinal_asymmetry,
    ordinal_dispersion_1,
    ordinal_dispersion_2,
    ordinal_location_1,
    ordinal_location_2,
    ordinal_skewness,
    reflected_expected_distance,
)
from .inference import (
    ConfidenceInterval,
    KappaDiagnostics,
    TestResult,
    block_bootstrap_se,
    ci_marginal_feature,
    holm_adjust,
    kappa_critical_values,
    kappa_diagnostics,
    kappa_null_distribution,
    long_run_covariance,
    test_marginal_feature,
)
from .mining import (
    DistanceMatrix,
    FeatureMatrix,
    KmeansResult,
    OutlierReport,
    PamResult,
    adjusted_rand_index,
    boxplot_outlier_flags,
    classical_mds,
    cumulative_feature_matrix,
    cumulative_feature_vector,
    detect_outliers,
    feature_distance_matrix,
    kmeans_cluster,
    marginal_serial_feature_matrix,
    outlier_ranking,
    pairwise_distance_matrix,
    pam_cluster,
    pmf_feature_matrix,
    pmf_feature_vector,
)
from .probabilities import (
    LaggedProbabilityProfile,
    ProbabilityProfile,
    c_joint_probabilities,
    c_marginal_probabilities,
    joint_probabilities,
    lagged_probability_profile,
    marginal_probabilities,
    probability_profile,
)
from .simulate import (
    BenchmarkSpec,
    GeneratorSpec,
    make_benchmark_dataset,
    simulate,
    simulate_binomial_ar,
    simulate_binomial_inarch,
    simulate_ordinal_logit_ar1,
)

__version__ = "0.1.0"

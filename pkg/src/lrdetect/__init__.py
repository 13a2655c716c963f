"""Detection of long-range dependence in stationary time series.

Two classifiers — the time-domain variance-plot estimator and the
spectral-domain GPH estimator — plus exact fractional Gaussian noise
simulation, an excursion-count transform that extends detection to
infinite-variance series, and a Monte Carlo benchmark harness.
"""

from .errors import (
    ConfigError,
    DegenerateBlockVariance,
    DegenerateDesign,
    EmbeddingFailure,
    LrdetectError,
    OutOfRangeTheta,
    OverflowValue,
    WindowExceedsSeries,
    ZeroPeriodogramOrdinate,
)
from .excursion import (
    QuantileMeasure,
    ThresholdMeasure,
    draw_levels,
    ie_pipeline,
    resolve_quantiles,
    transform_series,
    write_threshold_csv,
)
from .fgn import (
    FgnParams,
    SubordinationParams,
    fbm_from_fgn,
    fgn_autocovariance,
    fgn_spectral_density,
    simulate_fgn,
    subordinate,
)
from .gph import (
    GphConfig,
    Periodogram,
    classify_lrd_gph,
    full_ordinates,
    gph_estimate,
    gph_from_ordinates,
    periodogram,
    write_periodogram_csv,
)
from .series import (
    RegressionFit,
    TimeSeries,
    ols_slope,
    read_series_csv,
    sample_mean,
    write_series_csv,
)
from .study import (
    MetricsReport,
    StudyConfig,
    default_gph_grid,
    default_hurst_grid,
    default_variance_grid,
    ground_truth_label,
    rank_cutoffs,
    read_report_csv,
    replication_seed,
    run_study,
    write_study_outputs,
)
from .varplot import (
    BlockVarianceCurve,
    VariancePlotConfig,
    admissible_delta_bound,
    block_mean_variances,
    classify_lrd_variance,
    curve_slope,
    variance_plot_slope,
    write_curve_csv,
)

__version__ = "0.1.0"

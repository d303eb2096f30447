"""Nearest-neighbor point forecasts wrapped in conformal prediction regions.

The pipeline: a weighted-nearest-neighbor forecaster over lagged windows with
automatic (p, k) tuning, per-horizon-step symmetric prediction intervals
calibrated from nonconformity scores, an online backtest of region coverage
and width, and additive-seasonal smoothing simulators whose closed-form
interval widths serve as a verification oracle.
"""

__version__ = "0.1.0"

from .backtest import (
    CheckReport,
    CompareResult,
    backtest_matrices,
    check_cp,
    compare_forecasters,
    run_backtest,
)
from .conformal import (
    PairedDataset,
    PredictionRegion,
    ScoreMatrix,
    conformal_region,
    make_pairs,
    nonconformity_scores,
    p_value,
    rank_for,
    score_matrix,
)
from .etssim import (
    EtsKind,
    EtsParams,
    aada_params,
    ana_params,
    default_seasonal,
    ets_forecast_variance,
    simulate_ets,
    simulate_with_means,
    theoretical_width,
)
from .series import (
    HorizonConfig,
    SplitSpec,
    TimeSeries,
    mape,
    min_calibration_count,
    split_sizes,
    validate_series,
)
from .wnn import (
    ForecasterKind,
    ForecasterSpec,
    TuneResult,
    Weighting,
    fpto_tune,
    point_forecast,
    wnn_forecast,
)

__all__ = [
    "__version__",
    "CheckReport",
    "CompareResult",
    "EtsKind",
    "EtsParams",
    "ForecasterKind",
    "ForecasterSpec",
    "HorizonConfig",
    "PairedDataset",
    "PredictionRegion",
    "ScoreMatrix",
    "SplitSpec",
    "TimeSeries",
    "TuneResult",
    "Weighting",
    "aada_params",
    "ana_params",
    "backtest_matrices",
    "check_cp",
    "compare_forecasters",
    "conformal_region",
    "default_seasonal",
    "ets_forecast_variance",
    "fpto_tune",
    "make_pairs",
    "mape",
    "min_calibration_count",
    "nonconformity_scores",
    "p_value",
    "point_forecast",
    "rank_for",
    "run_backtest",
    "score_matrix",
    "simulate_ets",
    "simulate_with_means",
    "split_sizes",
    "theoretical_width",
    "validate_series",
    "wnn_forecast",
]

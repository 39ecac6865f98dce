"""Rolling-window market efficiency vs. short-term predictability toolkit."""

from .dfa import (
    DfaConfig,
    DfaProfile,
    FitError,
    FluctuationPoint,
    HurstFit,
    ScaleRangeError,
    fit_hurst,
    fluctuation,
    hurst_exponent,
    profile,
    scale_grid,
)
from .nn import (
    DirectionForecast,
    EmbeddingConfig,
    HitRateRecord,
    NeighborMatch,
    NeighborSearchError,
    PatternMatrix,
    confirm_neighbors,
    embed,
    forecast_direction,
    hit_rate,
    predict_window,
    select_neighbors,
    squared_distance,
)
from .rolling import (
    CrossSectionReport,
    IndexAnalysisError,
    IndexSummary,
    WindowResult,
    classify_quadrants,
    cross_section,
    quadrant_label,
    run_index,
)
from .series import (
    InsufficientHistoryError,
    PriceSeries,
    ReturnSeries,
    Window,
    WindowSchedule,
    build_window_schedule,
    log_returns,
)
from .synth import (
    GeneratorSpec,
    fgn_autocovariance,
    fgn_ensemble,
    fractional_gaussian_noise,
    gaussian_random_walk,
    generate,
    random_walk_ensemble,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

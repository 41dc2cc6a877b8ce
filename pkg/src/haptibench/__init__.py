"""haptibench: benchmarking toolkit for friction-modulation haptic
touchscreens.

Physical metrics (friction levels, range, variability, end-to-end latency)
are extracted from force/position recordings; behavioral metrics (difficulty
slope, movement time, error rate) from pointing-task logs. A deterministic
simulator provides ground truth for verification without hardware.
"""

from .analysis import (
    PhysicalAnalysis,
    PipelineConfig,
    analyze_physical_paths,
    analyze_physical_recordings,
    physical_metrics_dict,
    pointing_metrics_dict,
)
from .fitts import (
    ConditionKey,
    FittsFit,
    PointingMetrics,
    aggregate_movement_times,
    error_rate,
    fitts_fit,
    index_of_difficulty,
    pointing_metrics,
    split_by_condition,
)
from .friction import (
    FrictionLevelStats,
    FrictionRangeStats,
    friction_level_stats,
    friction_range,
)
from .io import (
    ForceSample,
    PointingTrial,
    Recording,
    RecordingMeta,
    ValidationReport,
    parse_pointing_log,
    parse_recording,
    read_pointing_log,
    read_recording,
    serialize_pointing_log,
    serialize_recording,
    validate_recording,
    write_pointing_log,
    write_recording,
)
from .latency import (
    CrossingEstimate,
    LatencyEstimate,
    RidgeSpec,
    detect_actuation_onset,
    detect_ridge_crossing,
    estimate_latency,
    spatial_shift,
)
from .report import (
    ComparisonReport,
    MetricDescriptor,
    RawComparisonSamples,
    TabletProfile,
    build_tablet_profile,
    compare_tablets,
    render_report,
    report_from_json,
)
from .stats import (
    AnovaResult,
    FTestResult,
    LinRegResult,
    TTestResult,
    f_test_variance,
    incomplete_beta_regularized,
    linear_regression,
    one_way_anova,
    two_sample_t_test,
)
from .swipes import (
    FrictionSeries,
    QualityReport,
    Swipe,
    TrendModel,
    compute_friction,
    correct_trend,
    dump_swipes,
    estimate_trend_slope,
    quality_gate,
    segment_swipes,
)
from .synth import (
    PhysicalProtocol,
    PointingGroundTruth,
    PointingProtocol,
    SimEventLog,
    SimSwipeParams,
    SimTabletSpec,
    SpatialPattern,
    StickSlipSpec,
    simulate_physical_session,
    simulate_pointing_logs,
    simulate_swipe_recording,
)

__version__ = "0.1.0"

"""Simulator for reflecting-surface assisted SISO links with discrete phase shifts.

Computes ideal continuous phase shifts, quantizes them to q-bit levels via
dynamic-threshold (dtpq) and equal-interval (eipq) searches, and provides
the sweeps and slope fits that characterize received power and path-loss
scaling.
"""

from .analysis import (
    SlopeFit,
    SweepRow,
    SweepSpec,
    angle_scan,
    gradient_map,
    grid_values,
    path_loss_samples,
    pl_slope_fit,
    run_sweep,
)
from .channel import (
    FieldResult,
    LinkState,
    PhaseMatrix,
    continuous_phase_matrix,
    far_field_pl_db,
    field_at_rx_points,
    field_result,
    field_superposition,
    link_state,
    power_dbm_from_xi,
    received_power_dbm,
)
from .geometry import (
    LocalAngles,
    PathGeometry,
    Placement,
    Point3,
    RisPanel,
    cell_center,
    local_angle_matrices,
    path_length_matrices,
    spherical_to_cartesian,
    wave_path_difference,
)
from .quantization import (
    QuantizationResult,
    ShiftMatrix,
    ThresholdSet,
    dtpq,
    dtpq_thresholds,
    eipq,
    eipq_thresholds,
    exhaustive_search,
    fixed_threshold,
    quantize_matrix,
    residual_spread,
)
from .radiation import (
    PatternExponent,
    RadioConfig,
    alpha_from_gain_dbi,
    combined_pattern_matrix,
    cosine_pattern,
    gain_from_alpha,
)
from .presets import ris_2p6ghz, ris_4p9ghz
from .scenario import Scenario

__all__ = [
    "FieldResult",
    "LinkState",
    "LocalAngles",
    "PathGeometry",
    "PatternExponent",
    "PhaseMatrix",
    "Placement",
    "Point3",
    "QuantizationResult",
    "RadioConfig",
    "RisPanel",
    "Scenario",
    "ShiftMatrix",
    "SlopeFit",
    "SweepRow",
    "SweepSpec",
    "ThresholdSet",
    "alpha_from_gain_dbi",
    "angle_scan",
    "cell_center",
    "combined_pattern_matrix",
    "continuous_phase_matrix",
    "cosine_pattern",
    "dtpq",
    "dtpq_thresholds",
    "eipq",
    "eipq_thresholds",
    "exhaustive_search",
    "far_field_pl_db",
    "field_at_rx_points",
    "field_result",
    "field_superposition",
    "fixed_threshold",
    "gain_from_alpha",
    "gradient_map",
    "grid_values",
    "link_state",
    "local_angle_matrices",
    "path_length_matrices",
    "path_loss_samples",
    "pl_slope_fit",
    "power_dbm_from_xi",
    "quantize_matrix",
    "received_power_dbm",
    "residual_spread",
    "ris_2p6ghz",
    "ris_4p9ghz",
    "run_sweep",
    "spherical_to_cartesian",
    "wave_path_difference",
]

__version__ = "0.1.0"

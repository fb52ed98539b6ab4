"""Parameter sweeps, angle scans, spatial power maps, and slope fits.

Grid semantics follow colon ranges: closed at the start, stepping until
the stop value with a tolerance of half a step, so "5:0.1:10" yields 51
points.  Angle-axis values, thresholds, and grid steps are degrees at
this layer (they feed the CSV boundary directly); distances are meters.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .channel import (
    LinkState,
    field_at_rx_points,
    link_state,
    power_dbm_from_xi,
)
from .geometry import TWO_PI, spherical_to_cartesian
from .quantization import dtpq, eipq, fixed_threshold
from .scenario import Scenario

SWEEP_AXES = ("rx_distance", "tx_distance", "theta_r", "threshold")
METHODS = ("continuous", "dtpq", "eipq", "fixed")

DEFAULT_EPSILON_DEG = 5.0

# Largest representable elevation below pi/2; scan endpoints at +/-90 deg
# are clamped here, where the pattern cutoff drives the power to the floor.
_THETA_LIMIT = math.nextafter(math.pi / 2.0, 0.0)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis plus the methods to evaluate on it.

    start/stop/step are meters for distance axes and degrees for angle
    and threshold axes.  ``epsilon_deg`` parameterizes the eipq method,
    ``gamma_deg`` the fixed method (None selects the panel's last level).
    """

    axis: str
    start: float
    stop: float
    step: float
    methods: tuple[str, ...]
    epsilon_deg: float = DEFAULT_EPSILON_DEG
    gamma_deg: float | None = None

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.methods:
            raise ValueError("methods must be non-empty")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError(f"duplicate methods in {self.methods}")
        if self.step <= 0.0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.stop < self.start:
            raise ValueError(f"stop {self.stop} must not precede start {self.start}")
        if self.axis == "threshold" and self.methods != ("fixed",):
            raise ValueError("a threshold sweep exercises exactly the fixed method")


@dataclass(frozen=True)
class SweepRow:
    """Powers (dBm) and thresholds (deg, where applicable) at one grid point."""

    axis_value: float
    power_dbm: dict[str, float]
    threshold_deg: dict[str, float]


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares fit of path loss (dB) against 10*log10(variable)."""

    variable: str
    slope: float
    intercept: float
    r_squared: float


FIT_VARIABLES = ("log10_d1", "log10_d2", "log10_cos_theta_r", "log10_cos_theta_t")


def grid_values(start: float, stop: float, step: float) -> np.ndarray:
    """Colon-range grid: start, start+step, ... up to stop within step/2."""
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"stop {stop} must not precede start {start}")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return start + step * np.arange(count)


def _resolve_workers(max_workers: int | None, points: int) -> int:
    if max_workers is None:
        max_workers = min(os.cpu_count() or 1, 8)
    return max(1, min(max_workers, points))


def _ordered_map(fn: Callable, values: Sequence, max_workers: int | None) -> list:
    """Apply fn to each value, preserving order; threads when beneficial."""
    workers = _resolve_workers(max_workers, len(values))
    if workers == 1 or len(values) <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


def _gamma_rad(scenario: Scenario, gamma_deg: float | None) -> float:
    if gamma_deg is None:
        return scenario.panel.levels[-1]
    return math.radians(gamma_deg) % TWO_PI


def _methods_at_state(
    state: LinkState,
    methods: Sequence[str],
    epsilon_deg: float,
    gamma_deg: float | None,
) -> tuple[dict[str, float], dict[str, float]]:
    scenario = state.scenario
    powers: dict[str, float] = {}
    thresholds: dict[str, float] = {}
    for method in methods:
        if method == "continuous":
            powers[method] = power_dbm_from_xi(
                scenario.panel, scenario.radio, state.xi_upper_bound
            )
            continue
        if method == "dtpq":
            result = dtpq(scenario, state)
        elif method == "eipq":
            result = eipq(scenario, math.radians(epsilon_deg), state)
        elif method == "fixed":
            result = fixed_threshold(scenario, _gamma_rad(scenario, gamma_deg), state)
        else:
            raise ValueError(f"unknown method {method!r}")
        powers[method] = result.received_power_dbm
        thresholds[method] = math.degrees(result.threshold)
    return powers, thresholds


def run_sweep(
    scenario: Scenario, spec: SweepSpec, max_workers: int | None = None
) -> list[SweepRow]:
    """Evaluate the methods across the axis grid, one row per grid point.

    Distance and angle axes rebuild the link (and redesign every method)
    at each point; the threshold axis reuses one link and quantizes at
    each grid threshold with the fixed method.
    """
    values = grid_values(spec.start, spec.stop, spec.step)

    if spec.axis == "threshold":
        state = link_state(scenario)

        def eval_threshold(value: float) -> SweepRow:
            result = fixed_threshold(scenario, math.radians(value) % TWO_PI, state)
            return SweepRow(
                axis_value=float(value),
                power_dbm={"fixed": result.received_power_dbm},
                threshold_deg={"fixed": math.degrees(result.threshold)},
            )

        return _ordered_map(eval_threshold, values, max_workers)

    def eval_point(value: float) -> SweepRow:
        if spec.axis == "rx_distance":
            sub = scenario.with_placement(d2=float(value))
        elif spec.axis == "tx_distance":
            sub = scenario.with_placement(d1=float(value))
        else:  # theta_r
            sub = scenario.with_placement(theta_r=math.radians(value))
        powers, thresholds = _methods_at_state(
            link_state(sub), spec.methods, spec.epsilon_deg, spec.gamma_deg
        )
        return SweepRow(axis_value=float(value), power_dbm=powers, threshold_deg=thresholds)

    return _ordered_map(eval_point, values, max_workers)


def _rx_point_for_angle(scenario: Scenario, theta_deg: float) -> np.ndarray:
    """Rx position for a signed departure elevation along the scan arc.

    Negative elevations land on the opposite azimuth; |theta| = 90 deg is
    clamped just below pi/2 (the pattern cutoff zeroes the power there).
    """
    theta = math.radians(theta_deg)
    phi = scenario.placement.phi_r
    if theta < 0.0:
        theta = -theta
        phi = (phi + math.pi) % TWO_PI
    theta = min(theta, _THETA_LIMIT)
    if theta == 0.0:
        return np.array([0.0, 0.0, scenario.placement.d2])
    return spherical_to_cartesian(scenario.placement.d2, theta, phi).as_array()


def _design_shift_values(
    state: LinkState, method: str, epsilon_deg: float, gamma_deg: float | None
) -> tuple[np.ndarray, float | None]:
    """Shift matrix (radians) and threshold (deg) designed on the given link."""
    scenario = state.scenario
    if method == "continuous":
        return state.phase, None
    if method == "dtpq":
        result = dtpq(scenario, state)
    elif method == "eipq":
        result = eipq(scenario, math.radians(epsilon_deg), state)
    elif method == "fixed":
        result = fixed_threshold(scenario, _gamma_rad(scenario, gamma_deg), state)
    else:
        raise ValueError(f"unknown method {method!r}")
    return result.shifts.values, math.degrees(result.threshold)


def angle_scan(
    scenario: Scenario,
    start_deg: float,
    stop_deg: float,
    step_deg: float,
    design_target: float,
    methods: Sequence[str],
    epsilon_deg: float = DEFAULT_EPSILON_DEG,
    gamma_deg: float | None = None,
) -> list[SweepRow]:
    """Design shifts once at the target departure elevation, then move Rx.

    ``design_target`` is radians in (-pi/2, pi/2); the scan grid is signed
    degrees.  Powers peak at the target for the beamforming methods.
    """
    if not -math.pi / 2 < design_target < math.pi / 2:
        raise ValueError(f"design target must lie in (-pi/2, pi/2), got {design_target}")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")

    theta = design_target
    phi = scenario.placement.phi_r
    if theta < 0.0:
        theta = -theta
        phi = (phi + math.pi) % TWO_PI
    design = scenario.with_placement(theta_r=theta, phi_r=phi)
    state = link_state(design)

    values = grid_values(start_deg, stop_deg, step_deg)
    points = np.stack([_rx_point_for_angle(scenario, v) for v in values])

    per_method: dict[str, np.ndarray] = {}
    thresholds: dict[str, float] = {}
    for method in methods:
        shift, threshold_deg = _design_shift_values(state, method, epsilon_deg, gamma_deg)
        xi = field_at_rx_points(design, shift, points)
        per_method[method] = power_dbm_from_xi(scenario.panel, scenario.radio, xi)
        if threshold_deg is not None:
            thresholds[method] = threshold_deg

    rows = []
    for i, value in enumerate(values):
        rows.append(
            SweepRow(
                axis_value=float(value),
                power_dbm={m: float(per_method[m][i]) for m in methods},
                threshold_deg=dict(thresholds),
            )
        )
    return rows


def gradient_map(
    scenario: Scenario,
    design_target: tuple[float, float],
    theta_grid_deg: Sequence[float],
    phi_grid_deg: Sequence[float],
    method: str,
    epsilon_deg: float = DEFAULT_EPSILON_DEG,
    gamma_deg: float | None = None,
) -> np.ndarray:
    """Received power (dBm) over a (theta_r, phi_r) grid with frozen shifts.

    ``design_target`` is (theta_r, phi_r) in radians.  Returns a
    len(theta_grid) x len(phi_grid) matrix ordered like the grids.
    """
    theta_grid = np.asarray(theta_grid_deg, dtype=float)
    phi_grid = np.asarray(phi_grid_deg, dtype=float)
    if theta_grid.size == 0 or phi_grid.size == 0:
        raise ValueError("grids must be non-empty")
    if np.any(theta_grid < 0.0) or np.any(theta_grid > 90.0):
        raise ValueError("theta grid must lie within [0, 90] degrees")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")

    design = scenario.with_placement(theta_r=design_target[0], phi_r=design_target[1])
    state = link_state(design)
    shift, _ = _design_shift_values(state, method, epsilon_deg, gamma_deg)

    theta = np.minimum(np.radians(theta_grid), _THETA_LIMIT)
    phi = np.radians(phi_grid) % TWO_PI
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    d2 = scenario.placement.d2
    points = np.column_stack(
        [
            d2 * np.sin(tt.ravel()) * np.cos(pp.ravel()),
            d2 * np.sin(tt.ravel()) * np.sin(pp.ravel()),
            d2 * np.cos(tt.ravel()),
        ]
    )
    xi = field_at_rx_points(design, shift, points)
    power = power_dbm_from_xi(scenario.panel, scenario.radio, xi)
    return power.reshape(theta_grid.size, phi_grid.size)


def path_loss_samples(
    scenario: Scenario,
    variable: str,
    sample_grid: Sequence[float],
    method: str,
    epsilon_deg: float = DEFAULT_EPSILON_DEG,
    gamma_deg: float | None = None,
    max_workers: int | None = None,
) -> np.ndarray:
    """Path loss (dB) per sample, with shifts redesigned at every sample.

    ``sample_grid`` holds meters for the distance variables and degrees
    for the angle variables.
    """
    if variable not in FIT_VARIABLES:
        raise ValueError(f"variable must be one of {FIT_VARIABLES}, got {variable!r}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")

    def eval_sample(value: float) -> float:
        if variable == "log10_d1":
            sub = scenario.with_placement(d1=float(value))
        elif variable == "log10_d2":
            sub = scenario.with_placement(d2=float(value))
        elif variable == "log10_cos_theta_r":
            sub = scenario.with_placement(theta_r=math.radians(value))
        else:
            sub = scenario.with_placement(theta_t=math.radians(value))
        powers, _ = _methods_at_state(link_state(sub), [method], epsilon_deg, gamma_deg)
        return scenario.radio.tx_power_dbm - powers[method]

    return np.array(_ordered_map(eval_sample, list(sample_grid), max_workers))


def pl_slope_fit(
    scenario: Scenario,
    variable: str,
    sample_grid: Sequence[float],
    method: str,
    epsilon_deg: float = DEFAULT_EPSILON_DEG,
    gamma_deg: float | None = None,
    max_workers: int | None = None,
) -> SlopeFit:
    """Ordinary least squares of PL (dB) against 10*log10(variable).

    The slope is the path-loss exponent: +2 for the far-field distance
    law, -1 for the continuous-space cosine law.
    """
    grid = np.asarray(sample_grid, dtype=float)
    if grid.size < 3:
        raise ValueError(f"slope fit needs at least 3 samples, got {grid.size}")
    if variable in ("log10_d1", "log10_d2"):
        var = grid
    else:
        var = np.cos(np.radians(grid))
    if np.any(var <= 0.0):
        raise ValueError(f"variable {variable} must be positive over the grid")

    x = 10.0 * np.log10(var)
    if np.ptp(x) == 0.0:
        raise ValueError("singular design matrix: variable is constant over the grid")
    y = path_loss_samples(
        scenario, variable, grid, method, epsilon_deg, gamma_deg, max_workers
    )

    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(residuals**2)) / ss_tot
    return SlopeFit(
        variable=variable,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
    )

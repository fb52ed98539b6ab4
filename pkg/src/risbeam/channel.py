"""Continuous phase design, field superposition, and received power.

Each cell contributes a phasor

    sqrt(F_combine) / (r_t * r_r) * exp(-j * (2*pi*(r_t + r_r)/lambda - shift))

to the field at the Rx; the magnitude of the sum is xi.  Received power is

    P_r = P_t * G_t * G_r * (d_x * d_y)^2 * A^2 * xi^2 / (16 * pi^2),

and path loss is defined as P_t / P_r.  The ideal continuous shift of a
cell cancels its path phase exactly, so configuring the continuous phase
matrix attains the triangle-inequality upper bound on xi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    TWO_PI,
    LocalAngles,
    PathGeometry,
    Placement,
    RisPanel,
    cell_center_grids,
    local_angle_matrices,
    path_length_matrices,
    tx_position,
)
from .radiation import (
    RadioConfig,
    combined_pattern_matrix,
    cosine_pattern_from_cos,
)
from .scenario import Scenario


@dataclass
class PhaseMatrix:
    """Continuous per-cell phase shifts, each entry in [0, 2*pi)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < 0.0) or np.any(self.values >= TWO_PI):
            raise ValueError("phase entries must lie in [0, 2*pi)")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class FieldResult:
    """Field magnitude with the link-budget figures derived from it."""

    xi: float
    received_power_dbm: float
    path_loss_db: float


def continuous_phase_matrix(geom: PathGeometry, wavelength: float) -> PhaseMatrix:
    """Per-cell shifts that cancel each cell's path phase: mod(2*pi*L/lambda, 2*pi)."""
    if not wavelength > 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    return PhaseMatrix(np.mod(TWO_PI * geom.total / wavelength, TWO_PI))


def _shift_values(shifts) -> np.ndarray:
    """Radian matrix from a PhaseMatrix, a ShiftMatrix, or a bare array."""
    values = getattr(shifts, "values", shifts)
    return np.asarray(values, dtype=float)


def amplitude_matrix(geom: PathGeometry, combined: np.ndarray) -> np.ndarray:
    """Per-cell phasor magnitudes sqrt(F_combine) / (r_t * r_r)."""
    combined = np.asarray(combined, dtype=float)
    if combined.shape != geom.r_t.shape:
        raise ValueError(
            f"pattern matrix shape {combined.shape} != geometry shape {geom.r_t.shape}"
        )
    return np.sqrt(combined) / (geom.r_t * geom.r_r)


def field_superposition(
    geom: PathGeometry, combined: np.ndarray, shifts, wavelength: float
) -> float:
    """Magnitude xi of the per-cell phasor sum under the given shifts.

    ``shifts`` may be a PhaseMatrix, a ShiftMatrix, or a radian array of
    matching shape.  Cells are accumulated in row-major order.
    """
    if not wavelength > 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    amplitude = amplitude_matrix(geom, combined)
    shift = _shift_values(shifts)
    if shift.shape != amplitude.shape:
        raise ValueError(f"shift shape {shift.shape} != geometry shape {amplitude.shape}")
    path_phase = np.mod(TWO_PI * geom.total / wavelength, TWO_PI)
    total = np.sum(amplitude * np.exp(1j * (shift - path_phase)))
    return float(np.abs(total))


@dataclass(frozen=True)
class LinkState:
    """Precomputed per-cell quantities of one scenario.

    ``amplitude`` and ``phase`` are what the searches and sweeps consume:
    the phasor magnitudes and the ideal continuous shifts (equal to the
    per-cell path phases mod 2*pi).
    """

    scenario: Scenario
    geometry: PathGeometry
    angles: LocalAngles
    combined: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray

    @property
    def phase_matrix(self) -> PhaseMatrix:
        return PhaseMatrix(self.phase)

    @property
    def xi_upper_bound(self) -> float:
        """xi attained by the continuous shifts (sum of magnitudes)."""
        return float(np.sum(self.amplitude))

    def xi(self, shifts) -> float:
        """Field magnitude under the given shifts, row-major accumulation."""
        shift = _shift_values(shifts)
        if shift.shape != self.amplitude.shape:
            raise ValueError(
                f"shift shape {shift.shape} != panel shape {self.amplitude.shape}"
            )
        total = np.sum(self.amplitude * np.exp(1j * (shift - self.phase)))
        return float(np.abs(total))

    def received_power_dbm(self, shifts) -> float:
        return power_dbm_from_xi(self.scenario.panel, self.scenario.radio, self.xi(shifts))


def link_state(scenario: Scenario) -> LinkState:
    """Build the per-cell amplitude/phase state of a scenario."""
    geom = path_length_matrices(scenario.panel, scenario.placement)
    angles = local_angle_matrices(scenario.panel, scenario.placement)
    radio = scenario.radio
    combined = combined_pattern_matrix(angles, radio.alpha_tx, radio.cell_alpha, radio.alpha_rx)
    amplitude = amplitude_matrix(geom, combined)
    phase = np.mod(TWO_PI * geom.total / radio.wavelength, TWO_PI)
    return LinkState(
        scenario=scenario,
        geometry=geom,
        angles=angles,
        combined=combined,
        amplitude=amplitude,
        phase=phase,
    )


def power_dbm_from_xi(panel: RisPanel, radio: RadioConfig, xi):
    """Received power (dBm) for a field magnitude; -inf when xi is 0."""
    scale = (
        radio.gain_tx_linear
        * radio.gain_rx_linear
        * (panel.d_x * panel.d_y) ** 2
        * panel.reflection**2
        / (16.0 * math.pi**2)
    )
    xi_arr = np.asarray(xi, dtype=float)
    with np.errstate(divide="ignore"):
        power = radio.tx_power_dbm + 10.0 * np.log10(scale * xi_arr**2)
    if np.ndim(xi) == 0:
        return float(power)
    return power


def field_result(scenario: Scenario, shifts) -> FieldResult:
    """xi, received power, and path loss of a scenario under given shifts."""
    state = link_state(scenario)
    xi = state.xi(shifts)
    power = power_dbm_from_xi(scenario.panel, scenario.radio, xi)
    return FieldResult(
        xi=xi,
        received_power_dbm=power,
        path_loss_db=scenario.radio.tx_power_dbm - power,
    )


def received_power_dbm(scenario: Scenario, shifts) -> float:
    """Received power (dBm) under the given shifts; -inf when the field cancels."""
    return field_result(scenario, shifts).received_power_dbm


def far_field_pl_db(panel: RisPanel, placement: Placement, radio: RadioConfig) -> float:
    """Closed-form far-field path loss (dB) under continuous phase alignment.

    PL = 16*pi^2 * (d1*d2)^2 /
         (G_t * G_r * (M*N*d_x*d_y)^2 * cos(theta_t) * cos(theta_r) * A^2)
    """
    cos_t = math.cos(placement.theta_t)
    cos_r = math.cos(placement.theta_r)
    if cos_t <= 0.0 or cos_r <= 0.0:
        raise ValueError("far-field path loss requires theta_t, theta_r < pi/2")
    pl = (
        16.0
        * math.pi**2
        * (placement.d1 * placement.d2) ** 2
        / (
            radio.gain_tx_linear
            * radio.gain_rx_linear
            * (panel.num_cells * panel.d_x * panel.d_y) ** 2
            * cos_t
            * cos_r
            * panel.reflection**2
        )
    )
    return 10.0 * math.log10(pl)


def field_at_rx_points(
    scenario: Scenario, shifts, rx_points: np.ndarray, chunk: int = 2048
) -> np.ndarray:
    """Field magnitudes at many Rx positions with the shifts held fixed.

    ``rx_points`` is a (P, 3) array of Cartesian Rx positions.  The Tx-side
    pattern factors are computed once; the Rx side (path lengths, the cell
    departure angle, and the Rx antenna angle with its boresight re-aimed
    at the surface center) is evaluated per point.  Used by angle scans
    and spatial power maps, where the design is frozen while Rx moves.
    """
    points = np.asarray(rx_points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError(f"rx_points must have shape (P, 3), got {points.shape}")
    panel = scenario.panel
    radio = scenario.radio
    placement = scenario.placement
    shift = _shift_values(shifts)
    if shift.shape != (panel.rows, panel.cols):
        raise ValueError(
            f"shift shape {shift.shape} != panel shape {(panel.rows, panel.cols)}"
        )

    x, y = cell_center_grids(panel)
    x = x.ravel()
    y = y.ravel()
    tx = tx_position(placement)
    r_t = np.sqrt((tx.x - x) ** 2 + (tx.y - y) ** 2 + tx.z**2)
    cos_tx = (tx.x * (tx.x - x) + tx.y * (tx.y - y) + tx.z * tx.z) / (r_t * placement.d1)
    tx_pattern = cosine_pattern_from_cos(
        np.clip(cos_tx, -1.0, 1.0), radio.alpha_tx
    ) * cosine_pattern_from_cos(tx.z / r_t, radio.cell_alpha)
    shift_flat = shift.ravel()

    k = TWO_PI / radio.wavelength
    xi = np.empty(points.shape[0])
    for lo in range(0, points.shape[0], chunk):
        p = points[lo : lo + chunk]
        dx = p[:, 0:1] - x[None, :]
        dy = p[:, 1:2] - y[None, :]
        pz = p[:, 2:3]
        r_r = np.sqrt(dx**2 + dy**2 + pz**2)
        d2 = np.sqrt(np.sum(p**2, axis=1, keepdims=True))
        cos_rx = (p[:, 0:1] * dx + p[:, 1:2] * dy + pz * pz) / (r_r * d2)
        combined = (
            tx_pattern[None, :]
            * cosine_pattern_from_cos(pz / r_r, radio.cell_alpha)
            * cosine_pattern_from_cos(np.clip(cos_rx, -1.0, 1.0), radio.alpha_rx)
        )
        amplitude = np.sqrt(combined) / (r_t[None, :] * r_r)
        phase = np.mod(k * (r_t[None, :] + r_r), TWO_PI)
        total = np.sum(amplitude * np.exp(1j * (shift_flat[None, :] - phase)), axis=1)
        xi[lo : lo + chunk] = np.abs(total)
    return xi

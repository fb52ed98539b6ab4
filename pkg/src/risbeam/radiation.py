"""Cosine-power radiation patterns and gain/exponent conversion.

A normalized power pattern F(theta, phi) = cos(theta)**alpha for
theta in [0, pi/2), and 0 for theta in [pi/2, pi], independent of
azimuth.  The corresponding directive gain is G = 2 * (alpha + 1),
so alpha can be recovered from a gain figure in dBi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import LocalAngles

HALF_PI = math.pi / 2.0

# Linear gain of the alpha = 0 pattern; no cosine-power pattern has less.
MIN_GAIN_LINEAR = 2.0
MIN_GAIN_DBI = 10.0 * math.log10(MIN_GAIN_LINEAR)

_ALPHA_TOL = 1e-9


def gain_from_alpha(alpha: float) -> float:
    """Linear directive gain 2 * (alpha + 1) of a cosine-power pattern."""
    if alpha < 0.0:
        raise ValueError(f"pattern exponent must be >= 0, got {alpha}")
    return 2.0 * (alpha + 1.0)


def alpha_from_gain_dbi(gain_dbi: float) -> float:
    """Pattern exponent whose directive gain matches the given dBi figure.

    Raises ValueError below the isotropic-hemisphere floor of
    10*log10(2) ~ 3.0103 dBi, where the exponent would be negative.
    """
    alpha = 10.0 ** (gain_dbi / 10.0) / 2.0 - 1.0
    if alpha < -_ALPHA_TOL:
        raise ValueError(
            f"gain {gain_dbi} dBi is below the {MIN_GAIN_DBI:.4f} dBi floor of the "
            "cosine-power pattern family"
        )
    return max(alpha, 0.0)


@dataclass(frozen=True)
class PatternExponent:
    """Exponent alpha of a cosine-power pattern."""

    alpha: float

    def __post_init__(self) -> None:
        if self.alpha < 0.0:
            raise ValueError(f"pattern exponent must be >= 0, got {self.alpha}")

    @classmethod
    def from_gain_dbi(cls, gain_dbi: float) -> "PatternExponent":
        return cls(alpha_from_gain_dbi(gain_dbi))

    @property
    def gain_linear(self) -> float:
        return gain_from_alpha(self.alpha)

    @property
    def gain_dbi(self) -> float:
        return 10.0 * math.log10(self.gain_linear)


@dataclass(frozen=True)
class RadioConfig:
    """Radio-link parameters shared by every cell.

    Antenna gains are stated in dBi and must be realizable by a
    cosine-power pattern (linear gain >= 2).  ``cell_alpha`` is the
    exponent of the unit-cell pattern, 1 by default.
    """

    wavelength: float
    tx_power_dbm: float
    gain_tx_dbi: float
    gain_rx_dbi: float
    cell_alpha: float = 1.0

    def __post_init__(self) -> None:
        if not (self.wavelength > 0.0 and math.isfinite(self.wavelength)):
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if self.cell_alpha < 0.0:
            raise ValueError(f"cell_alpha must be >= 0, got {self.cell_alpha}")
        # Raises if either gain sits below the pattern-family floor.
        alpha_from_gain_dbi(self.gain_tx_dbi)
        alpha_from_gain_dbi(self.gain_rx_dbi)

    @property
    def alpha_tx(self) -> float:
        return alpha_from_gain_dbi(self.gain_tx_dbi)

    @property
    def alpha_rx(self) -> float:
        return alpha_from_gain_dbi(self.gain_rx_dbi)

    @property
    def gain_tx_linear(self) -> float:
        return 10.0 ** (self.gain_tx_dbi / 10.0)

    @property
    def gain_rx_linear(self) -> float:
        return 10.0 ** (self.gain_rx_dbi / 10.0)


def cosine_pattern(theta, alpha: float):
    """Normalized cosine-power pattern value(s) at elevation theta.

    Accepts a scalar or an array of elevations in [0, pi].  Returns 1 at
    theta = 0 and exactly 0 for theta >= pi/2.
    """
    if alpha < 0.0:
        raise ValueError(f"pattern exponent must be >= 0, got {alpha}")
    arr = np.asarray(theta, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > math.pi):
        raise ValueError("elevation must lie in [0, pi]")
    out = np.zeros_like(arr)
    visible = arr < HALF_PI
    out[visible] = np.cos(arr[visible]) ** alpha
    if np.isscalar(theta) or np.ndim(theta) == 0:
        return float(out)
    return out


def cosine_pattern_from_cos(cos_theta: np.ndarray, alpha: float) -> np.ndarray:
    """cosine_pattern parameterized by cos(theta) instead of theta.

    Entries with cos(theta) <= 0 fall in the cutoff region and map to 0.
    Saves the arccos/cos round trip on hot paths.
    """
    arr = np.asarray(cos_theta, dtype=float)
    out = np.zeros_like(arr)
    visible = arr > 0.0
    out[visible] = arr[visible] ** alpha
    return out


def combined_pattern_matrix(
    angles: LocalAngles, alpha_tx: float, alpha_cell: float, alpha_rx: float
) -> np.ndarray:
    """Product of the four per-cell pattern factors.

    Tx pattern at the Tx-side antenna angles, the cell's reception and
    emission patterns at the cell-side angles, and the Rx pattern at the
    Rx-side antenna angles.  Entries lie in [0, 1]; an entry is 0 exactly
    when any factor's elevation reaches pi/2.
    """
    return (
        cosine_pattern(angles.theta_tx, alpha_tx)
        * cosine_pattern(angles.theta_t_cell, alpha_cell)
        * cosine_pattern(angles.theta_r_cell, alpha_cell)
        * cosine_pattern(angles.theta_rx, alpha_rx)
    )

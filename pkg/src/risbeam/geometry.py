"""Cell placement and per-cell path geometry for a planar reflecting surface.

Coordinate frame: the surface occupies the z = 0 plane with its center at
the origin.  Cells are indexed 1-based, n = 1..N along the x axis and
m = 1..M along the y axis, and the center of cell (n, m) is at

    ((N + 1 - 2n) * d_x / 2,  (M + 1 - 2m) * d_y / 2,  0).

All per-cell quantities are stored as M x N arrays addressed [m-1, n-1].
Angles are radians throughout; degrees appear only at configuration and
CSV boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

_LEVEL_SPACING_TOL = 1e-9


@dataclass(frozen=True)
class RisPanel:
    """Geometry and quantization capability of the reflecting surface.

    Args:
        rows: M, number of cells along the y axis.
        cols: N, number of cells along the x axis.
        d_x: cell extent along x (m).
        d_y: cell extent along y (m).
        bits: phase resolution q; the surface offers 2**q phase levels.
        levels: the 2**q programmable phase levels (rad), consecutive
            levels exactly 2*pi/2**q apart (mod 2*pi).
        reflection: reflection magnitude of a cell, in (0, 1].
    """

    rows: int
    cols: int
    d_x: float
    d_y: float
    bits: int
    levels: tuple[float, ...]
    reflection: float = 1.0

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"cell counts must be positive, got {self.rows}x{self.cols}")
        if not (self.d_x > 0.0 and self.d_y > 0.0):
            raise ValueError(f"cell size must be positive, got d_x={self.d_x}, d_y={self.d_y}")
        if self.bits < 1:
            raise ValueError(f"bits must be a positive integer, got {self.bits}")
        if not (0.0 < self.reflection <= 1.0):
            raise ValueError(f"reflection magnitude must be in (0, 1], got {self.reflection}")
        levels = tuple(float(v) % TWO_PI for v in self.levels)
        if len(levels) != self.num_levels:
            raise ValueError(
                f"expected {self.num_levels} phase levels for {self.bits}-bit resolution, "
                f"got {len(levels)}"
            )
        omega = self.omega
        for lo, hi in zip(levels, levels[1:]):
            gap = (hi - lo) % TWO_PI
            if abs(gap - omega) > _LEVEL_SPACING_TOL:
                raise ValueError(
                    f"levels must be uniformly spaced by {omega:.6f} rad, "
                    f"found gap {gap:.6f} rad"
                )
        object.__setattr__(self, "levels", levels)

    @property
    def num_levels(self) -> int:
        return 2 ** self.bits

    @property
    def omega(self) -> float:
        """Quantization interval 2*pi / 2**bits (rad)."""
        return TWO_PI / self.num_levels

    @property
    def num_cells(self) -> int:
        return self.rows * self.cols

    @property
    def aperture_radius(self) -> float:
        """Circumscribed radius of the panel (half the outline diagonal)."""
        return 0.5 * math.hypot(self.cols * self.d_x, self.rows * self.d_y)


@dataclass(frozen=True)
class Placement:
    """Tx/Rx placement relative to the surface center.

    d1/d2 are the Tx-center and Rx-center distances; (theta_t, phi_t) the
    elevation/azimuth of the Tx direction seen from the center, and
    (theta_r, phi_r) the same for the Rx.  Elevations are measured from
    the surface normal (+z) and must stay below pi/2.
    """

    d1: float
    d2: float
    theta_t: float
    phi_t: float
    theta_r: float
    phi_r: float

    def __post_init__(self) -> None:
        if not (self.d1 > 0.0 and math.isfinite(self.d1)):
            raise ValueError(f"d1 must be positive and finite, got {self.d1}")
        if not (self.d2 > 0.0 and math.isfinite(self.d2)):
            raise ValueError(f"d2 must be positive and finite, got {self.d2}")
        for name in ("theta_t", "theta_r"):
            theta = getattr(self, name)
            if not (0.0 <= theta < math.pi / 2):
                raise ValueError(f"{name} must lie in [0, pi/2), got {theta}")
        for name in ("phi_t", "phi_r"):
            phi = getattr(self, name)
            if not (0.0 <= phi < TWO_PI):
                raise ValueError(f"{name} must lie in [0, 2*pi), got {phi}")


@dataclass(frozen=True)
class Point3:
    """Cartesian point (m)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"coordinate {name} must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass
class PathGeometry:
    """Per-cell path lengths: Tx->cell distances and cell->Rx distances."""

    r_t: np.ndarray
    r_r: np.ndarray

    def __post_init__(self) -> None:
        self.r_t = np.asarray(self.r_t, dtype=float)
        self.r_r = np.asarray(self.r_r, dtype=float)
        if self.r_t.shape != self.r_r.shape:
            raise ValueError(f"r_t shape {self.r_t.shape} != r_r shape {self.r_r.shape}")
        if not (np.all(self.r_t > 0.0) and np.all(self.r_r > 0.0)):
            raise ValueError("path lengths must be strictly positive")

    @property
    def total(self) -> np.ndarray:
        """Per-cell wave-path length r_t + r_r."""
        return self.r_t + self.r_r


@dataclass
class LocalAngles:
    """Per-cell angle matrices for the four pattern evaluations.

    *_cell matrices hold angles at the cells, measured from the surface
    normal; theta_tx/theta_rx hold angles at the antennas, measured from
    each antenna's boresight (which points at the surface center).
    Azimuths are measured from the local frame's x axis, in [0, 2*pi).
    """

    theta_t_cell: np.ndarray
    phi_t_cell: np.ndarray
    theta_r_cell: np.ndarray
    phi_r_cell: np.ndarray
    theta_tx: np.ndarray
    phi_tx: np.ndarray
    theta_rx: np.ndarray
    phi_rx: np.ndarray

    def __post_init__(self) -> None:
        shape = np.shape(self.theta_t_cell)
        for name in (
            "theta_t_cell",
            "phi_t_cell",
            "theta_r_cell",
            "phi_r_cell",
            "theta_tx",
            "phi_tx",
            "theta_rx",
            "phi_rx",
        ):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} shape {arr.shape} != {shape}")
            setattr(self, name, arr)


def cell_center(n: int, m: int, panel: RisPanel) -> Point3:
    """Center of cell (n, m), n counted 1..N along x and m counted 1..M along y."""
    if not (1 <= n <= panel.cols):
        raise ValueError(f"cell index n={n} outside 1..{panel.cols}")
    if not (1 <= m <= panel.rows):
        raise ValueError(f"cell index m={m} outside 1..{panel.rows}")
    x = (panel.cols + 1 - 2 * n) * panel.d_x / 2.0
    y = (panel.rows + 1 - 2 * m) * panel.d_y / 2.0
    return Point3(x, y, 0.0)


def cell_center_grids(panel: RisPanel) -> tuple[np.ndarray, np.ndarray]:
    """X and Y coordinate matrices (M x N) of all cell centers."""
    n = np.arange(1, panel.cols + 1, dtype=float)
    m = np.arange(1, panel.rows + 1, dtype=float)
    x = (panel.cols + 1 - 2.0 * n) * panel.d_x / 2.0
    y = (panel.rows + 1 - 2.0 * m) * panel.d_y / 2.0
    return np.broadcast_to(x, (panel.rows, panel.cols)).copy(), np.broadcast_to(
        y[:, None], (panel.rows, panel.cols)
    ).copy()


def spherical_to_cartesian(d: float, theta: float, phi: float) -> Point3:
    """Point at range d, elevation theta from +z, azimuth phi from +x."""
    if not d > 0.0:
        raise ValueError(f"range must be positive, got {d}")
    sin_t = math.sin(theta)
    return Point3(d * sin_t * math.cos(phi), d * sin_t * math.sin(phi), d * math.cos(theta))


def tx_position(placement: Placement) -> Point3:
    return spherical_to_cartesian(placement.d1, placement.theta_t, placement.phi_t)


def rx_position(placement: Placement) -> Point3:
    return spherical_to_cartesian(placement.d2, placement.theta_r, placement.phi_r)


def path_length_matrices(panel: RisPanel, placement: Placement) -> PathGeometry:
    """Euclidean distances from the Tx and Rx points to every cell center."""
    x, y = cell_center_grids(panel)
    tx = tx_position(placement)
    rx = rx_position(placement)
    r_t = np.sqrt((tx.x - x) ** 2 + (tx.y - y) ** 2 + tx.z**2)
    r_r = np.sqrt((rx.x - x) ** 2 + (rx.y - y) ** 2 + rx.z**2)
    return PathGeometry(r_t=r_t, r_r=r_r)


def _antenna_frame(boresight: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (x', y') axes completing the boresight into a local frame.

    The x' axis is the global x axis projected off the boresight; when the
    boresight is (anti)parallel to global x, global y is used instead.  The
    choice only fixes where local azimuth zero points; the cosine-power
    patterns are azimuth-independent.
    """
    e1 = np.array([1.0, 0.0, 0.0]) - boresight[0] * boresight
    if np.linalg.norm(e1) < 1e-12:
        e1 = np.array([0.0, 1.0, 0.0]) - boresight[1] * boresight
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(boresight, e1)
    return e1, e2


def _antenna_side_angles(
    antenna: Point3, distance: float, x: np.ndarray, y: np.ndarray, r: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Elevation off boresight and local azimuth of each cell seen from an antenna.

    Boresight points from the antenna to the surface center.
    """
    a = antenna.as_array()
    boresight = -a / distance
    ux = (x - antenna.x) / r
    uy = (y - antenna.y) / r
    uz = -antenna.z / r
    cos_theta = ux * boresight[0] + uy * boresight[1] + uz * boresight[2]
    theta = np.arccos(np.clip(cos_theta, -1.0, 1.0))
    e1, e2 = _antenna_frame(boresight)
    comp1 = ux * e1[0] + uy * e1[1] + uz * e1[2]
    comp2 = ux * e2[0] + uy * e2[1] + uz * e2[2]
    phi = np.arctan2(comp2, comp1) % TWO_PI
    return theta, phi


def local_angle_matrices(panel: RisPanel, placement: Placement) -> LocalAngles:
    """Per-cell incidence/departure angles at the cells and at the antennas.

    Cell-side elevations are measured from the surface normal (+z);
    antenna-side elevations from the antenna boresight, which points at
    the surface center.
    """
    x, y = cell_center_grids(panel)
    tx = tx_position(placement)
    rx = rx_position(placement)
    geom = path_length_matrices(panel, placement)

    theta_t_cell = np.arccos(np.clip(tx.z / geom.r_t, -1.0, 1.0))
    phi_t_cell = np.arctan2(tx.y - y, tx.x - x) % TWO_PI
    theta_r_cell = np.arccos(np.clip(rx.z / geom.r_r, -1.0, 1.0))
    phi_r_cell = np.arctan2(rx.y - y, rx.x - x) % TWO_PI

    theta_tx, phi_tx = _antenna_side_angles(tx, placement.d1, x, y, geom.r_t)
    theta_rx, phi_rx = _antenna_side_angles(rx, placement.d2, x, y, geom.r_r)

    return LocalAngles(
        theta_t_cell=theta_t_cell,
        phi_t_cell=phi_t_cell,
        theta_r_cell=theta_r_cell,
        phi_r_cell=phi_r_cell,
        theta_tx=theta_tx,
        phi_tx=phi_tx,
        theta_rx=theta_rx,
        phi_rx=phi_rx,
    )


def wave_path_difference(
    panel: RisPanel,
    placement: Placement,
    cell_a: tuple[int, int],
    cell_b: tuple[int, int],
) -> float:
    """Absolute difference of the Tx-cell-Rx wave-path lengths of two cells.

    Cells are addressed as (n, m) index pairs, 1-based.
    """
    geom = path_length_matrices(panel, placement)
    totals = geom.total

    def lookup(cell: tuple[int, int]) -> float:
        n, m = cell
        if not (1 <= n <= panel.cols and 1 <= m <= panel.rows):
            raise ValueError(
                f"cell index {cell} outside 1..{panel.cols} x 1..{panel.rows}"
            )
        return float(totals[m - 1, n - 1])

    return abs(lookup(cell_a) - lookup(cell_b))

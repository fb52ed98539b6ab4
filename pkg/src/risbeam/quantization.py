"""Threshold-based phase quantization and the threshold searches.

A q-bit quantizer with threshold gamma maps a continuous phase to level
rho_p when the phase falls in the half-open cyclic bin
[gamma + (p-1)*Omega, gamma + p*Omega), Omega = 2*pi/2**q.  The searches
differ only in their candidate threshold sets:

* dtpq       -- the M*N entries of the continuous phase matrix; optimal
                over all thresholds because the induced cell partition
                only changes when gamma crosses one of those entries.
* eipq       -- a uniform grid of step epsilon within one interval
                [0, Omega); sub-optimal, constant candidate count.
* fixed      -- a single constant threshold (the traditional baseline).
* exhaustive -- every level assignment; guarded brute-force oracle.

Ties within 1e-12 relative xi resolve to the smallest threshold so that
results are reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LinkState, PhaseMatrix, link_state, power_dbm_from_xi
from .geometry import TWO_PI, RisPanel
from .scenario import Scenario

# Candidates whose xi is within this relative slack of the best are treated
# as ties and resolved to the smallest threshold.
TIE_REL_TOL = 1e-12

# Upper bound on bits * cells for the exhaustive oracle (~10^6 assignments).
EXHAUSTIVE_GUARD_BITS = 20


@dataclass
class ShiftMatrix:
    """Discrete per-cell shifts, stored as indices into the panel's level set."""

    level_indices: np.ndarray
    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        self.level_indices = np.asarray(self.level_indices, dtype=np.intp)
        self.levels = tuple(float(v) for v in self.levels)
        if np.any(self.level_indices < 0) or np.any(self.level_indices >= len(self.levels)):
            raise ValueError(
                f"level indices must lie in 0..{len(self.levels) - 1}"
            )

    @property
    def values(self) -> np.ndarray:
        """Shift matrix in radians."""
        return np.take(np.asarray(self.levels), self.level_indices)

    @property
    def shape(self) -> tuple[int, int]:
        return self.level_indices.shape


@dataclass(frozen=True)
class QuantizationResult:
    """Outcome of a threshold search.

    ``threshold`` is None for the exhaustive oracle, where no single
    threshold applies.
    """

    threshold: float | None
    shifts: ShiftMatrix
    xi: float
    received_power_dbm: float
    candidates_evaluated: int


@dataclass
class ThresholdSet:
    """Candidate thresholds of one search strategy."""

    values: np.ndarray
    kind: str

    _KINDS = ("dtpq-matrix", "eipq-grid", "fixed")

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in self._KINDS:
            raise ValueError(f"kind must be one of {self._KINDS}, got {self.kind!r}")
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("threshold set must be a non-empty 1-D array")


def dtpq_thresholds(phases: PhaseMatrix) -> ThresholdSet:
    """Candidate matrix of the dynamic search: every continuous phase entry.

    Duplicates are kept; the candidate count stays at exactly M*N.
    """
    return ThresholdSet(values=phases.values.ravel().copy(), kind="dtpq-matrix")


def eipq_thresholds(bits: int, epsilon: float) -> ThresholdSet:
    """Uniform candidate grid (k-1)*epsilon, k = 1..K, within [0, 2*pi/2**bits).

    K = floor(2*pi / (2**bits * epsilon)).
    """
    interval = TWO_PI / 2**bits
    if not 0.0 < epsilon < interval:
        raise ValueError(
            f"epsilon must lie in (0, {interval:.6f}) for {bits}-bit quantization, "
            f"got {epsilon}"
        )
    count = int(math.floor(TWO_PI / (2**bits * epsilon)))
    return ThresholdSet(values=epsilon * np.arange(count, dtype=float), kind="eipq-grid")


def fixed_thresholds(gamma: float) -> ThresholdSet:
    if not 0.0 <= gamma < TWO_PI:
        raise ValueError(f"threshold must lie in [0, 2*pi), got {gamma}")
    return ThresholdSet(values=np.array([gamma]), kind="fixed")


def _bin_indices(phases: np.ndarray, gamma, bits: int) -> np.ndarray:
    """Cyclic half-open bin index of each phase for threshold(s) gamma.

    Phases below gamma wrap upward by 2*pi before binning, so a phase equal
    to gamma lands in bin 0.  The final modulo guards the corner where
    np.mod rounds up to exactly 2*pi.
    """
    num_levels = 2**bits
    omega = TWO_PI / num_levels
    offset = np.mod(phases - gamma, TWO_PI)
    return np.floor(offset / omega).astype(np.intp) % num_levels


def quantize_matrix(phases: PhaseMatrix, gamma: float, panel: RisPanel) -> ShiftMatrix:
    """Quantize a continuous phase matrix at threshold gamma.

    Every phase maps to exactly one level: the one whose cyclic bin
    [gamma + (p-1)*Omega, gamma + p*Omega) contains it.
    """
    if not 0.0 <= gamma < TWO_PI:
        raise ValueError(f"threshold must lie in [0, 2*pi), got {gamma}")
    indices = _bin_indices(phases.values, gamma, panel.bits)
    return ShiftMatrix(level_indices=indices, levels=panel.levels)


def residual_spread(phases: PhaseMatrix, shifts: ShiftMatrix) -> float:
    """Width of the smallest circular arc containing all residual phases.

    Residuals are mod(phase - shift, 2*pi).  Returns 0 when all residuals
    coincide; the result always lies in [0, 2*pi).
    """
    if phases.values.shape != shifts.shape:
        raise ValueError(
            f"phase shape {phases.values.shape} != shift shape {shifts.shape}"
        )
    residuals = np.sort(np.mod(phases.values - shifts.values, TWO_PI).ravel())
    if residuals.size == 1:
        return 0.0
    gaps = np.diff(residuals)
    wrap_gap = residuals[0] + TWO_PI - residuals[-1]
    return float(TWO_PI - max(np.max(gaps), wrap_gap))


def _search(state: LinkState, thresholds: ThresholdSet, chunk: int = 256) -> QuantizationResult:
    """Evaluate xi for every candidate threshold and keep the best.

    The scan is vectorized in chunks; the winner's shift matrix and xi are
    recomputed in the fixed row-major accumulation order so the reported
    xi is self-consistent with the reported shifts.
    """
    panel = state.scenario.panel
    levels = np.asarray(panel.levels)
    phases = state.phase.ravel()
    amplitude = state.amplitude.ravel()

    gammas = thresholds.values
    xis = np.empty(gammas.size)
    for lo in range(0, gammas.size, chunk):
        g = gammas[lo : lo + chunk, None]
        bins = _bin_indices(phases[None, :], g, panel.bits)
        shift = levels[bins]
        total = np.sum(amplitude[None, :] * np.exp(1j * (shift - phases[None, :])), axis=1)
        xis[lo : lo + chunk] = np.abs(total)

    best_xi = float(np.max(xis))
    tied = xis >= best_xi * (1.0 - TIE_REL_TOL)
    gamma = float(np.min(gammas[tied]))

    shifts = quantize_matrix(state.phase_matrix, gamma, panel)
    xi = state.xi(shifts)
    return QuantizationResult(
        threshold=gamma,
        shifts=shifts,
        xi=xi,
        received_power_dbm=power_dbm_from_xi(panel, state.scenario.radio, xi),
        candidates_evaluated=gammas.size,
    )


def dtpq(scenario: Scenario, state: LinkState | None = None) -> QuantizationResult:
    """Dynamic threshold search over the M*N continuous phase entries.

    Optimal over all thresholds at linear cost in the cell count.
    """
    if state is None:
        state = link_state(scenario)
    return _search(state, dtpq_thresholds(state.phase_matrix))


def eipq(scenario: Scenario, epsilon: float, state: LinkState | None = None) -> QuantizationResult:
    """Equal-interval threshold search with grid step epsilon (rad)."""
    if state is None:
        state = link_state(scenario)
    return _search(state, eipq_thresholds(state.scenario.panel.bits, epsilon))


def fixed_threshold(
    scenario: Scenario, gamma: float, state: LinkState | None = None
) -> QuantizationResult:
    """Quantization at a single constant threshold (traditional baseline)."""
    if state is None:
        state = link_state(scenario)
    return _search(state, fixed_thresholds(gamma))


def exhaustive_search(
    scenario: Scenario, state: LinkState | None = None, chunk: int = 1 << 14
) -> QuantizationResult:
    """Brute-force oracle over all 2**(bits*M*N) level assignments.

    Refuses panels with bits * M * N > EXHAUSTIVE_GUARD_BITS.  Ties in xi
    resolve to the lexicographically smallest row-major index assignment.
    """
    if state is None:
        state = link_state(scenario)
    panel = state.scenario.panel
    total_bits = panel.bits * panel.num_cells
    if total_bits > EXHAUSTIVE_GUARD_BITS:
        raise ValueError(
            f"exhaustive search refused: bits * cells = {total_bits} exceeds the "
            f"guard of {EXHAUSTIVE_GUARD_BITS}"
        )

    cells = panel.num_cells
    num_levels = panel.num_levels
    levels = np.asarray(panel.levels)
    phases = state.phase.ravel()
    amplitude = state.amplitude.ravel()
    # term[c, l]: contribution of cell c when assigned level l.
    term = amplitude[:, None] * np.exp(1j * (levels[None, :] - phases[:, None]))

    # Row-major cell 0 is the most significant digit, so ascending config
    # index enumerates assignments in lexicographic level-index order.
    weights = num_levels ** np.arange(cells - 1, -1, -1, dtype=np.int64)
    total = num_levels**cells
    best_xi = -1.0
    best_index = 0
    cell_range = np.arange(cells)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % num_levels
        sums = np.abs(np.sum(term[cell_range[None, :], digits], axis=1))
        # earliest near-tied maximizer, so exact ties (equal up to float
        # noise) resolve to the lowest level indices
        local = int(np.argmax(sums >= np.max(sums) * (1.0 - TIE_REL_TOL)))
        if sums[local] > best_xi * (1.0 + TIE_REL_TOL):
            best_xi = float(sums[local])
            best_index = int(idx[local])

    digits = (best_index // weights) % num_levels
    shifts = ShiftMatrix(
        level_indices=digits.reshape(panel.rows, panel.cols), levels=panel.levels
    )
    xi = state.xi(shifts)
    return QuantizationResult(
        threshold=None,
        shifts=shifts,
        xi=xi,
        received_power_dbm=power_dbm_from_xi(panel, state.scenario.radio, xi),
        candidates_evaluated=total,
    )

"""Phase design, field superposition, received power, and path loss."""

import math
from dataclasses import replace

import numpy as np
import pytest
from conftest import random_scenario

from risbeam import (
    PathGeometry,
    PhaseMatrix,
    Placement,
    RisPanel,
    continuous_phase_matrix,
    far_field_pl_db,
    field_at_rx_points,
    field_result,
    field_superposition,
    link_state,
    path_length_matrices,
    power_dbm_from_xi,
    received_power_dbm,
    ris_2p6ghz,
)
from risbeam.geometry import rx_position

TWO_PI = 2.0 * math.pi


class TestContinuousPhaseMatrix:
    def test_half_cycle(self):
        geom = PathGeometry(r_t=np.array([[1.0]]), r_r=np.array([[1.5]]))
        phases = continuous_phase_matrix(geom, 1.0)
        assert phases.values[0, 0] == pytest.approx(math.pi, rel=1e-12)

    def test_whole_cycles_vanish(self):
        geom = PathGeometry(r_t=np.array([[3.0]]), r_r=np.array([[4.0]]))
        phases = continuous_phase_matrix(geom, 1.0)
        assert phases.values[0, 0] == pytest.approx(0.0, abs=1e-9)

    def test_range(self):
        sc = ris_2p6ghz()
        geom = path_length_matrices(sc.panel, sc.placement)
        phases = continuous_phase_matrix(geom, sc.radio.wavelength)
        assert np.all(phases.values >= 0.0) and np.all(phases.values < TWO_PI)

    def test_near_field_example_phase_offset(self):
        # brute-forced from the two wave-path sums of the corner and the
        # center-adjacent cell (path difference 6.0666 wavelengths)
        panel = RisPanel(rows=32, cols=16, d_x=0.5, d_y=0.5, bits=1, levels=(0.0, math.pi))
        placement = Placement(d1=10.0, d2=10.0, theta_t=math.pi / 4, phi_t=0.0,
                              theta_r=math.pi / 4, phi_r=math.pi)
        phases = continuous_phase_matrix(path_length_matrices(panel, placement), 1.0)
        offset = (phases.values[0, 0] - phases.values[15, 7]) % TWO_PI
        assert offset == pytest.approx(0.4182519381750467, abs=1e-9)
        # consistent with a 6.07-wavelength path difference to the same
        # tolerance as the path-difference check itself (0.01 wavelengths)
        assert abs(offset - TWO_PI * 0.07) <= TWO_PI * 0.01

    def test_rejects_bad_wavelength(self):
        geom = PathGeometry(r_t=np.array([[1.0]]), r_r=np.array([[1.0]]))
        with pytest.raises(ValueError):
            continuous_phase_matrix(geom, 0.0)


class TestFieldSuperposition:
    def test_single_cell_unit_amplitude(self):
        geom = PathGeometry(r_t=np.array([[1.0]]), r_r=np.array([[1.0]]))
        combined = np.array([[1.0]])
        for shift in (0.0, 1.0, 3.0):
            xi = field_superposition(geom, combined, np.array([[shift]]), 0.37)
            assert xi == pytest.approx(1.0, rel=1e-15)

    def test_continuous_shifts_attain_upper_bound(self):
        sc = ris_2p6ghz()
        state = link_state(sc)
        phases = continuous_phase_matrix(state.geometry, sc.radio.wavelength)
        xi = field_superposition(state.geometry, state.combined, phases, sc.radio.wavelength)
        assert xi == float(np.sum(state.amplitude))

    def test_destructive_pair_cancels(self):
        geom = PathGeometry(r_t=np.array([[1.0, 1.0]]), r_r=np.array([[1.0, 1.0]]))
        combined = np.ones((1, 2))
        xi = field_superposition(geom, combined, np.array([[0.0, math.pi]]), 1.0)
        assert xi < 1e-12

    def test_dimension_mismatch(self):
        geom = PathGeometry(r_t=np.ones((2, 2)), r_r=np.ones((2, 2)))
        with pytest.raises(ValueError, match="shape"):
            field_superposition(geom, np.ones((2, 2)), np.zeros((2, 3)), 1.0)
        with pytest.raises(ValueError, match="shape"):
            field_superposition(geom, np.ones((2, 3)), np.zeros((2, 2)), 1.0)

    def test_shift_matrix_never_beats_continuous(self):
        rng = np.random.default_rng(101)
        for _ in range(25):
            sc = random_scenario(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)),
                                 int(rng.integers(1, 4)))
            state = link_state(sc)
            random_shift = rng.uniform(0.0, TWO_PI, size=state.phase.shape)
            assert state.xi(random_shift) <= state.xi_upper_bound * (1 + 1e-12)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(55)
        sc = random_scenario(rng, 4, 3, 2)
        state = link_state(sc)
        shift = rng.uniform(0.0, TWO_PI, size=state.phase.shape)
        for c in (0.1, 1.0, 4.5):
            assert state.xi(shift + c) == pytest.approx(state.xi(shift), rel=1e-12)


class TestReceivedPower:
    def test_doubling_xi_adds_six_db(self):
        sc = ris_2p6ghz()
        p1 = power_dbm_from_xi(sc.panel, sc.radio, 1.0)
        p2 = power_dbm_from_xi(sc.panel, sc.radio, 2.0)
        assert p2 - p1 == pytest.approx(6.0206, abs=1e-4)

    def test_tx_power_shifts_linearly(self):
        sc = ris_2p6ghz()
        state = link_state(sc)
        boosted = replace(sc, radio=replace(sc.radio, tx_power_dbm=10.0))
        p0 = received_power_dbm(sc, state.phase_matrix)
        p10 = received_power_dbm(boosted, state.phase_matrix)
        assert p10 - p0 == pytest.approx(10.0, rel=1e-12)

    def test_zero_field_gives_minus_inf(self):
        sc = ris_2p6ghz()
        assert power_dbm_from_xi(sc.panel, sc.radio, 0.0) == -math.inf

    def test_field_result_consistency(self):
        sc = ris_2p6ghz()
        state = link_state(sc)
        result = field_result(sc, state.phase_matrix)
        assert result.xi == pytest.approx(state.xi_upper_bound, rel=1e-15)
        assert result.path_loss_db == pytest.approx(
            sc.radio.tx_power_dbm - result.received_power_dbm, rel=1e-12
        )


class TestFarFieldPathLoss:
    def test_distance_law(self):
        sc = ris_2p6ghz()
        base = far_field_pl_db(sc.panel, sc.placement, sc.radio)
        doubled = far_field_pl_db(sc.panel, replace(sc.placement, d1=20.0), sc.radio)
        assert doubled - base == pytest.approx(6.0206, abs=1e-4)

    def test_cell_count_law(self):
        sc = ris_2p6ghz()
        base = far_field_pl_db(sc.panel, sc.placement, sc.radio)
        bigger = replace(sc.panel, rows=2 * sc.panel.rows)
        assert far_field_pl_db(bigger, sc.placement, sc.radio) - base == pytest.approx(
            -6.0206, abs=1e-4
        )

    def test_cosine_factors(self):
        sc = ris_2p6ghz()
        flat = replace(sc.placement, theta_t=0.0, theta_r=0.0)
        tilted = replace(sc.placement, theta_t=math.pi / 3, theta_r=math.pi / 3)
        delta = far_field_pl_db(sc.panel, tilted, sc.radio) - far_field_pl_db(
            sc.panel, flat, sc.radio
        )
        assert delta == pytest.approx(6.0206, abs=1e-4)

    def test_far_field_consistency_with_superposition(self):
        # at distances 1e4 x aperture the cell-sum model converges to the
        # closed form within 0.05 dB
        sc = ris_2p6ghz()
        d = 1e4 * sc.panel.aperture_radius
        far = replace(sc.placement, d1=d, d2=d)
        sc_far = replace(sc, placement=far)
        state = link_state(sc_far)
        power = power_dbm_from_xi(sc.panel, sc.radio, state.xi_upper_bound)
        closed = sc.radio.tx_power_dbm - far_field_pl_db(sc.panel, far, sc.radio)
        assert power == pytest.approx(closed, abs=0.05)

    def test_reciprocity(self):
        # holds under symmetric antenna gains
        rng = np.random.default_rng(77)
        for _ in range(10):
            sc = random_scenario(rng, 4, 4, 1)
            sc = replace(sc, radio=replace(sc.radio, gain_rx_dbi=sc.radio.gain_tx_dbi))
            p = sc.placement
            swapped = Placement(d1=p.d2, d2=p.d1, theta_t=p.theta_r, phi_t=p.phi_r,
                                theta_r=p.theta_t, phi_r=p.phi_t)
            sc_swapped = replace(sc, placement=swapped)
            assert link_state(sc_swapped).xi_upper_bound == pytest.approx(
                link_state(sc).xi_upper_bound, rel=1e-12
            )


class TestFieldAtRxPoints:
    def test_matches_general_path_at_the_placement_point(self):
        # the vectorized multi-Rx evaluator agrees with the per-scenario
        # link state when handed the placement's own Rx position
        rng = np.random.default_rng(404)
        for _ in range(10):
            sc = random_scenario(rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)), 1)
            state = link_state(sc)
            shift = rng.uniform(0.0, TWO_PI, size=state.phase.shape)
            point = rx_position(sc.placement).as_array()[None, :]
            fast = field_at_rx_points(sc, shift, point)[0]
            assert fast == pytest.approx(state.xi(shift), rel=1e-9)

    def test_rejects_bad_point_shape(self):
        sc = ris_2p6ghz()
        with pytest.raises(ValueError, match="P, 3"):
            field_at_rx_points(sc, link_state(sc).phase, np.zeros((3,)))

    def test_rejects_bad_shift_shape(self):
        sc = ris_2p6ghz()
        with pytest.raises(ValueError, match="panel shape"):
            field_at_rx_points(sc, np.zeros((2, 2)), np.zeros((1, 3)))


class TestPhaseMatrixType:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="2\\*pi"):
            PhaseMatrix(np.array([[0.0, TWO_PI]]))
        with pytest.raises(ValueError, match="2\\*pi"):
            PhaseMatrix(np.array([[-0.1]]))

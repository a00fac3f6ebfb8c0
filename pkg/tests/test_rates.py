import numpy as np
import pytest

from iipguidance.errors import NearCircular, SingularDenominator
from iipguidance.geo import EarthModel, StateVector, eci_to_ecef_matrix, \
    unit_triad
from iipguidance.predictor import predict
from iipguidance.rates import (
    compute_rate_basis,
    orbit_elements,
    phi_sensitivities,
    rate_basis_ecef,
    rate_basis_eci,
    tof_sensitivities,
)

from conftest import random_state

FD_DT = 1e-3


def fd_phi_rate(state, axis_vec, earth):
    """Central difference of the analytic angle of flight under an
    impulse of 1 m/s^2 * FD_DT along axis_vec."""
    lo = StateVector(t=state.t, r=state.r, v=state.v - 0.5 * FD_DT * axis_vec)
    hi = StateVector(t=state.t, r=state.r, v=state.v + 0.5 * FD_DT * axis_vec)
    return (predict(hi, earth).phi - predict(lo, earth).phi) / FD_DT


def fd_iip(state, axis_vec, earth, attr="i_p"):
    lo = StateVector(t=state.t, r=state.r, v=state.v - 0.5 * FD_DT * axis_vec)
    hi = StateVector(t=state.t, r=state.r, v=state.v + 0.5 * FD_DT * axis_vec)
    return (getattr(predict(hi, earth), attr)
            - getattr(predict(lo, earth), attr)) / FD_DT


def fd_tof(state, axis_vec, earth):
    lo = StateVector(t=state.t, r=state.r, v=state.v - 0.5 * FD_DT * axis_vec)
    hi = StateVector(t=state.t, r=state.r, v=state.v + 0.5 * FD_DT * axis_vec)
    return (predict(hi, earth).t_f - predict(lo, earth).t_f) / FD_DT


class TestPhiSensitivities:
    def test_finite_difference_radial(self, stage_state, earth):
        pred = predict(stage_state, earth)
        dphi_dar, _ = phi_sensitivities(stage_state, pred, earth)
        i_r, _, _ = unit_triad(stage_state.r, stage_state.v)
        assert dphi_dar == pytest.approx(
            fd_phi_rate(stage_state, i_r, earth), rel=1e-3)

    def test_finite_difference_transverse(self, stage_state, earth):
        pred = predict(stage_state, earth)
        _, dphi_datheta = phi_sensitivities(stage_state, pred, earth)
        _, i_theta, _ = unit_triad(stage_state.r, stage_state.v)
        assert dphi_datheta == pytest.approx(
            fd_phi_rate(stage_state, i_theta, earth), rel=1e-3)

    def test_symmetric_state_reduction(self, earth):
        # r . v = 0 makes c1 vanish and the radial term collapse
        st = StateVector(t=0, r=[earth.r_e + 150e3, 0, 0], v=[0, 2200.0, 0])
        pred = predict(st, earth)
        assert pred.c1 == 0.0
        dphi_dar, _ = phi_sensitivities(st, pred, earth)
        h = np.linalg.norm(np.cross(st.r, st.v))
        expected = h * np.sin(pred.phi) / (
            earth.mu * (-pred.c2 * np.sin(pred.phi)))
        assert dphi_dar == pytest.approx(expected, rel=1e-12)


class TestRateBasisEci:
    def test_tangency(self, earth):
        rng = np.random.default_rng(20)
        for _ in range(50):
            st = random_state(rng, earth)
            pred = predict(st, earth)
            for d in rate_basis_eci(st, pred, earth):
                assert abs(np.dot(d, pred.i_p)) < 1e-9 * np.linalg.norm(d)

    def test_in_plane_directions_parallel(self, earth):
        rng = np.random.default_rng(21)
        for _ in range(50):
            st = random_state(rng, earth)
            pred = predict(st, earth)
            d_r, d_theta, _ = rate_basis_eci(st, pred, earth)
            cross = np.linalg.norm(np.cross(d_r, d_theta))
            assert cross < 1e-9 * np.linalg.norm(d_r) * np.linalg.norm(d_theta)

    def test_out_of_plane_finite_difference(self, stage_state, earth):
        pred = predict(stage_state, earth)
        _, _, d_h = rate_basis_eci(stage_state, pred, earth)
        _, _, i_h = unit_triad(stage_state.r, stage_state.v)
        fd = fd_iip(stage_state, i_h, earth)
        assert np.linalg.norm(d_h - fd) < 1e-3 * np.linalg.norm(fd)

    def test_ratio_matches_phi_sensitivities(self, stage_state, earth):
        pred = predict(stage_state, earth)
        dphi_dar, dphi_datheta = phi_sensitivities(stage_state, pred, earth)
        d_r, d_theta, _ = rate_basis_eci(stage_state, pred, earth)
        assert np.linalg.norm(d_r) / np.linalg.norm(d_theta) == \
            pytest.approx(abs(dphi_dar / dphi_datheta), rel=1e-12)


class TestOrbitElements:
    def test_near_circular_guarded(self, earth):
        vc = np.sqrt(earth.mu / (earth.r_e + 100e3))
        st = StateVector(t=0, r=[earth.r_e + 100e3, 0, 0], v=[0, vc, 0])
        with pytest.raises(NearCircular):
            orbit_elements(st, None, earth)

    def test_stage_state_identities(self, stage_state, earth):
        pred = predict(stage_state, earth)
        el = orbit_elements(stage_state, pred, earth)
        r0 = np.linalg.norm(stage_state.r)
        v0 = np.linalg.norm(stage_state.v)
        assert el.p == pytest.approx(el.a * (1 - el.e**2), rel=1e-9)
        assert v0**2 == pytest.approx(earth.mu * (2 / r0 - 1 / el.a),
                                      rel=1e-9)
        assert 0 < el.e < 1 and el.a > 0

    def test_impact_anomaly_inverts_radius(self, stage_state, earth):
        pred = predict(stage_state, earth)
        el = orbit_elements(stage_state, pred, earth)
        assert el.a * (1 - el.e * np.cos(el.Ep)) == \
            pytest.approx(earth.r_e, rel=1e-6)


class TestTofSensitivities:
    def test_zero_acceleration_rate_is_minus_one(self, stage_state, earth):
        # the total rate is -1 + dtf_dar*a_r + dtf_datheta*a_theta;
        # with zero acceleration only the free-fall clock remains
        pred = predict(stage_state, earth)
        el = orbit_elements(stage_state, pred, earth)
        dtf_dar, dtf_datheta = tof_sensitivities(stage_state, pred, el, earth)
        assert -1.0 + dtf_dar * 0.0 + dtf_datheta * 0.0 == -1.0

    @pytest.mark.parametrize("axis_idx,sens_idx", [(0, 0), (1, 1)])
    def test_finite_difference(self, stage_state, earth, axis_idx, sens_idx):
        pred = predict(stage_state, earth)
        el = orbit_elements(stage_state, pred, earth)
        sens = tof_sensitivities(stage_state, pred, el, earth)
        triad = unit_triad(stage_state.r, stage_state.v)
        fd = fd_tof(stage_state, triad[axis_idx], earth)
        assert sens[sens_idx] == pytest.approx(fd, rel=1e-3)

    def test_finite_difference_sweep(self, earth):
        rng = np.random.default_rng(22)
        checked = 0
        while checked < 30:
            st = random_state(rng, earth)
            pred = predict(st, earth)
            try:
                el = orbit_elements(st, pred, earth)
                sens = tof_sensitivities(st, pred, el, earth)
            except (NearCircular, SingularDenominator):
                continue
            i_r, i_theta, _ = unit_triad(st.r, st.v)
            assert sens[0] == pytest.approx(fd_tof(st, i_r, earth), rel=1e-3)
            assert sens[1] == pytest.approx(fd_tof(st, i_theta, earth),
                                            rel=1e-3)
            checked += 1


class TestRateBasisEcef:
    def test_reduces_to_eci_without_rotation(self, stage_state):
        still = EarthModel(omega_e=0.0, t_ref=0.0)
        pred = predict(stage_state, still)
        basis = compute_rate_basis(stage_state, pred, still)
        np.testing.assert_allclose(basis.d_r_e, basis.d_r, atol=1e-15)
        np.testing.assert_allclose(basis.d_theta_e, basis.d_theta,
                                   atol=1e-15)
        np.testing.assert_allclose(basis.d_h_e, basis.d_h, atol=1e-15)

    def test_out_of_plane_is_pure_rotation(self, stage_state, earth_ref):
        pred = predict(stage_state, earth_ref)
        basis = compute_rate_basis(stage_state, pred, earth_ref)
        T = eci_to_ecef_matrix(pred.delta_t, earth_ref)
        np.testing.assert_allclose(basis.d_h_e, T @ basis.d_h, atol=0)

    def test_finite_difference_ecef(self, stage_state, earth_ref):
        pred = predict(stage_state, earth_ref)
        basis = compute_rate_basis(stage_state, pred, earth_ref)
        triad = unit_triad(stage_state.r, stage_state.v)
        for d, axis in zip((basis.d_r_e, basis.d_theta_e, basis.d_h_e),
                           triad):
            fd = fd_iip(stage_state, axis, earth_ref, attr="i_p_ecef")
            assert np.linalg.norm(d - fd) < 2e-3 * np.linalg.norm(fd)

    def test_ecef_tangency(self, earth_ref):
        rng = np.random.default_rng(23)
        for _ in range(50):
            st = random_state(rng, earth_ref)
            pred = predict(st, earth_ref)
            try:
                basis = compute_rate_basis(st, pred, earth_ref)
            except (NearCircular, SingularDenominator):
                continue
            for d in (basis.d_r_e, basis.d_theta_e, basis.d_h_e):
                assert abs(np.dot(d, pred.i_p_ecef)) < \
                    1e-9 * np.linalg.norm(d)


class TestSuperposition:
    def test_combined_impulse_matches_linear_model(self, stage_state, earth):
        pred = predict(stage_state, earth)
        basis = compute_rate_basis(stage_state, pred, earth)
        i_r, i_theta, i_h = unit_triad(stage_state.r, stage_state.v)
        a = np.array([0.7, -1.3, 0.4])
        axis_vec = a[0] * i_r + a[1] * i_theta + a[2] * i_h
        fd = fd_iip(stage_state, axis_vec, earth)
        linear = a[0] * basis.d_r + a[1] * basis.d_theta + a[2] * basis.d_h
        assert np.linalg.norm(linear - fd) < 1e-3 * np.linalg.norm(fd)

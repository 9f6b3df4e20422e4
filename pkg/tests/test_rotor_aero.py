import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from tailsim import rotor_aero as ra
from tailsim.errors import DomainError, NoConvergenceError


GEOM = ra.CoaxGeometry()


def cubic(r):
    return 2.0 * r**3 + 5.0 * r**2 + 2.0 * r - 2.0


class TestHoverRatio:
    def test_published_value(self):
        assert abs(ra.solve_hover_ratio() - 0.4376) < 1e-3

    def test_residual(self):
        assert abs(cubic(ra.solve_hover_ratio())) < 1e-10

    def test_against_bisection_oracle(self):
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if cubic(mid) > 0:
                hi = mid
            else:
                lo = mid
        assert abs(ra.solve_hover_ratio() - 0.5 * (lo + hi)) < 1e-10

    def test_against_brentq(self):
        assert abs(ra.solve_hover_ratio() - brentq(cubic, 0.0, 1.0, xtol=1e-14)) < 1e-12

    def test_runtime_under_1ms(self):
        t0 = time.perf_counter()
        for _ in range(10):
            ra.solve_hover_ratio()
        assert (time.perf_counter() - t0) / 10 < 1e-3


class TestGeometry:
    def test_effective_area(self):
        g = ra.CoaxGeometry(blade_radius=0.5, root_cutout=0.08)
        assert abs(g.area - math.pi * (0.25 - 0.0064)) < 1e-12

    def test_k_u_bar_matches_published_coefficient(self):
        # 3.3913 rho A lambda^2 R^2, with the coefficient solved to full precision
        expected = 3.3913 * GEOM.rho * GEOM.area * GEOM.lambda_c**2 * GEOM.disk_radius**2
        assert abs(GEOM.k_u_bar - expected) / expected < 1e-4

    def test_bad_geometry_rejected(self):
        with pytest.raises(DomainError):
            ra.CoaxGeometry(blade_radius=0.05, root_cutout=0.08)


class TestInducedFlowHover:
    def test_hover_ratios(self):
        f = ra.solve_coax_induced_flow(1.0, 0.0, 0.0, GEOM)
        assert abs(f.v_l - 0.4376) < 1e-3
        assert abs(f.w_l - 2.3590) < 1e-3
        assert f.w_u == 2.0

    def test_hover_thrusts(self):
        f = ra.solve_coax_induced_flow(1.0, 0.0, 0.0, GEOM)
        rho_a = GEOM.rho * GEOM.area
        assert abs(f.F_cu - 2.0 * rho_a) / (2.0 * rho_a) < 1e-9
        assert abs(f.F_cl - 1.3913 * rho_a) / (1.3913 * rho_a) < 1e-3

    def test_scales_with_v_u_squared(self):
        f1 = ra.solve_coax_induced_flow(1.0, 0.0, 0.0, GEOM)
        f5 = ra.solve_coax_induced_flow(5.0, 0.0, 0.0, GEOM)
        assert abs(f5.F_cl - 25.0 * f1.F_cl) / (25.0 * f1.F_cl) < 1e-9
        assert abs(f5.v_l - 5.0 * f1.v_l) < 1e-8

    def test_equal_power(self):
        for v_u, al, vb in [(1, 0, 0), (3, 0.1, 2), (10, 0.3, 15), (8, -0.2, 10), (2, 0.5, 2)]:
            f = ra.solve_coax_induced_flow(float(v_u), al, float(vb), GEOM)
            assert abs(f.P_cu - f.P_cl) / max(f.P_cu, 1.0) < 1e-8

    def test_hover_limit_continuity(self):
        f = ra.solve_coax_induced_flow(1.0, 1e-4, 1e-4, GEOM)
        assert abs(f.v_l - ra.HOVER_RATIO) < 1e-3
        assert abs(f.w_l - ra.HOVER_SLIPSTREAM) < 1e-3


class TestInducedFlowGridOracle:
    def grid_search(self, v_u, alpha, V_b, geom):
        """Brute-force minimizer of both residuals over a (v_l, w_l) grid."""
        rho_a = geom.rho * geom.area
        half = 0.5 * rho_a
        uc = V_b * math.cos(alpha)
        us2 = (V_b * math.sin(alpha)) ** 2
        m_u = rho_a * math.sqrt(us2 + (uc + v_u) ** 2)
        P_cu = 2.0 * m_u * v_u * (uc + v_u)
        e_in = 0.5 * half * math.sqrt((uc + 2 * v_u) ** 2 + us2) * (uc + 2 * v_u) ** 2

        def objective(v_l, w_l):
            m_m = half * np.sqrt((uc + 2 * v_u + v_l) ** 2 + us2)
            m_out = half * np.sqrt((uc + v_l) ** 2 + us2)
            m_l = m_m + m_out
            x = uc + v_u + v_l
            F_cl = m_l * (uc + w_l) - 2 * m_u * v_u - m_out * uc
            r_power = F_cl * x - P_cu
            r_energy = F_cl * x - (0.5 * m_l * (uc + w_l) ** 2 - e_in - 0.5 * m_out * uc**2)
            return np.abs(r_power) + np.abs(r_energy)

        lo = np.array([1e-6 * v_u, 0.5 * v_u])
        hi = np.array([1.5 * v_u, 4.0 * v_u])
        best = None
        for _ in range(4):
            vl = np.linspace(lo[0], hi[0], 1000)
            wl = np.linspace(lo[1], hi[1], 1000)
            V, W = np.meshgrid(vl, wl, indexing="ij")
            obj = objective(V, W)
            i, j = np.unravel_index(np.argmin(obj), obj.shape)
            best = (vl[i], wl[j])
            dv, dw = vl[1] - vl[0], wl[1] - wl[0]
            lo = np.array([max(1e-9, best[0] - 2 * dv), best[1] - 2 * dw])
            hi = np.array([best[0] + 2 * dv, best[1] + 2 * dw])
        return best

    def test_forward_flight_case(self):
        f = ra.solve_coax_induced_flow(1.0, 0.1, 2.0, GEOM)
        v_l_ref, w_l_ref = self.grid_search(1.0, 0.1, 2.0, GEOM)
        assert abs(f.v_l - v_l_ref) < 1e-4
        assert abs(f.w_l - w_l_ref) < 1e-4


class TestTruthThrust:
    def test_zero_speed(self):
        F, w_l, flow = ra.coax_thrust_truth(0.0, 0.0, 0.0, GEOM)
        assert F == 0.0 and w_l == 0.0

    def test_hover_matches_nominal_coefficient(self):
        for w in (50.0, 100.0, 300.0):
            F, _, _ = ra.coax_thrust_truth(w, 0.0, 0.0, GEOM)
            F0 = ra.coax_thrust_nominal(w, GEOM)
            assert abs(F - F0) / F0 < 1e-6

    def test_hover_lower_speed_ratio(self):
        F, w_l, _ = ra.coax_thrust_truth(100.0, 0.0, 0.0, GEOM)
        assert abs(w_l - 0.4376 * 100.0) < 1e-3 * 100.0

    def test_nominal_trivial_cases(self):
        assert ra.coax_thrust_nominal(0.0, GEOM) == 0.0
        assert ra.coax_thrust_nominal(1.0, GEOM) == GEOM.k_u_bar

    def test_monotone_in_omega(self):
        for alpha, vb in [(0.0, 0.0), (0.1, 5.0), (0.1, 20.0), (0.5, 40.0)]:
            speeds = np.linspace(1.0, 400.0, 60)
            thrusts = [ra.coax_thrust_truth(w, alpha, vb, GEOM)[0] for w in speeds]
            assert all(b > a for a, b in zip(thrusts, thrusts[1:]))

    def test_gamma_residual_vanishes_at_hover(self):
        # truth minus nominal at (alpha, V_b) = (0, 0) is zero
        for w in (10.0, 80.0, 250.0):
            F, w_l, _ = ra.coax_thrust_truth(w, 0.0, 0.0, GEOM)
            assert abs(F - ra.coax_thrust_nominal(w, GEOM)) < 1e-6 * F
            assert abs(w_l - ra.HOVER_RATIO * w) < 1e-9 * w

    def test_clamped_branch_continuous(self):
        # across the fast-inflow seam the total thrust stays continuous
        V_b = 20.0
        lam_r = GEOM.lambda_c * GEOM.disk_radius
        w_seam = V_b / (1.605 * lam_r)
        F_lo, _, f_lo = ra.coax_thrust_truth(w_seam * 0.999, 0.0, V_b, GEOM)
        F_hi, _, f_hi = ra.coax_thrust_truth(w_seam * 1.001, 0.0, V_b, GEOM)
        assert f_lo.clamped != f_hi.clamped or abs(F_hi - F_lo) / F_lo < 1e-2
        assert abs(F_hi - F_lo) / F_lo < 5e-3

    def test_envelope_guard(self):
        with pytest.raises(NoConvergenceError):
            ra.solve_coax_induced_flow(1.0, 0.0, 100.0, GEOM)
        with pytest.raises(NoConvergenceError):
            ra.solve_coax_induced_flow(1.0, -1.0, 1.0, GEOM)


class TestPowerFactors:
    def test_coax_factor(self):
        assert abs(ra.induced_power_factor_coax() - 1.2809) < 1e-3

    def test_total_limit_at_zero_quad_share(self):
        assert abs(ra.induced_power_factor_total(1e-6, 1.0) - 2.0 / 1.5614) < 1e-6
        assert abs(ra.induced_power_factor_total(1e-6, 1.0) - 1.2809) < 1e-3

    def test_direct_evaluation(self):
        x = 2.0 * 4.4164 * 0.5**1.5 * 1.0
        expected = (2.0 + x) / (1.5614 + x)
        got = ra.induced_power_factor_total(0.5, 1.0)
        assert abs(got - expected) < 1e-12
        assert got < 1.2809

    def test_always_below_coax_factor(self):
        for zeta in np.linspace(0.01, 0.99, 20):
            for eta in np.linspace(0.1, 10.0, 20):
                assert ra.induced_power_factor_total(zeta, eta) < 1.2809

    def test_domain_errors(self):
        for zeta, eta in [(0.0, 1.0), (1.0, 1.0), (-0.2, 1.0), (0.5, 0.0), (0.5, -1.0)]:
            with pytest.raises(DomainError):
                ra.induced_power_factor_total(zeta, eta)


class TestQuadRotors:
    PARAMS = ra.QuadRotorParams()

    def test_zero_speeds(self):
        w = ra.quad_rotor_wrench([0, 0, 0, 0], self.PARAMS)
        np.testing.assert_array_equal(w.force, np.zeros(3))
        np.testing.assert_array_equal(w.torque, np.zeros(3))

    def test_symmetric_speeds(self):
        w = ra.quad_rotor_wrench([100, 100, 100, 100], self.PARAMS, "transition")
        np.testing.assert_allclose(w.torque, np.zeros(3), atol=1e-12)
        assert abs(w.force[0] - 4 * self.PARAMS.b * 100**2) < 1e-9
        assert w.force[1] == 0.0 and w.force[2] == 0.0

    def test_hand_evaluated_pitch_yaw(self):
        # omega = (2,1,1,2): pitch differential zero, yaw = -6 * b*l3/2
        w = ra.quad_rotor_wrench([2, 1, 1, 2], self.PARAMS)
        assert abs(w.torque[1]) < 1e-15
        assert abs(w.torque[2] - (-1.2e-3)) < 1e-12

    def test_roll_lever_modes(self):
        p = self.PARAMS
        lever_t = p.k + math.sqrt(2) * p.l_3 * p.k_f / 2
        assert abs(p.roll_lever("transition") - lever_t) < 1e-15
        assert p.roll_lever("forward") == p.k
        w_t = ra.quad_rotor_wrench([10, 0, 0, 0], p, "transition")
        w_f = ra.quad_rotor_wrench([10, 0, 0, 0], p, "forward")
        assert abs(w_t.torque[0] - lever_t * 100) < 1e-12
        assert abs(w_f.torque[0] - p.k * 100) < 1e-12

    def test_negative_speed_rejected(self):
        with pytest.raises(DomainError):
            ra.quad_rotor_wrench([-1, 0, 0, 0], self.PARAMS)


class TestGyroscopicTorque:
    def test_zero_body_rate(self):
        np.testing.assert_array_equal(
            ra.gyroscopic_torque(np.zeros(3), [100, 200, 300, 400], 0.01), np.zeros(3)
        )

    def test_equal_speeds_cancel(self):
        tau = ra.gyroscopic_torque(np.array([1.0, 2.0, 3.0]), [50, 50, 50, 50], 0.01)
        np.testing.assert_allclose(tau, np.zeros(3), atol=1e-15)

    def test_single_rotor_cross_product(self):
        # J_r * (e_x x e_z) * (-1)^1 * w = J_r * w * e_y
        tau = ra.gyroscopic_torque(np.array([1.0, 0, 0]), [30, 0, 0, 0], 0.01)
        oracle = 0.01 * (-30) * np.cross([1.0, 0, 0], [0, 0, 1.0])
        np.testing.assert_allclose(tau, oracle, atol=1e-15)
        np.testing.assert_allclose(tau, [0.0, 0.3, 0.0], atol=1e-15)

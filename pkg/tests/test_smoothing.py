import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpoly.core.smoothing import (
    ConeCap,
    amplitude_phase,
    audit_formulas,
    cone_circle_length,
    curvature_of_warp,
    find_lambda,
    integration_order,
    k_profile,
    limit_coefficients,
    ode_integrate_check,
    smooth_cone,
    solve_warp,
    warp_AB,
    warp_solution,
)
from kpoly.utils.constants import TWO_PI
from kpoly.utils.error_handler import KPolyError

from .conftest import error_code


class TestWarpProfile:
    def test_band_of_unit_frequency_is_the_sine(self):
        profile = solve_warp(0.1, 0.1)
        A, B = profile.coefficients
        assert A == pytest.approx(1.0, abs=1e-14)
        assert B == pytest.approx(0.0, abs=1e-14)

    def test_initial_data(self):
        profile = warp_solution(0.05, 0.05, 1.0, 0.0)
        f, fp, _ = profile.evaluate(0.7)
        assert f == pytest.approx(math.cos(0.7), abs=1e-14)
        assert fp == pytest.approx(-math.sin(0.7), abs=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(lam=st.floats(0.05, 1.5), eps=st.floats(1e-3, 0.1))
    def test_value_and_slope_match_at_the_knots(self, lam, eps):
        profile = solve_warp(lam, eps)
        for knot in profile.knots:
            left = profile.evaluate(knot, side='left')
            right = profile.evaluate(knot, side='right')
            assert left[0] == pytest.approx(right[0], rel=1e-9, abs=1e-12)
            assert left[1] == pytest.approx(right[1], rel=1e-9, abs=1e-12)

    def test_k_profile(self):
        assert k_profile(0.5, 0.01, 0.005) == 1.0
        assert k_profile(0.5, 0.01, 0.015) == pytest.approx(2500.0)
        assert k_profile(0.5, 0.01, 0.5) == 1.0

    def test_parameters_are_checked(self):
        with pytest.raises(KPolyError) as excinfo:
            solve_warp(-1.0, 0.1)
        assert error_code(excinfo) == 303
        with pytest.raises(KPolyError) as excinfo:
            solve_warp(0.5, 0.5)
        assert error_code(excinfo) == 605

    def test_negative_radius(self):
        with pytest.raises(KPolyError) as excinfo:
            solve_warp(0.5, 0.01).evaluate(-0.1)
        assert error_code(excinfo) == 605


class TestCoefficients:
    @pytest.mark.parametrize('lam', [0.1, 0.5, 1.0, 1.4])
    def test_small_band_limit(self, lam):
        A, B = warp_AB(lam, 1e-4)
        A0, B0 = limit_coefficients(lam)
        assert A == pytest.approx(A0, abs=1e-3)
        assert B == pytest.approx(B0, abs=1e-3)

    @pytest.mark.parametrize('lam,eps', [(0.3, 0.01), (0.9, 0.05), (1.2, 0.2)])
    def test_closed_form_matches_the_profile(self, lam, eps):
        matched = solve_warp(lam, eps).coefficients
        closed = warp_AB(lam, eps)
        assert closed == pytest.approx(matched, rel=1e-10, abs=1e-12)

    def test_audit_passes(self):
        audit = audit_formulas()
        assert audit.passed
        assert audit.first_mismatch is None
        assert len(audit.cells) == 30
        assert all(cell.rel_error_A <= audit.rtol and cell.rel_error_B <= audit.rtol for cell in audit.cells)

    def test_amplitude_phase(self):
        amp, phi = amplitude_phase(1.0, 1.0)
        assert amp == pytest.approx(math.sqrt(2.0))
        assert phi == pytest.approx(math.pi / 4.0)
        with pytest.raises(KPolyError) as excinfo:
            amplitude_phase(0.0, 0.0)
        assert error_code(excinfo) == 603


class TestFindLambda:
    @pytest.mark.parametrize('omega', [0.3, 1.0, math.pi, 5.0])
    def test_amplitude_hits_the_cone(self, omega):
        eps = 1e-3
        lam = find_lambda(omega, eps, tau=0.1)
        assert eps <= lam <= math.pi / 2.0
        amp, phi = amplitude_phase(*solve_warp(lam, eps).coefficients)
        assert amp == pytest.approx(1.0 - omega / TWO_PI, abs=1e-10)
        assert abs(phi) < 0.1

    def test_approaches_the_limit_root(self):
        omega = 1.0
        lam = find_lambda(omega, 1e-4, tau=0.1)
        A0, _ = limit_coefficients(lam)
        assert A0 == pytest.approx(1.0 - omega / TWO_PI, abs=1e-3)

    def test_phase_bound(self):
        with pytest.raises(KPolyError) as excinfo:
            find_lambda(1.0, 0.05, tau=1e-9)
        assert error_code(excinfo) == 602

    def test_bad_inputs(self):
        for omega, tau in [(0.0, 0.1), (TWO_PI, 0.1), (1.0, 0.0)]:
            with pytest.raises(KPolyError) as excinfo:
                find_lambda(omega, 1e-3, tau)
            assert error_code(excinfo) == 303


class TestCurvature:
    def test_smoothed_cone_is_at_least_one(self):
        profile, summary = smooth_cone(1.0, 1e-3, 0.1)
        for i in range(1, 400):
            t = profile.t_max * i / 400
            assert curvature_of_warp(profile, t, side='right') >= 1.0
        assert summary.residual <= 1e-10

    def test_one_sided_values_at_a_knot(self):
        profile = solve_warp(0.5, 0.01)
        assert curvature_of_warp(profile, 0.01, side='left') == 1.0
        assert curvature_of_warp(profile, 0.01, side='right') == pytest.approx(2500.0)
        assert curvature_of_warp(profile, 0.02, side='right') == 1.0

    def test_knot_needs_a_side(self):
        with pytest.raises(KPolyError) as excinfo:
            curvature_of_warp(solve_warp(0.5, 0.01), 0.02)
        assert error_code(excinfo) == 604

    def test_vanishing_warp(self):
        with pytest.raises(KPolyError) as excinfo:
            curvature_of_warp(solve_warp(0.5, 0.01), 0.0)
        assert error_code(excinfo) == 605

    def test_unknown_side(self):
        with pytest.raises(KPolyError) as excinfo:
            curvature_of_warp(solve_warp(0.5, 0.01), 0.3, side='up')
        assert error_code(excinfo) == 104


class TestIntegration:
    @pytest.mark.parametrize('lam', [0.2, 0.8, 1.5])
    def test_matches_the_closed_form(self, lam):
        assert ode_integrate_check(lam, 0.05) <= 1e-6

    def test_fourth_order(self):
        assert integration_order(1.0, 0.3, 0.3 / 50.0) >= 3.8

    def test_step_bound(self):
        with pytest.raises(KPolyError) as excinfo:
            ode_integrate_check(1.0, 0.05, step=0.01)
        assert error_code(excinfo) == 303

    @pytest.mark.parametrize('lam', [0.2, 0.8, 1.5])
    def test_wronskian_is_constant(self, lam):
        eps = 0.05
        f = warp_solution(lam, eps, 1.0, 0.0)
        g = warp_solution(lam, eps, 0.0, 1.0)
        ts = [0.0, 0.5 * eps, eps, 1.3 * eps, 1.7 * eps, 2.0 * eps, 0.5, 1.2]
        for t in ts:
            for side in ('left', 'right'):
                fv, fp, _ = f.evaluate(t, side)
                gv, gp, _ = g.evaluate(t, side)
                assert fv * gp - fp * gv == pytest.approx(1.0, abs=1e-10)


class TestConeCap:
    def test_circle_length(self):
        assert cone_circle_length(math.pi, math.pi / 2.0) == pytest.approx(math.pi)
        with pytest.raises(KPolyError):
            cone_circle_length(1.0, math.pi)

    def test_cap(self):
        cap = ConeCap(R=1.0, omega=1.0)
        assert cap.circle_length(0.5) == pytest.approx(cone_circle_length(1.0, 0.5))
        profile, summary = cap.smoothed(0.01, 0.1)
        assert summary.amp == pytest.approx(1.0 - 1.0 / TWO_PI, abs=1e-10)
        assert profile.knots == (0.01, 0.02)
        with pytest.raises(KPolyError):
            cap.circle_length(1.5)

    def test_band_must_fit(self):
        with pytest.raises(KPolyError) as excinfo:
            ConeCap(R=0.1, omega=1.0).smoothed(0.05, 0.1)
        assert error_code(excinfo) == 303

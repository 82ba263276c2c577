"""Tests for model triangles, angles, areas and the distance-ratio function."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kpoly.core.model_geometry import (
    Curvature,
    ModelTriangle,
    angle_from_sides,
    chart_embed,
    comparison_angle,
    excess_e0,
    fit_power_law,
    geodesic_point,
    model_distance,
    sigma0,
    theta,
    theta_ratio_table,
    triangle_area,
)
from kpoly.utils.error_handler import KPolyError

from .conftest import error_code

HALF_PI = math.pi / 2.0


def hyperbolic_equilateral_angle(side: float) -> float:
    # cosh a = cosh^2 a - sinh^2 a cos(alpha)
    ch = math.cosh(side)
    return math.acos(ch / (ch + 1.0))


class TestAngleFromSides:
    def test_equilateral_flat(self):
        assert angle_from_sides(0.0, 1.0, 1.0, 1.0) == pytest.approx(math.pi / 3.0, abs=1e-15)

    def test_octant(self):
        assert angle_from_sides(1.0, HALF_PI, HALF_PI, HALF_PI) == pytest.approx(HALF_PI, abs=1e-14)

    def test_hyperbolic_equilateral_matches_law_of_cosines(self):
        assert angle_from_sides(-1.0, 1.0, 1.0, 1.0) == pytest.approx(hyperbolic_equilateral_angle(1.0), abs=1e-13)

    def test_collinear_sides_are_rejected(self):
        with pytest.raises(KPolyError) as excinfo:
            angle_from_sides(0.0, 2.0, 1.0, 1.0)
        assert error_code(excinfo) == 301

    def test_zero_side_is_rejected(self):
        with pytest.raises(KPolyError) as excinfo:
            angle_from_sides(0.0, 1.0, 0.0, 1.0)
        assert error_code(excinfo) == 302

    @pytest.mark.parametrize('sides', [(3.0, 3.0, 3.0), (3.2, 1.0, 2.5)])
    def test_spherical_triangle_too_large(self, sides):
        with pytest.raises(KPolyError) as excinfo:
            angle_from_sides(1.0, *sides)
        assert error_code(excinfo) == 304

    def test_small_sides_keep_precision(self):
        # half-angle formulas take over below the small-side threshold
        side = 1e-7
        for kappa in (-1.0, 0.0, 1.0):
            assert angle_from_sides(kappa, side, side, side) == pytest.approx(math.pi / 3.0, rel=1e-9)

    def test_angles_grow_with_curvature(self):
        sides = (0.9, 0.7, 0.5)
        angles = [angle_from_sides(kappa, *sides) for kappa in (-1.0, 0.0, 1.0)]
        assert angles[0] < angles[1] < angles[2]

    @pytest.mark.parametrize('sides', [(0.9, 0.7, 0.5), (1.0, 1.0, 1.0), (2.0, 1.5, 0.8)])
    @pytest.mark.parametrize('kappa', [-1e-6, 1e-6])
    def test_near_zero_curvature_matches_flat(self, kappa, sides):
        assert angle_from_sides(kappa, *sides) == pytest.approx(angle_from_sides(0.0, *sides), abs=1e-5)


class TestComparisonAngle:
    def test_right_isoceles(self):
        assert comparison_angle(0.0, 1.0, 1.0, math.sqrt(2.0)) == pytest.approx(HALF_PI, abs=1e-14)

    def test_collinear_points_are_rejected(self):
        with pytest.raises(KPolyError):
            comparison_angle(0.0, 1.0, 1.0, 2.0)

    def test_octant(self):
        assert comparison_angle(1.0, HALF_PI, HALF_PI, HALF_PI) == pytest.approx(HALF_PI, abs=1e-14)


class TestAreas:
    def test_right_triangle(self):
        assert triangle_area(ModelTriangle(0.0, 3.0, 4.0, 5.0)) == pytest.approx(6.0, abs=1e-12)
        assert sigma0(3.0, 4.0, 5.0) == pytest.approx(6.0, abs=1e-12)

    def test_equilateral_unit(self):
        assert sigma0(1.0, 1.0, 1.0) == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-15)

    def test_near_degenerate_heron(self):
        s = (2.0 + 2.0 + 3.999) / 2.0
        expected = math.sqrt(s * (s - 2.0) * (s - 2.0) * (s - 3.999))
        assert sigma0(2.0, 2.0, 3.999) == pytest.approx(expected, rel=1e-9)

    def test_octant_area(self):
        assert triangle_area(ModelTriangle(1.0, HALF_PI, HALF_PI, HALF_PI)) == pytest.approx(HALF_PI, abs=1e-12)

    def test_hyperbolic_area_is_angle_defect(self):
        alpha = angle_from_sides(-1.0, 1.0, 1.0, 1.0)
        assert triangle_area(ModelTriangle(-1.0, 1.0, 1.0, 1.0)) == pytest.approx(math.pi - 3.0 * alpha, abs=1e-12)

    def test_area_scales_with_curvature(self):
        # a sphere of curvature 4 has radius 1/2
        octant = ModelTriangle(4.0, math.pi / 4.0, math.pi / 4.0, math.pi / 4.0)
        assert triangle_area(octant) == pytest.approx(math.pi / 8.0, abs=1e-12)


class TestExcess:
    def test_flat_equilateral(self):
        assert excess_e0(math.pi / 3.0, math.pi / 3.0, math.pi / 3.0) == pytest.approx(0.0, abs=1e-15)

    def test_octant(self):
        assert excess_e0(HALF_PI, HALF_PI, HALF_PI) == pytest.approx(HALF_PI)

    def test_hyperbolic_excess_is_minus_area(self):
        triangle = ModelTriangle(-1.0, 1.0, 1.0, 1.0)
        assert excess_e0(*triangle.angles) == pytest.approx(-triangle_area(triangle), abs=1e-12)

    def test_angle_out_of_range(self):
        with pytest.raises(KPolyError) as excinfo:
            excess_e0(math.pi, 0.1, 0.1)
        assert error_code(excinfo) == 303


class TestChartEmbed:
    def test_planar_placement(self):
        points = chart_embed(ModelTriangle(0.0, 3.0, 4.0, 5.0))
        np.testing.assert_allclose(points[0], [0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(points[1], [5.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(points[2], [16.0 / 5.0, 12.0 / 5.0], atol=1e-14)

    def test_octant_is_orthonormal(self):
        points = chart_embed(ModelTriangle(1.0, HALF_PI, HALF_PI, HALF_PI))
        np.testing.assert_allclose(points @ points.T, np.eye(3), atol=1e-14)

    @settings(max_examples=200, deadline=None)
    @given(
        kappa=st.floats(min_value=-2.0, max_value=2.0),
        a=st.floats(min_value=0.05, max_value=1.0),
        b=st.floats(min_value=0.05, max_value=1.0),
        c=st.floats(min_value=0.05, max_value=1.0),
    )
    def test_law_of_cosines_round_trip(self, kappa, a, b, c):
        assume(min(b + c - a, a + c - b, a + b - c) > 1e-3)
        points = chart_embed(ModelTriangle(kappa, a, b, c))
        measured = (
            model_distance(kappa, points[1], points[2]),
            model_distance(kappa, points[2], points[0]),
            model_distance(kappa, points[0], points[1]),
        )
        np.testing.assert_allclose(measured, (a, b, c), rtol=0.0, atol=1e-10 * max(a, b, c))

    def test_geodesic_midpoint(self):
        points = chart_embed(ModelTriangle(-1.0, 1.0, 1.2, 0.8))
        mid = geodesic_point(-1.0, points[0], points[1], 0.5)
        assert model_distance(-1.0, points[0], mid) == pytest.approx(0.4, abs=1e-12)
        assert model_distance(-1.0, mid, points[1]) == pytest.approx(0.4, abs=1e-12)


class TestTheta:
    def test_s_zero_gives_t_times_c(self):
        for kappa in (-1.0, 0.0, 1.0):
            assert theta(kappa, 1.0, 0.9, 0.8, 0.0, 0.3) == pytest.approx(0.3 * 0.8, abs=1e-14)

    def test_flat_similar_triangles(self):
        assert theta(0.0, 1.0, 0.9, 0.8, 0.4, 0.4) == pytest.approx(0.4, abs=1e-14)

    def test_octant_midpoints(self):
        # midpoints of two orthogonal quarter circles through the pole
        p = np.array([1.0, 0.0, 1.0]) / math.sqrt(2.0)
        q = np.array([0.0, 1.0, 1.0]) / math.sqrt(2.0)
        expected = math.acos(float(p @ q))
        assert theta(1.0, HALF_PI, HALF_PI, HALF_PI, 0.5, 0.5) == pytest.approx(expected, abs=1e-13)

    def test_fraction_out_of_range(self):
        with pytest.raises(KPolyError) as excinfo:
            theta(0.0, 1.0, 1.0, 1.0, 1.5, 0.5)
        assert error_code(excinfo) == 303

    @given(
        kappa=st.sampled_from([-1.0, 0.0, 1.0]),
        s=st.floats(min_value=0.0, max_value=1.0),
        t=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_isoceles_swap_symmetry(self, kappa, s, t):
        assert theta(kappa, 1.0, 0.8, 0.8, s, t) == pytest.approx(theta(kappa, 1.0, 0.8, 0.8, t, s), abs=1e-12)


class TestThetaRatioTable:
    def test_flat_ratios_are_one(self):
        assert theta_ratio_table(0.0, 1.0, 1.0, 1.0, 0.3, 0.7, [0.5, 0.25]) == pytest.approx([1.0, 1.0], abs=1e-14)

    def test_s_zero_ratio_is_exactly_one(self):
        assert theta_ratio_table(1.0, 1.0, 1.0, 1.0, 0.0, 0.6, [0.5, 0.25]) == pytest.approx([1.0, 1.0], abs=1e-14)

    def test_spherical_ratios_approach_one_quadratically(self):
        deltas = [2.0**-k for k in range(1, 5)]
        ratios = theta_ratio_table(1.0, 1.0, 1.0, 1.0, 0.5, 0.5, deltas)
        gaps = [abs(r - 1.0) for r in ratios]
        assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
        _, exponent = fit_power_law(deltas, gaps)
        assert exponent >= 1.9

    @pytest.mark.parametrize('kappa', [-1.0, 1.0])
    def test_uniform_convergence_on_random_triangles(self, kappa):
        rng = np.random.default_rng(7)
        deltas = [2.0**-k for k in range(1, 7)]
        found = 0
        while found < 20:
            A, B, C = rng.uniform(0.5, 1.5, 3)
            if min(B + C - A, A + C - B, A + B - C) < 0.1:
                continue
            s, t = rng.uniform(0.1, 0.9, 2)
            ratios = theta_ratio_table(kappa, A, B, C, s, t, deltas)
            _, exponent = fit_power_law(deltas, [abs(r - 1.0) for r in ratios])
            assert exponent >= 1.9
            found += 1


class TestCurvature:
    def test_rescaled(self):
        assert Curvature(1.0).rescaled(0.5).kappa == pytest.approx(4.0)

    def test_non_finite_is_rejected(self):
        with pytest.raises(KPolyError) as excinfo:
            Curvature(math.inf)
        assert error_code(excinfo) == 303

    def test_fit_power_law_recovers_exponent(self):
        xs = [0.5, 0.25, 0.125]
        K, p = fit_power_law(xs, [3.0 * x**2 for x in xs])
        assert K == pytest.approx(3.0)
        assert p == pytest.approx(2.0)

import logging
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kpoly.core.curvature_estimators import (
    TriangleSample,
    estimate_curvature_bounds,
    excess_ratio,
    filter_by_angle,
    local_development,
    model_ratio,
    sample_triangles,
)
from kpoly.core.formats import parse_anchor
from kpoly.core.kpolyhedron import SurfacePoint
from kpoly.core.model_geometry import ModelTriangle, excess_e0, sigma0, triangle_area
from kpoly.utils.error_handler import KPolyError

from .conftest import error_code

CENTROID = 'face:0:1:1:1'


def fixed_sample(sides, angles) -> TriangleSample:
    corner = SurfacePoint.at_vertex(0)
    return TriangleSample((corner, corner, corner), ((0.0, 0.0),) * 3, sides, angles, contains_x=True)


class TestRatios:
    def test_octant_sample(self):
        quarter = math.pi / 2.0
        ratio = excess_ratio(fixed_sample((quarter,) * 3, (quarter,) * 3))
        assert ratio == pytest.approx(8.0 / (math.sqrt(3.0) * math.pi), rel=1e-12)

    def test_degenerate_sample(self):
        with pytest.raises(KPolyError) as excinfo:
            excess_ratio(fixed_sample((1.0, 1.0, 2.0), (0.0, 0.0, math.pi)))
        assert error_code(excinfo) == 703

    @settings(max_examples=100, deadline=None)
    @given(
        kappa=st.sampled_from([1.0, -1.0, 4.0, -0.25]),
        a=st.floats(0.05, 1.0),
        b=st.floats(0.05, 1.0),
        c=st.floats(0.05, 1.0),
    )
    def test_true_area_gives_the_curvature(self, kappa, a, b, c):
        assume(a < b + c - 1e-3 and b < a + c - 1e-3 and c < a + b - 1e-3)
        assert model_ratio(kappa, a, b, c) == pytest.approx(kappa, abs=1e-12, rel=1e-9)

    @pytest.mark.parametrize('kappa', [1.0, -1.0])
    @pytest.mark.parametrize('side', [0.5, 0.2, 0.1, 0.05])
    def test_euclidean_area_is_close(self, kappa, side):
        area = triangle_area(ModelTriangle(kappa, side, side, side))
        assert abs(sigma0(side, side, side) / area - 1.0) <= side**2 / 4.0

    def test_euclidean_area_ratio_converges(self):
        errors = [abs(model_ratio(1.0, d, d, d, true_area=False) - 1.0) for d in (0.2, 0.1, 0.05)]
        assert errors[0] > errors[1] > errors[2]
        assert errors[1] / errors[2] == pytest.approx(4.0, rel=0.05)


class TestLocalDevelopment:
    def test_torus_face_centre(self, torus_surface):
        chart = local_development(torus_surface, parse_anchor(torus_surface, CENTROID))
        assert chart.total_angle == pytest.approx(2.0 * math.pi)
        assert chart.radius == pytest.approx(math.sqrt(2.0) / 6.0)

    def test_cube_vertex(self, cube_surface):
        chart = local_development(cube_surface, SurfacePoint.at_vertex(0))
        assert chart.total_angle == pytest.approx(1.5 * math.pi)
        assert chart.radius > 0.5

    def test_flat_distances(self, torus_surface):
        chart = local_development(torus_surface, parse_anchor(torus_surface, CENTROID))
        assert chart.distance((0.1, 0.0), (0.1, math.pi / 2.0)) == pytest.approx(0.1 * math.sqrt(2.0))
        assert chart.distance((0.1, 0.0), (0.05, math.pi)) == pytest.approx(0.15)

    def test_cone_distances_take_the_shorter_way(self, cube_surface):
        chart = local_development(cube_surface, SurfacePoint.at_vertex(0))
        assert chart.distance((0.1, 0.0), (0.1, 0.75 * math.pi)) == pytest.approx(0.2 * math.sin(0.375 * math.pi))
        assert chart.distance((0.1, 0.0), (0.1, 1.25 * math.pi)) == pytest.approx(0.2 * math.sin(0.125 * math.pi))

    def test_winding(self, cube_surface):
        chart = local_development(cube_surface, SurfacePoint.at_vertex(0))
        assert chart.contains_centre([0.0, math.pi / 2.0, math.pi])
        assert not chart.contains_centre([0.0, 0.1, 0.2])


class TestSampling:
    def test_samples_on_the_flat_torus(self, torus_surface):
        point = parse_anchor(torus_surface, CENTROID)
        samples = sample_triangles(torus_surface, point, 0.1, 0.2, 32, seed=3)
        assert len(samples) == 32
        for sample in samples:
            assert sample.diam < 0.1
            assert sample.min_angle >= 0.2
            assert abs(excess_e0(*sample.angles)) <= 1e-9
            assert all(0.025 <= r <= 0.05 for r, _ in sample.polar)

    def test_samples_around_a_cube_vertex(self, cube_surface):
        samples = sample_triangles(cube_surface, SurfacePoint.at_vertex(0), 0.2, 0.2, 16, seed=1)
        for sample in samples:
            assert excess_e0(*sample.angles) == pytest.approx(math.pi / 2.0, abs=1e-9)

    def test_worker_count_does_not_change_results(self, cube_surface):
        point = SurfacePoint.at_vertex(0)
        serial = estimate_curvature_bounds(cube_surface, point, [0.2, 0.1], 0.2, 24, seed=11, workers=1)
        threaded = estimate_curvature_bounds(cube_surface, point, [0.2, 0.1], 0.2, 24, seed=11, workers=4)
        assert [row.model_dump() for row in serial] == [row.model_dump() for row in threaded]

    def test_larger_floor_tightens_the_range(self, octant_sphere):
        point = parse_anchor(octant_sphere, CENTROID)
        pool = sample_triangles(octant_sphere, point, 0.1, 0.0, 64, seed=5)
        kept = filter_by_angle(pool, 0.4)
        kept_ratios = [excess_ratio(s) for s in kept]
        assert kept
        ratios = [excess_ratio(s) for s in pool]
        assert min(kept_ratios) >= min(ratios)
        assert max(kept_ratios) <= max(ratios)

    def test_delta_too_large(self, cube_surface):
        with pytest.raises(KPolyError) as excinfo:
            sample_triangles(cube_surface, SurfacePoint.at_vertex(0), 0.3, 0.2, 8)
        assert error_code(excinfo) == 702

    def test_delta_beyond_the_cone_ball(self, torus_surface):
        with pytest.raises(KPolyError) as excinfo:
            sample_triangles(torus_surface, parse_anchor(torus_surface, 'face:0:1:1:0.05'), 0.1, 0.2, 8)
        assert error_code(excinfo) == 702

    def test_nothing_passes_the_filter(self, torus_surface):
        with pytest.raises(KPolyError) as excinfo:
            sample_triangles(torus_surface, parse_anchor(torus_surface, CENTROID), 0.1, 1.047, 1)
        assert error_code(excinfo) == 701

    @pytest.mark.parametrize('floor,n', [(math.pi / 3.0, 8), (0.2, 0)])
    def test_bad_arguments(self, torus_surface, floor, n):
        with pytest.raises(KPolyError) as excinfo:
            sample_triangles(torus_surface, parse_anchor(torus_surface, CENTROID), 0.1, floor, n)
        assert error_code(excinfo) == 303


class TestBounds:
    def test_flat_torus(self, torus_surface):
        rows = estimate_curvature_bounds(torus_surface, parse_anchor(torus_surface, CENTROID), [0.1], 0.2, 64)
        assert rows[0].n_accepted == 64
        assert abs(rows[0].inf_ratio) <= 0.02
        assert abs(rows[0].sup_ratio) <= 0.02

    def test_exact_sphere(self, octant_sphere):
        rows = estimate_curvature_bounds(octant_sphere, parse_anchor(octant_sphere, CENTROID), [0.1], 0.2, 64)
        assert rows[0].inf_ratio == pytest.approx(1.0, abs=0.05)
        assert rows[0].sup_ratio == pytest.approx(1.0, abs=0.05)

    def test_cube_vertex_blows_up(self, cube_surface):
        rows = estimate_curvature_bounds(cube_surface, SurfacePoint.at_vertex(0), [0.2, 0.1], 0.2, 32)
        assert all(row.inf_ratio <= row.sup_ratio for row in rows)
        assert rows[1].sup_ratio >= 3.0 * rows[0].sup_ratio

    def test_fixed_seed_reproduces_the_table(self, octant_sphere):
        point = parse_anchor(octant_sphere, CENTROID)
        first = estimate_curvature_bounds(octant_sphere, point, [0.1, 0.05], 0.2, 16, seed=7)
        again = estimate_curvature_bounds(octant_sphere, point, [0.1, 0.05], 0.2, 16, seed=7)
        assert first == again

    def test_library_stays_quiet_at_info(self, torus_surface, caplog):
        with caplog.at_level(logging.INFO, logger='kpoly'):
            estimate_curvature_bounds(torus_surface, parse_anchor(torus_surface, CENTROID), [0.1], 0.2, 8)
        assert [r for r in caplog.records if r.levelno >= logging.INFO] == []

    def test_scales_must_decrease(self, torus_surface):
        with pytest.raises(KPolyError) as excinfo:
            estimate_curvature_bounds(torus_surface, parse_anchor(torus_surface, CENTROID), [0.05, 0.1], 0.2, 8)
        assert error_code(excinfo) == 303

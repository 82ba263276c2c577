"""Tests for the geodesic triangulations and the approximation experiments."""

import math

import numpy as np
import pytest

from kpoly.core.approximation import (
    angle_comparison,
    conical_net_experiment,
    convergence_experiment,
    get_oracle,
    octant_triangulation,
    replace_euclidean,
    replace_kappa,
    replacement_experiment,
    semicontinuity_experiment,
    sphere_triangulation,
    torus_triangulation,
)
from kpoly.core.fixtures import doubled_square
from kpoly.core.kpolyhedron import gauss_bonnet_residual
from kpoly.core.model_geometry import ModelTriangle, triangle_area
from kpoly.utils.error_handler import KPolyError

from .conftest import error_code


class TestTriangulations:
    def test_icosahedral_level_zero(self):
        T = sphere_triangulation(0)
        assert len(T.triangles) == 20
        np.testing.assert_allclose(np.array(T.triangles), math.acos(1.0 / math.sqrt(5.0)), atol=1e-14)

    @pytest.mark.parametrize('level', [0, 1, 2])
    def test_spherical_area_is_the_whole_sphere(self, level):
        T = sphere_triangulation(level)
        area = math.fsum(triangle_area(ModelTriangle(1.0, *sides)) for sides in T.triangles)
        assert area == pytest.approx(4.0 * math.pi, abs=1e-9)

    def test_diameters_shrink(self):
        diams = [sphere_triangulation(level).max_diam for level in range(4)]
        assert all(b < a for a, b in zip(diams, diams[1:]))

    def test_torus_counts(self):
        for level in range(3):
            T = torus_triangulation(level)
            assert len(T.triangles) == 2 * 4**level
            assert len(T.vertices) == 4**level

    def test_negative_level(self):
        with pytest.raises(KPolyError) as excinfo:
            sphere_triangulation(-1)
        assert error_code(excinfo) == 303


class TestReplacement:
    def test_flat_octahedron(self):
        flat = replace_euclidean(octant_triangulation())
        assert flat.kappa == 0.0
        assert flat.num_vertices == 6
        np.testing.assert_allclose(flat.omegas, [2.0 * math.pi / 3.0] * 6, atol=1e-12)
        assert abs(gauss_bonnet_residual(flat)) <= 1e-12

    def test_side_lengths_are_kept(self):
        T = sphere_triangulation(1)
        flat = replace_euclidean(T)
        np.testing.assert_allclose([t.sides for t in flat.triangles], T.triangles)

    def test_octants_at_curvature_one_are_the_sphere(self):
        exact = replace_kappa(octant_triangulation(), 1.0)
        assert max(abs(omega) for omega in exact.omegas) == pytest.approx(0.0, abs=1e-12)

    def test_zero_curvature_is_the_euclidean_replacement(self):
        T = sphere_triangulation(0)
        np.testing.assert_allclose(replace_kappa(T, 0.0).corner_angles, replace_euclidean(T).corner_angles)

    def test_angles_grow_with_curvature(self):
        T = sphere_triangulation(1)
        assert angle_comparison(T, -1.0, 0.0) == 0.0
        assert angle_comparison(T, 0.0, 1.0) == 0.0
        low = replace_kappa(T, -1.0).corner_angles
        high = replace_kappa(T, 1.0).corner_angles
        assert np.all(low < high)

    def test_angle_comparison_order(self):
        with pytest.raises(KPolyError):
            angle_comparison(sphere_triangulation(0), 1.0, 0.0)


class TestOracles:
    def test_unknown_target(self):
        with pytest.raises(KPolyError) as excinfo:
            get_oracle('cone')
        assert error_code(excinfo) == 104

    def test_sphere_locates_a_vertex(self):
        oracle = get_oracle('sphere')
        T = oracle.triangulate(1)
        triangle, weights = oracle.locate(T, T.vertices[15])
        corner = int(np.argmax(weights))
        assert T.faces[triangle][corner] == 15
        assert weights[corner] == pytest.approx(1.0)

    def test_torus_distances_wrap(self):
        oracle = get_oracle('torus')
        d = oracle.distances(np.array([[0.05, 0.05]]), np.array([[0.95, 0.95]]))
        assert d[0, 0] == pytest.approx(math.sqrt(2.0) * 0.1)


class TestConvergence:
    def test_sphere(self):
        rows = convergence_experiment(get_oracle('sphere'), [0, 1, 2, 3], k_sample=42, m=8)
        uppers = [row.gh_upper for row in rows]
        omegas = [row.max_omega for row in rows]
        assert all(b < a for a, b in zip(uppers, uppers[1:]))
        assert all(b < a for a, b in zip(omegas, omegas[1:]))
        assert uppers[-1] <= 0.05

    def test_flat_torus_is_reproduced(self):
        rows = convergence_experiment(get_oracle('torus'), [1, 2], k_sample=4, m=8)
        assert all(row.gh_upper == pytest.approx(0.0, abs=1e-12) for row in rows)
        assert all(row.max_omega == pytest.approx(0.0, abs=1e-12) for row in rows)

    def test_needs_two_levels(self):
        with pytest.raises(KPolyError) as excinfo:
            convergence_experiment(get_oracle('sphere'), [0], k_sample=12)
        assert error_code(excinfo) == 303

    def test_replacement_distortion_shrinks(self):
        rows = replacement_experiment(get_oracle('sphere'), [0, 1, 2], kappa=1.0, k_sample=12, m=4)
        assert rows[-1].distortion < rows[0].distortion


class TestSemicontinuity:
    def test_cube_vertex(self, cube_surface):
        rows = semicontinuity_experiment(cube_surface, 0, 2)
        assert [row.level for row in rows] == [0, 1, 2]
        assert all(row.holds for row in rows)
        assert all(row.omega <= row.omega_limit + 1e-9 for row in rows)
        assert rows[1].max_new_omega == pytest.approx(0.0, abs=1e-12)

    def test_doubled_square(self):
        rows = semicontinuity_experiment(doubled_square(), 1, 2)
        assert all(row.holds for row in rows)
        assert rows[-1].omega == pytest.approx(math.pi)

    def test_unknown_vertex(self, cube_surface):
        with pytest.raises(KPolyError) as excinfo:
            semicontinuity_experiment(cube_surface, 42, 1)
        assert error_code(excinfo) == 404


class TestConicalNet:
    def test_shrunk_sphere(self):
        rows = conical_net_experiment(get_oracle('sphere'), [0, 1], kappa=1.0, scale=0.5)
        for row in rows:
            assert row.conical_vertices == row.num_vertices
            assert row.min_omega > 0.0
            assert row.alexandrov

    def test_torus_needs_negative_curvature(self):
        rows = conical_net_experiment(get_oracle('torus'), [1, 2], kappa=-1.0, scale=0.5)
        assert all(row.conical_vertices == row.num_vertices for row in rows)
        flat = conical_net_experiment(get_oracle('torus'), [1, 2], kappa=0.0, scale=0.5)
        assert all(row.max_omega == pytest.approx(0.0, abs=1e-12) for row in flat)

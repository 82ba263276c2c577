import math

import numpy as np
import pytest

from kpoly.core.geodesics import direction_fan, trace_geodesic
from kpoly.core.kpolyhedron import AnchorKind, SurfacePoint, point_from_weights
from kpoly.core.metric_graph import distance
from kpoly.utils.error_handler import KPolyError

from .conftest import error_code

CENTROID = np.array([2.0 / 3.0, 1.0 / 3.0])


def torus_coordinates(point: SurfacePoint) -> np.ndarray:
    """Square coordinates of a face point of the one-cell flat torus."""
    coords = np.array(point.coords)
    if point.triangle == 1:
        # triangle 1 is laid out with its hypotenuse on the x-axis
        c, s = math.cos(math.pi / 4.0), math.sin(math.pi / 4.0)
        coords = np.array([[c, -s], [s, c]]) @ coords
    return coords


def periodic_gap(a: np.ndarray, b: np.ndarray) -> float:
    delta = (a - b + 0.5) % 1.0 - 0.5
    return float(np.linalg.norm(delta))


class TestDirectionFan:
    def test_total_angles(self, cube_surface, torus_surface):
        assert direction_fan(cube_surface, SurfacePoint.at_vertex(0)).total_angle == pytest.approx(1.5 * math.pi)
        assert direction_fan(torus_surface, SurfacePoint.at_vertex(0)).total_angle == pytest.approx(2.0 * math.pi)
        edge = SurfacePoint.on_edge(0, 0, 0.3)
        assert direction_fan(cube_surface, edge).total_angle == pytest.approx(2.0 * math.pi)

    def test_vertex_fan_has_a_sector_per_corner(self, cube_surface):
        fan = direction_fan(cube_surface, SurfacePoint.at_vertex(0))
        assert len(fan.sectors) == len(cube_surface.links[0])

    def test_locate_wraps_around(self, torus_surface):
        fan = direction_fan(torus_surface, point_from_weights(torus_surface, 0, [1.0, 1.0, 1.0]))
        sector, phi = fan.locate(2.0 * math.pi + 0.25)
        assert sector.triangle == 0
        assert phi == pytest.approx(0.25)


class TestTraceGeodesic:
    def test_zero_length_returns_the_start(self, cube_surface):
        start = SurfacePoint.at_vertex(2)
        assert trace_geodesic(cube_surface, start, 0.4, 0.0) == start

    def test_short_segment_inside_a_face(self, torus_surface):
        start = point_from_weights(torus_surface, 0, [1.0, 1.0, 1.0])
        end = trace_geodesic(torus_surface, start, 2.0, 0.1)
        assert end.kind is AnchorKind.FACE
        assert distance(torus_surface, start, end) == pytest.approx(0.1, abs=1e-12)

    @pytest.mark.parametrize('theta, length', [(1.0, 2.3), (2.5, 0.9), (4.2, 3.7)])
    def test_long_segment_on_the_torus_is_a_straight_line(self, torus_surface, theta, length):
        start = point_from_weights(torus_surface, 0, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(torus_coordinates(start), CENTROID, atol=1e-14)
        # theta is measured from the direction to corner A toward corner B
        towards_a = -CENTROID / np.linalg.norm(CENTROID)
        normal = np.array([-towards_a[1], towards_a[0]])
        if np.dot(normal, np.array([1.0, 0.0]) - CENTROID) < 0.0:
            normal = -normal
        heading = math.cos(theta) * towards_a + math.sin(theta) * normal
        end = trace_geodesic(torus_surface, start, theta, length)
        assert periodic_gap(torus_coordinates(end), CENTROID + length * heading) < 1e-9

    def test_running_into_a_vertex(self, torus_surface):
        start = point_from_weights(torus_surface, 0, [1.0, 1.0, 1.0])
        with pytest.raises(KPolyError) as excinfo:
            trace_geodesic(torus_surface, start, 0.0, 1.0)
        assert error_code(excinfo) == 406

    def test_negative_length(self, torus_surface):
        with pytest.raises(KPolyError) as excinfo:
            trace_geodesic(torus_surface, SurfacePoint.at_vertex(0), 0.0, -1.0)
        assert error_code(excinfo) == 303

"""Directions at a point of a polyhedron and geodesics shot along them."""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..utils.error_handler import KPolyError
from .config import get_tolerances
from .kpolyhedron import AnchorKind, KPolyhedron, SurfacePoint, anchor_hosts, edge_corners, validate_anchor
from .model_geometry import unit_to_chart

logger = logging.getLogger(__name__)

MAX_TRACE_STEPS = 100_000


class Sector(NamedTuple):
    """Angular sector of directions at a point that start inside one triangle.

    A direction at angle phi in [0, width] is cos(phi) * start + sin(phi) * normal,
    expressed in the unit chart of `triangle` at `apex`.
    """

    triangle: int
    apex: np.ndarray
    start: np.ndarray
    normal: np.ndarray
    width: float
    through: frozenset[int]


@dataclass(frozen=True)
class DirectionFan:
    """All directions at a surface point, as consecutive sectors."""

    point: SurfacePoint
    sectors: tuple[Sector, ...]

    @property
    def total_angle(self) -> float:
        return math.fsum(s.width for s in self.sectors)

    def locate(self, theta: float) -> tuple[Sector, float]:
        """Sector containing polar angle theta and the angle inside that sector."""
        theta = theta % self.total_angle
        for sector in self.sectors:
            if theta <= sector.width:
                return sector, theta
            theta -= sector.width
        last = self.sectors[-1]
        return last, last.width


def direction_fan(polyhedron: KPolyhedron, point: SurfacePoint) -> DirectionFan:
    """Build the fan of directions at a point.

    Vertices get one sector per corner in link order, points on an edge get one
    half-turn per side, and face points a single full turn.
    """
    validate_anchor(polyhedron, point)
    space = polyhedron.space
    sectors = []

    if point.kind is AnchorKind.VERTEX:
        for corner in polyhedron.links[point.vertex]:
            x = polyhedron.charts[corner.triangle]
            apex = x[corner.corner]
            incoming = sum(edge_corners(corner.entry_edge)) - corner.corner
            outgoing = sum(edge_corners(corner.exit_edge)) - corner.corner
            start = space.tangent_toward(apex, x[incoming])
            sectors.append(
                Sector(
                    corner.triangle,
                    apex,
                    start,
                    space.inward_normal(apex, start, x[outgoing]),
                    float(polyhedron.corner_angles[corner.triangle, corner.corner]),
                    frozenset((corner.entry_edge, corner.exit_edge)),
                )
            )
    elif point.kind is AnchorKind.EDGE:
        (first, apex), (second, apex2) = anchor_hosts(polyhedron, point)
        x = polyhedron.charts[first]
        _, end = edge_corners(point.edge)
        ahead = space.tangent_toward(apex, x[end])
        sectors.append(
            Sector(first, apex, ahead, space.inward_normal(apex, ahead, x[(point.edge + 2) % 3]), math.pi,
                   frozenset((point.edge,)))
        )
        (_, edge2), same, _ = polyhedron.partner(point.triangle, point.edge)
        y = polyhedron.charts[second]
        start2, end2 = edge_corners(edge2)
        back = space.tangent_toward(apex2, y[start2] if same else y[end2])
        sectors.append(
            Sector(second, apex2, back, space.inward_normal(apex2, back, y[(edge2 + 2) % 3]), math.pi,
                   frozenset((edge2,)))
        )
    else:
        ((triangle, apex),) = anchor_hosts(polyhedron, point)
        x = polyhedron.charts[triangle]
        start = space.tangent_toward(apex, x[0])
        sectors.append(
            Sector(triangle, apex, start, space.inward_normal(apex, start, x[1]), 2.0 * math.pi, frozenset())
        )
    return DirectionFan(point, tuple(sectors))


def trace_geodesic(polyhedron: KPolyhedron, point: SurfacePoint, theta: float, length: float) -> SurfacePoint:
    """Follow the geodesic leaving `point` at polar angle theta for the given length.

    Crossing a glued edge keeps the angle between the geodesic and the edge.

    Args:
        polyhedron: The surface.
        point: Start point.
        theta: Polar angle in the direction fan at `point`.
        length: Length to travel.

    Returns:
        SurfacePoint: The end point, as a face anchor.

    Raises:
        KPolyError: 406 when the geodesic runs into a vertex, 303 for a negative length.
    """
    if length < 0.0:
        raise KPolyError(code=303, message=f'Geodesic length {length} must be non-negative')
    if length == 0.0:
        return point
    sector, phi = direction_fan(polyhedron, point).locate(theta)
    direction = math.cos(phi) * sector.start + math.sin(phi) * sector.normal
    return _trace(polyhedron, sector.triangle, sector.apex, direction, length * polyhedron.scale, sector.through)


def _trace(
    polyhedron: KPolyhedron,
    triangle: int,
    position: np.ndarray,
    direction: np.ndarray,
    remaining: float,
    through: frozenset[int],
) -> SurfacePoint:
    space = polyhedron.space
    tol = get_tolerances().edge_match

    for _ in range(MAX_TRACE_STEPS):
        x = polyhedron.charts[triangle]
        exit_time, exit_edge = math.inf, -1
        for e in range(3):
            if e in through:
                continue
            start, end = edge_corners(e)
            crossing = space.ray_exit(position, direction, x[start], x[end])
            if crossing < exit_time:
                exit_time, exit_edge = crossing, e

        if remaining <= exit_time:
            final = space.exp(position, direction, remaining)
            return SurfacePoint.in_face(triangle, unit_to_chart(polyhedron.kappa, final))

        hit = space.exp(position, direction, exit_time)
        heading = space.velocity(position, direction, exit_time)
        start, end = edge_corners(exit_edge)
        param = space.distance(x[start], hit) / space.distance(x[start], x[end])
        if param < tol or param > 1.0 - tol:
            raise KPolyError(
                code=406,
                message=f'Geodesic reaches a corner of triangle {triangle}',
                debug_messages=[f'edge={exit_edge}, param={param!r}'],
            )

        (next_triangle, next_edge), same, _ = polyhedron.partner(triangle, exit_edge)
        y = polyhedron.charts[next_triangle]
        start2, end2 = edge_corners(next_edge)
        entry = space.geodesic_point(y[start2], y[end2], param if same else 1.0 - param)
        along = space.tangent_toward(hit, x[end])
        along2 = space.tangent_toward(entry, y[end2] if same else y[start2])
        cos_psi = min(1.0, max(-1.0, space.inner(heading, along)))
        sin_psi = math.sqrt(max(0.0, 1.0 - cos_psi * cos_psi))
        normal2 = space.inward_normal(entry, along2, y[(next_edge + 2) % 3])

        direction = cos_psi * along2 + sin_psi * normal2
        position = entry
        remaining -= exit_time
        triangle = next_triangle
        through = frozenset((next_edge,))

    raise KPolyError(code=400, message=f'Geodesic did not terminate after {MAX_TRACE_STEPS} edge crossings')

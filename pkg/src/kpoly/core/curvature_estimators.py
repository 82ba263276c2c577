"""Curvature at a point estimated from the angle excess of small geodesic triangles.

The ball of radius `radius` around a point x of a kappa-polyhedron is a kappa-cone
whose total angle is the angle at x. Sample triangles live inside that ball and
are measured in its development: sides by the cone law of cosines, angles as
comparison angles at two probe distances with one Richardson step.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..spaces import ModelSpace
from ..utils.constants import MAX_CANDIDATE_FACTOR, PROBE_FRACTIONS, SAMPLE_RADIUS_FRACTIONS
from ..utils.error_handler import KPolyError
from ..utils.models import CurvatureRow
from .geodesics import DirectionFan, direction_fan, trace_geodesic
from .kpolyhedron import KPolyhedron, SurfacePoint, edge_corners
from .model_geometry import ModelTriangle, angle_from_sides, excess_e0, sigma0, triangle_area

logger = logging.getLogger(__name__)

Polar = tuple[float, float]


@dataclass(frozen=True)
class LocalDevelopment:
    """Polar chart (r, theta) of the cone ball around a surface point.

    Attributes:
        point: The centre.
        fan: Directions at the centre; theta is measured from its first sector.
        total_angle: Total angle at the centre.
        radius: Radius below which the ball is an exact cone.
        kappa: Curvature of the surface.
        scale: Factor to the unit-curvature model.
        space: The unit-curvature model adapter.
    """

    point: SurfacePoint
    fan: DirectionFan
    total_angle: float
    radius: float
    kappa: float
    scale: float
    space: ModelSpace

    def gap(self, theta1: float, theta2: float) -> float:
        """Signed angle from theta1 to theta2 along the shorter way round the cone."""
        g = (theta2 - theta1) % self.total_angle
        return g if g <= self.total_angle - g else g - self.total_angle

    def _wedge(self, r: float, angle: float) -> np.ndarray:
        direction = np.array([math.cos(angle), math.sin(angle), 0.0])
        return self.space.exp(self.space.origin(), direction, r * self.scale)

    def distance(self, a: Polar, b: Polar) -> float:
        g = abs(self.gap(a[1], b[1]))
        if g >= math.pi:
            return a[0] + b[0]
        return self.space.distance(self._wedge(a[0], 0.0), self._wedge(b[0], g)) / self.scale

    def toward(self, a: Polar, b: Polar, t: float) -> Polar:
        """Polar position of the point at distance t from a on the segment to b."""
        g = self.gap(a[1], b[1])
        if abs(g) >= math.pi:
            return a[0] - t, a[1]
        start, end = self._wedge(a[0], 0.0), self._wedge(b[0], g)
        d = self.space.distance(start, end)
        p = self.space.geodesic_point(start, end, t * self.scale / d)
        r = self.space.distance(self.space.origin(), p) / self.scale
        return r, (a[1] + math.atan2(p[1], p[0])) % self.total_angle

    def contains_centre(self, thetas: Sequence[float]) -> bool:
        """True when the triangle with these polar angles winds once around the centre.

        Each pair of vertices must also be joined the short way between them, so no
        gap may reach half the total angle.
        """
        ordered = sorted(theta % self.total_angle for theta in thetas)
        gaps = [b - a for a, b in zip(ordered, ordered[1:])] + [self.total_angle - ordered[-1] + ordered[0]]
        return max(gaps) < min(math.pi, self.total_angle / 2.0)


def _line_distance(space: ModelSpace, apex: np.ndarray, u: np.ndarray, w: np.ndarray) -> float:
    """Distance in the unit model from apex to the line through u and w."""
    du = space.distance(u, apex)
    if du == 0.0:
        return 0.0
    cos_angle = space.inner(space.tangent_toward(u, apex), space.tangent_toward(u, w))
    return space.altitude(du, math.acos(min(1.0, max(-1.0, cos_angle))))


def local_development(polyhedron: KPolyhedron, point: SurfacePoint) -> LocalDevelopment:
    """Cone chart around a point, valid up to its distance from the edges not through it."""
    fan = direction_fan(polyhedron, point)
    space = polyhedron.space
    radius = math.inf
    for sector in fan.sectors:
        x = polyhedron.charts[sector.triangle]
        for e in range(3):
            if e in sector.through:
                continue
            start, end = edge_corners(e)
            radius = min(radius, _line_distance(space, sector.apex, x[start], x[end]))
    return LocalDevelopment(
        point=point,
        fan=fan,
        total_angle=fan.total_angle,
        radius=radius / polyhedron.scale,
        kappa=polyhedron.kappa,
        scale=polyhedron.scale,
        space=space,
    )


@dataclass(frozen=True)
class TriangleSample:
    """A small geodesic triangle near the sampled point.

    `sides[i]` is opposite vertex i and `angles[i]` is the angle at vertex i.
    """

    vertices: tuple[SurfacePoint, SurfacePoint, SurfacePoint]
    polar: tuple[Polar, Polar, Polar]
    sides: tuple[float, float, float]
    angles: tuple[float, float, float]
    contains_x: bool

    @property
    def min_angle(self) -> float:
        return min(self.angles)

    @property
    def diam(self) -> float:
        return max(self.sides)


def excess_ratio(sample: TriangleSample) -> float:
    """Angle excess over the Euclidean area of the side lengths.

    Raises:
        KPolyError: 703 when the sides span no area.
    """
    try:
        area = sigma0(*sample.sides)
    except KPolyError as e:
        raise KPolyError(code=703, message=f'Sample with sides {sample.sides} is degenerate', original_error=e)
    return excess_e0(*sample.angles) / area


def model_ratio(kappa: float, a: float, b: float, c: float, true_area: bool = True) -> float:
    """Excess ratio of a model triangle, over its true area or over the Euclidean one."""
    triangle = ModelTriangle(kappa, a, b, c)
    area = triangle_area(triangle) if true_area else sigma0(a, b, c)
    return excess_e0(*triangle.angles) / area


def _probe_angle(chart: LocalDevelopment, apex: Polar, left: Polar, right: Polar, t: float) -> float:
    p = chart.toward(apex, left, t)
    q = chart.toward(apex, right, t)
    return angle_from_sides(chart.kappa, chart.distance(p, q), t, t)


def _vertex_angle(
    chart: LocalDevelopment, apex: Polar, left: Polar, right: Polar, delta: float, sides: Sequence[float]
) -> float:
    t = min(PROBE_FRACTIONS[0] * delta, min(sides) / 4.0)
    coarse = _probe_angle(chart, apex, left, right, t)
    fine = _probe_angle(chart, apex, left, right, t / 2.0)
    return 2.0 * fine - coarse


Measured = tuple[tuple[Polar, ...], tuple[float, ...], tuple[float, ...]]


def _candidate(chart: LocalDevelopment, delta: float, seed: int, index: int) -> Optional[Measured]:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))
    turn = chart.total_angle
    base = rng.uniform(0.0, turn)
    thetas = [(base + j * turn / 3.0 + rng.uniform(-turn / 12.0, turn / 12.0)) % turn for j in range(3)]
    low, high = SAMPLE_RADIUS_FRACTIONS
    radii = rng.uniform(low * delta, high * delta, 3)
    polar = tuple(zip(radii.tolist(), thetas))
    if not chart.contains_centre(thetas):
        return None
    try:
        sides = tuple(chart.distance(polar[(i + 1) % 3], polar[(i + 2) % 3]) for i in range(3))
        angles = tuple(
            _vertex_angle(
                chart, polar[i], polar[(i + 1) % 3], polar[(i + 2) % 3], delta, (sides[(i + 1) % 3], sides[(i + 2) % 3])
            )
            for i in range(3)
        )
        excess_e0(*angles)
    except (KPolyError, ValueError) as e:
        logger.debug(f'Candidate {index} rejected: {e}')
        return None
    return polar, sides, angles


def sample_triangles(
    polyhedron: KPolyhedron,
    point: SurfacePoint,
    delta: float,
    angle_floor: float,
    n: int,
    seed: int = 0,
    workers: int = 1,
) -> list[TriangleSample]:
    """Draw up to n triangles of diameter below delta around a point.

    Vertices sit at distance in [delta/4, delta/2] from the point in three spread
    directions. Candidates are kept when the point is inside and every angle is at
    least `angle_floor`. Candidate i uses its own random stream keyed by (seed, i),
    so results do not depend on `workers`.

    Raises:
        KPolyError: 702 when delta exceeds the exact-cone radius or a quarter of the
            shortest edge, 701 when no candidate passes the filters.
    """
    if n < 1 or workers < 1:
        raise KPolyError(code=303, message=f'Sample count {n} and worker count {workers} must be positive')
    if not 0.0 <= angle_floor < math.pi / 3.0:
        raise KPolyError(code=303, message=f'Angle floor {angle_floor} must lie in [0, pi/3)')
    chart = local_development(polyhedron, point)
    if not 0.0 < delta <= polyhedron.min_edge_length() / 4.0 or delta / 2.0 >= chart.radius:
        raise KPolyError(
            code=702,
            message=f'Scale delta={delta} is too large at {point}',
            detail=f'Use delta <= {min(polyhedron.min_edge_length() / 4.0, 2.0 * chart.radius):.6g}.',
        )

    accepted: list[Measured] = []
    budget = n * MAX_CANDIDATE_FACTOR
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, budget, n):
            batch = range(start, min(start + n, budget))
            for result in pool.map(lambda i: _candidate(chart, delta, seed, i), batch):
                if result is not None and min(result[2]) >= angle_floor and max(result[1]) < delta:
                    accepted.append(result)
            if len(accepted) >= n:
                break
    if not accepted:
        raise KPolyError(
            code=701,
            message=f'No triangle passed the filters after {budget} candidates',
            detail='Lower the angle floor or raise the sample count.',
        )
    logger.debug(f'delta={delta}: kept {min(len(accepted), n)} samples')

    samples = []
    for polar, sides, angles in accepted[:n]:
        vertices = tuple(trace_geodesic(polyhedron, point, theta, r) for r, theta in polar)
        samples.append(TriangleSample(vertices, polar, sides, angles, contains_x=True))
    return samples


def filter_by_angle(samples: Sequence[TriangleSample], angle_floor: float) -> list[TriangleSample]:
    """Samples whose smallest angle is at least `angle_floor`."""
    return [s for s in samples if s.min_angle >= angle_floor]


def estimate_curvature_bounds(
    polyhedron: KPolyhedron,
    point: SurfacePoint,
    deltas: Sequence[float],
    angle_floor: float,
    n: int,
    seed: int = 0,
    workers: int = 1,
) -> list[CurvatureRow]:
    """Smallest and largest excess ratio at each scale.

    Raises:
        KPolyError: 303 unless the scales strictly decrease, 803 if a row is out of order.
    """
    if not deltas or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise KPolyError(code=303, message=f'Scales {list(deltas)} must be non-empty and strictly decreasing')
    rows = []
    for delta in deltas:
        ratios = [excess_ratio(s) for s in sample_triangles(polyhedron, point, delta, angle_floor, n, seed, workers)]
        row = CurvatureRow(delta=delta, inf_ratio=min(ratios), sup_ratio=max(ratios), n_accepted=len(ratios))
        if row.inf_ratio > row.sup_ratio:
            raise KPolyError(code=803, message=f'inf ratio exceeds sup ratio at delta={delta}')
        logger.debug(f'delta={delta}: ratio in [{row.inf_ratio:.6g}, {row.sup_ratio:.6g}], {row.n_accepted} samples')
        rows.append(row)
    return rows

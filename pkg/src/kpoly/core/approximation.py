"""Polyhedral approximation of smooth target surfaces.

A target surface is wrapped in a `SurfaceOracle`: it triangulates itself at every
refinement level with side lengths measured on the surface, knows its own exact
distances, and can locate a point inside a triangulation. Replacing every triangle
by a flat (or kappa-) triangle with the same sides gives the approximating
polyhedra studied by the experiments below.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from tqdm import tqdm

from ..utils.constants import DEFAULT_STEINER_POINTS
from ..utils.error_handler import KPolyError
from ..utils.models import ConicalNetRow, ConvergenceRow, ReplacementRow, SemicontinuityRow
from .fixtures import face_sides, icosahedron_vertices, oriented_hull_faces, torus_grid
from .kpolyhedron import (
    GluingMap,
    KPolyhedron,
    SurfacePoint,
    build,
    check_alexandrov,
    glue_by_vertices,
    point_from_weights,
    subdivide,
    subdivided_corner,
)
from .metric_graph import pairwise_distances
from .model_geometry import angle_from_sides

logger = logging.getLogger(__name__)

MAX_SAMPLE_LEVEL = 8


@dataclass(frozen=True, eq=False)
class GeodesicTriangulation:
    """A triangulation of a target surface by geodesic triangles.

    Attributes:
        level: Refinement index.
        triangles: Side triples (a, b, c) measured on the target surface.
        gluing: Edge pairing of the triangles.
        max_diam: Largest triangle diameter.
        vertices: Vertex coordinates on the target (unit vectors or torus coordinates).
        faces: Vertex ids of corners A, B, C per triangle.
    """

    level: int
    triangles: tuple[tuple[float, float, float], ...]
    gluing: GluingMap
    max_diam: float
    vertices: np.ndarray
    faces: np.ndarray


def _sphere_arc(p: np.ndarray, q: np.ndarray) -> float:
    return math.atan2(float(np.linalg.norm(np.cross(p, q))), float(np.dot(p, q)))


@lru_cache(maxsize=None)
def _icosphere(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and faces of the icosahedral subdivision; older vertices keep their ids."""
    if level == 0:
        coords = icosahedron_vertices()
        coords = coords / np.linalg.norm(coords, axis=1)[:, None]
        return coords, oriented_hull_faces(coords)

    coords, faces = _icosphere(level - 1)
    points = list(coords)
    midpoint: dict[tuple[int, int], int] = {}

    def middle(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in midpoint:
            mid = points[i] + points[j]
            points.append(mid / np.linalg.norm(mid))
            midpoint[key] = len(points) - 1
        return midpoint[key]

    refined = []
    for i, j, k in faces:
        ij, jk, ki = middle(i, j), middle(j, k), middle(k, i)
        refined.extend([(i, ij, ki), (ij, j, jk), (ki, jk, k), (ij, jk, ki)])
    return np.array(points), np.array(refined, dtype=int)


def _spherical_triangulation(level: int, coords: np.ndarray, faces: np.ndarray) -> GeodesicTriangulation:
    sides = face_sides(coords, faces, _sphere_arc)
    return GeodesicTriangulation(
        level=level,
        triangles=tuple(tuple(s) for s in sides),
        gluing=glue_by_vertices(faces.tolist()),
        max_diam=max(max(s) for s in sides),
        vertices=coords,
        faces=faces,
    )


def sphere_triangulation(level: int) -> GeodesicTriangulation:
    """Icosahedral subdivision of the unit sphere with 20 * 4^level triangles."""
    if level < 0:
        raise KPolyError(code=303, message=f'Level {level} must be non-negative')
    coords, faces = _icosphere(level)
    return _spherical_triangulation(level, coords, faces)


def octant_triangulation() -> GeodesicTriangulation:
    """The unit sphere cut into its 8 coordinate octants."""
    coords = np.vstack([np.eye(3), -np.eye(3)])
    return _spherical_triangulation(0, coords, oriented_hull_faces(coords))


def _generation(i: int, j: int, level: int) -> int:
    """First level at which grid point (i, j) of a 2^level grid appears."""
    for g in range(level + 1):
        step = 2 ** (level - g)
        if i % step == 0 and j % step == 0:
            return g
    return level


def torus_triangulation(level: int) -> GeodesicTriangulation:
    """The flat unit square torus on a 2^level grid, two right isoceles triangles per cell."""
    if level < 0:
        raise KPolyError(code=303, message=f'Level {level} must be non-negative')
    cells = 2**level
    sides, gluing, corners = torus_grid(cells)
    points = [(i, j) for j in range(cells) for i in range(cells)]
    grid = sorted(points, key=lambda p: (_generation(*p, level), p[1], p[0]))
    ids = {point: index for index, point in enumerate(grid)}
    faces = np.array([[ids[(i % cells, j % cells)] for i, j in tri] for tri in corners], dtype=int)
    return GeodesicTriangulation(
        level=level,
        triangles=tuple(sides),
        gluing=gluing,
        max_diam=math.sqrt(2.0) / cells,
        vertices=np.array(grid, dtype=float) / cells,
        faces=faces,
    )


class SurfaceOracle(ABC):
    """A target surface with exact distances and a refinable triangulation."""

    name: str = ''
    kappa: float = 0.0

    @abstractmethod
    def triangulate(self, level: int) -> GeodesicTriangulation:
        """Geodesic triangulation at a refinement level."""

    @abstractmethod
    def distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Exact distance matrix between two stacks of surface points."""

    @abstractmethod
    def locate(self, triangulation: GeodesicTriangulation, point: np.ndarray) -> tuple[int, np.ndarray]:
        """Triangle containing a point and the point's weights over its corners."""

    def sample_points(self, k: int) -> np.ndarray:
        """The first k vertices of the coarsest triangulation that has at least k of them."""
        if k < 2:
            raise KPolyError(code=303, message=f'At least two sample points are needed, got {k}')
        for level in range(MAX_SAMPLE_LEVEL + 1):
            vertices = self.triangulate(level).vertices
            if len(vertices) >= k:
                return vertices[:k]
        raise KPolyError(code=303, message=f'{k} sample points exceed the finest supported level')


class RoundSphere(SurfaceOracle):
    """The unit round sphere."""

    name = 'sphere'
    kappa = 1.0

    def triangulate(self, level: int) -> GeodesicTriangulation:
        return sphere_triangulation(level)

    def distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        crosses = np.cross(xs[:, None, :], ys[None, :, :])
        return np.arctan2(np.linalg.norm(crosses, axis=-1), xs @ ys.T)

    def locate(self, triangulation: GeodesicTriangulation, point: np.ndarray) -> tuple[int, np.ndarray]:
        # central projection: the point is a non-negative combination of its triangle's corners
        corners = triangulation.vertices[triangulation.faces]
        systems = np.transpose(corners, (0, 2, 1))
        rhs = np.broadcast_to(point, (len(corners), 3))[..., None]
        weights = np.linalg.solve(systems, rhs)[..., 0]
        best = int(np.argmax(weights.min(axis=1)))
        return best, weights[best] / weights[best].sum()


class FlatTorus(SurfaceOracle):
    """The flat unit square torus."""

    name = 'torus'
    kappa = 0.0

    def triangulate(self, level: int) -> GeodesicTriangulation:
        return torus_triangulation(level)

    def distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        delta = np.abs(xs[:, None, :] - ys[None, :, :]) % 1.0
        delta = np.minimum(delta, 1.0 - delta)
        return np.sqrt((delta**2).sum(axis=-1))

    def locate(self, triangulation: GeodesicTriangulation, point: np.ndarray) -> tuple[int, np.ndarray]:
        cells = 2**triangulation.level
        x, y = (np.asarray(point, dtype=float) % 1.0) * cells
        i, j = min(int(x), cells - 1), min(int(y), cells - 1)
        fx, fy = x - i, y - j
        lower = 2 * (j * cells + i)
        if fy <= fx:
            return lower, np.array([1.0 - fx, fx - fy, fy])
        return lower + 1, np.array([1.0 - fy, fx, fy - fx])


ORACLES: dict[str, type[SurfaceOracle]] = {'sphere': RoundSphere, 'torus': FlatTorus}


def get_oracle(name: str) -> SurfaceOracle:
    try:
        return ORACLES[name]()
    except KeyError:
        raise KPolyError(
            code=104, message=f'Unknown target surface {name!r}', detail=f"Choose from {', '.join(ORACLES)}"
        )


def replace_euclidean(triangulation: GeodesicTriangulation) -> KPolyhedron:
    """Flat polyhedron with the same side lengths and gluing."""
    return build(0.0, triangulation.triangles, triangulation.gluing)


def replace_kappa(triangulation: GeodesicTriangulation, kappa: float) -> KPolyhedron:
    """kappa-polyhedron with the same side lengths and gluing."""
    return build(kappa, triangulation.triangles, triangulation.gluing)


def _matched_points(
    oracle: SurfaceOracle, triangulation: GeodesicTriangulation, polyhedron: KPolyhedron, coords: np.ndarray
) -> list[SurfacePoint]:
    """Points of the polyhedron at the same position inside corresponding triangles."""
    return [point_from_weights(polyhedron, *oracle.locate(triangulation, c)) for c in coords]


def _check_levels(levels: Sequence[int]) -> None:
    if len(levels) < 2:
        raise KPolyError(code=303, message='An experiment needs at least two levels')
    if any(level < 0 for level in levels):
        raise KPolyError(code=303, message=f'Levels {list(levels)} must be non-negative')


def _progress(items: Sequence, desc: str) -> tqdm:
    return tqdm(items, desc=desc, disable=logger.isEnabledFor(logging.DEBUG), leave=False)


def convergence_experiment(
    oracle: SurfaceOracle,
    levels: Sequence[int],
    k_sample: int,
    m: int = DEFAULT_STEINER_POINTS,
) -> list[ConvergenceRow]:
    """Compare the flat approximations of a target surface with the target itself.

    The target and each approximation are sampled at the same k points; half the
    distortion of that matched correspondence bounds their Gromov-Hausdorff
    distance from above.
    """
    _check_levels(levels)
    coords = oracle.sample_points(k_sample)
    target = oracle.distances(coords, coords)
    rows = []
    for level in _progress(levels, f'{oracle.name} convergence'):
        triangulation = oracle.triangulate(level)
        polyhedron = replace_euclidean(triangulation)
        points = _matched_points(oracle, triangulation, polyhedron, coords)
        approx = pairwise_distances(polyhedron, points, m)
        row = ConvergenceRow(
            level=level,
            delta=triangulation.max_diam,
            gh_upper=0.5 * float(np.max(np.abs(target - approx))),
            max_omega=max(abs(omega) for omega in polyhedron.omegas),
        )
        logger.debug(f'convergence {row}')
        rows.append(row)
    return rows


def replacement_experiment(
    oracle: SurfaceOracle,
    levels: Sequence[int],
    kappa: float,
    k_sample: int,
    m: int = DEFAULT_STEINER_POINTS,
) -> list[ReplacementRow]:
    """Distortion of the matched correspondence between the flat and the kappa replacement."""
    _check_levels(levels)
    coords = oracle.sample_points(k_sample)
    rows = []
    for level in _progress(levels, f'{oracle.name} replacement'):
        triangulation = oracle.triangulate(level)
        flat = replace_euclidean(triangulation)
        curved = replace_kappa(triangulation, kappa)
        d_flat = pairwise_distances(flat, _matched_points(oracle, triangulation, flat, coords), m)
        d_curved = pairwise_distances(curved, _matched_points(oracle, triangulation, curved, coords), m)
        rows.append(
            ReplacementRow(
                level=level, delta=triangulation.max_diam, distortion=float(np.max(np.abs(d_flat - d_curved)))
            )
        )
    return rows


def angle_comparison(triangulation: GeodesicTriangulation, kappa_low: float, kappa_high: float) -> float:
    """Largest amount by which a corner angle at kappa_low exceeds the same angle at kappa_high.

    Angles grow with curvature, so the result is 0 up to rounding.
    """
    if kappa_low > kappa_high:
        raise KPolyError(code=303, message=f'kappa_low={kappa_low} must not exceed kappa_high={kappa_high}')
    worst = 0.0
    for a, b, c in triangulation.triangles:
        for sides in ((a, b, c), (b, c, a), (c, a, b)):
            worst = max(worst, angle_from_sides(kappa_low, *sides) - angle_from_sides(kappa_high, *sides))
    return worst


def semicontinuity_experiment(polyhedron: KPolyhedron, vertex: int, levels: int) -> list[SemicontinuityRow]:
    """Track the curvature at a marked vertex through repeated midpoint subdivision.

    Args:
        polyhedron: Target polyhedron.
        vertex: The marked (usually conical) vertex.
        levels: Number of subdivision rounds after level 0.
    """
    if levels < 1:
        raise KPolyError(code=303, message='At least one refinement level is needed')
    polyhedron.check_vertex(vertex)
    limit = polyhedron.omegas[vertex]

    current, marked = polyhedron, vertex
    original = list(range(polyhedron.num_vertices))
    rows = []
    for level in _progress(range(levels + 1), 'subdivision'):
        kept = set(original)
        new = [v for v in range(current.num_vertices) if v not in kept]
        omega = current.omegas[marked]
        rows.append(
            SemicontinuityRow(
                level=level,
                omega=omega,
                omega_limit=limit,
                max_new_omega=max((abs(current.omegas[v]) for v in new), default=0.0),
                holds=omega <= limit + 1e-9,
            )
        )
        if level == levels:
            break
        corners = [subdivided_corner(current, v) for v in original]
        marked_corner = subdivided_corner(current, marked)
        current = subdivide(current)
        original = [current.vertex_of(*c) for c in corners]
        marked = current.vertex_of(*marked_corner)
    return rows


def conical_net_experiment(
    oracle: SurfaceOracle,
    levels: Sequence[int],
    kappa: float,
    scale: float,
) -> list[ConicalNetRow]:
    """Shrink the target by `scale` and rebuild it from kappa-triangles.

    The shrunk surface has curvature kappa_target / scale^2; when that exceeds
    kappa every corner angle drops and all vertices of the result are conical.
    """
    _check_levels(levels)
    if not 0.0 < scale:
        raise KPolyError(code=303, message=f'Scale {scale} must be positive')
    rows = []
    for level in _progress(levels, f'{oracle.name} conical net'):
        triangulation = oracle.triangulate(level)
        shrunk = [(a * scale, b * scale, c * scale) for a, b, c in triangulation.triangles]
        polyhedron = build(kappa, shrunk, triangulation.gluing)
        omegas = polyhedron.omegas
        rows.append(
            ConicalNetRow(
                level=level,
                delta=triangulation.max_diam * scale,
                kappa=kappa,
                min_omega=min(omegas),
                max_omega=max(omegas),
                conical_vertices=sum(1 for omega in omegas if omega > 0.0),
                num_vertices=polyhedron.num_vertices,
                alexandrov=check_alexandrov(polyhedron).passed,
            )
        )
    return rows

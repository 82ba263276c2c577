"""Ready-made polyhedra used by the CLI, the experiments and the tests."""

import math
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull

from ..utils.error_handler import KPolyError
from .kpolyhedron import GluingMap, KPolyhedron, build, from_faces

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def oriented_hull_faces(coords: np.ndarray) -> np.ndarray:
    """Faces of the convex hull of `coords`, each listed counter-clockwise seen from outside."""
    hull = ConvexHull(coords)
    centre = coords.mean(axis=0)
    faces = []
    for i, j, k in hull.simplices:
        normal = np.cross(coords[j] - coords[i], coords[k] - coords[i])
        faces.append((i, j, k) if np.dot(normal, coords[i] - centre) > 0 else (i, k, j))
    return np.array(faces, dtype=int)


def face_sides(coords: np.ndarray, faces: np.ndarray, metric: Callable[[np.ndarray, np.ndarray], float]) -> list:
    """Side triples (a, b, c) of every face under a point metric."""
    return [
        (metric(coords[j], coords[k]), metric(coords[k], coords[i]), metric(coords[i], coords[j])) for i, j, k in faces
    ]


def _euclidean(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.linalg.norm(p - q))


def _hull_polyhedron(coords: np.ndarray) -> KPolyhedron:
    faces = oriented_hull_faces(coords)
    return from_faces(0.0, faces, face_sides(coords, faces, _euclidean))


def icosahedron_vertices() -> np.ndarray:
    """The 12 vertices (0, +-1, +-phi) and their cyclic permutations."""
    base = [(0.0, s1, s2 * GOLDEN) for s1 in (-1.0, 1.0) for s2 in (-1.0, 1.0)]
    return np.array([p[shift:] + p[:shift] for shift in range(3) for p in base])


def tetrahedron(side: float = 1.0) -> KPolyhedron:
    """Regular flat tetrahedron; every vertex has omega = pi."""
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    return from_faces(0.0, faces, [(side, side, side)] * 4)


def cube(side: float = 1.0) -> KPolyhedron:
    """Surface of a cube, each square face split in two; every vertex has omega = pi/2."""
    coords = side * np.array([(x, y, z) for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)])
    return _hull_polyhedron(coords)


def icosahedron(side: float = 1.0) -> KPolyhedron:
    """Regular flat icosahedron; every vertex has omega = pi/3."""
    return _hull_polyhedron(icosahedron_vertices() * (side / 2.0))


def spherical_octahedron(kappa: float = 1.0) -> KPolyhedron:
    """The round sphere of curvature kappa cut into 8 octants; every vertex is flat."""
    if kappa <= 0.0:
        raise KPolyError(code=303, message=f'The octant decomposition needs kappa > 0, got {kappa}')
    coords = np.vstack([np.eye(3), -np.eye(3)])
    faces = oriented_hull_faces(coords)
    side = math.pi / (2.0 * math.sqrt(kappa))
    return from_faces(kappa, faces, [(side, side, side)] * len(faces))


def doubled_square(side: float = 1.0) -> KPolyhedron:
    """Two squares glued along their boundary; the four corners have omega = pi."""
    diagonal = side * math.sqrt(2.0)
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
    sides = [(side, diagonal, side), (side, side, diagonal), (diagonal, side, side), (side, side, diagonal)]
    return from_faces(0.0, faces, sides)


def heptagonal_bipyramid(kappa: float = 0.0, side: float = 1.0) -> KPolyhedron:
    """Seven equilateral triangles around each apex.

    For kappa = 0 both apexes carry a total angle of 7*pi/3 and violate the
    vertex condition.
    """
    faces = []
    for i in range(7):
        ring, following = 2 + i, 2 + (i + 1) % 7
        faces.append((0, ring, following))
        faces.append((1, following, ring))
    return from_faces(kappa, faces, [(side, side, side)] * len(faces))


def torus_grid(cells: int) -> tuple[list[tuple[float, float, float]], GluingMap, list[tuple[tuple[int, int], ...]]]:
    """Combinatorics of the unit square torus cut into cells x cells squares.

    Cell (i, j) holds triangle 2*(j*cells + i) with corners (i, j), (i+1, j), (i+1, j+1)
    and triangle 2*(j*cells + i) + 1 with corners (i, j), (i+1, j+1), (i, j+1).

    Returns:
        tuple: Side triples, the gluing, and the grid corners of every triangle.
    """
    if cells < 1:
        raise KPolyError(code=303, message=f'A torus grid needs at least one cell, got {cells}')
    h = 1.0 / cells
    diagonal = h * math.sqrt(2.0)

    def lower(i: int, j: int) -> int:
        return 2 * ((j % cells) * cells + (i % cells))

    sides, corners, pairs = [], [], []
    for j in range(cells):
        for i in range(cells):
            sides.append((h, diagonal, h))
            sides.append((h, h, diagonal))
            corners.append(((i, j), (i + 1, j), (i + 1, j + 1)))
            corners.append(((i, j), (i + 1, j + 1), (i, j + 1)))
            low = lower(i, j)
            pairs.append((low, 2, low + 1, 0))
            pairs.append((low, 0, lower(i, j - 1) + 1, 1))
            pairs.append((low, 1, lower(i + 1, j) + 1, 2))
    return sides, GluingMap.from_pairs(pairs), corners


def flat_torus(cells: int = 1) -> KPolyhedron:
    """The flat unit square torus; every vertex is flat."""
    sides, gluing, _ = torus_grid(cells)
    return build(0.0, sides, gluing)


FIXTURES: dict[str, Callable[[], KPolyhedron]] = {
    'tetrahedron': tetrahedron,
    'cube': cube,
    'icosahedron': icosahedron,
    'torus': flat_torus,
    'doubled-square': doubled_square,
    'octant-sphere': spherical_octahedron,
    'saddle': heptagonal_bipyramid,
}


def get_fixture(name: str) -> KPolyhedron:
    """Build a named fixture."""
    try:
        factory = FIXTURES[name]
    except KeyError:
        raise KPolyError(
            code=104,
            message=f'Unknown fixture {name!r}',
            detail=f"Available fixtures: {', '.join(sorted(FIXTURES))}",
        )
    return factory()

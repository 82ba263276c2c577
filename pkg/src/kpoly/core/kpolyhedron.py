"""Closed surfaces glued from triangles of a model surface M_kappa.

Conventions used throughout the package:

- Corner 0, 1, 2 of a triangle are A, B, C.
- Edge e runs from corner e to corner (e + 1) % 3, so edge 0 has length c,
  edge 1 has length a and edge 2 has length b.
- A gluing pair identifies two edge slots. By default the identification is
  orientation reversing: the start of the first slot meets the end of the second.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel
from scipy.cluster.hierarchy import DisjointSet

from ..spaces import ModelSpace
from ..utils.constants import TWO_PI
from ..utils.error_handler import KPolyError
from .config import get_tolerances
from .model_geometry import (
    ModelTriangle,
    as_curvature,
    chart_to_unit,
    triangle_area,
    unit_chart,
    unit_to_chart,
)

logger = logging.getLogger(__name__)

EdgeSlot = tuple[int, int]


def edge_corners(edge: int) -> tuple[int, int]:
    """Start and end corner of an edge."""
    return edge, (edge + 1) % 3


@dataclass(frozen=True)
class GluingMap:
    """Pairing of edge slots.

    Attributes:
        pairs: Pairs of (triangle, edge) slots.
        same_direction: Per pair, True when start meets start instead of end.
    """

    pairs: tuple[tuple[EdgeSlot, EdgeSlot], ...]
    same_direction: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        if not self.same_direction:
            object.__setattr__(self, 'same_direction', (False,) * len(self.pairs))
        if len(self.same_direction) != len(self.pairs):
            raise KPolyError(code=400, message='Gluing orientation flags do not match the number of pairs')

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[Union[int, bool]]]) -> 'GluingMap':
        """Build from flat records (t1, e1, t2, e2) or (t1, e1, t2, e2, same_direction)."""
        slots = []
        flags = []
        for record in pairs:
            t1, e1, t2, e2 = (int(x) for x in record[:4])
            slots.append(((t1, e1), (t2, e2)))
            flags.append(bool(record[4]) if len(record) > 4 else False)
        return cls(tuple(slots), tuple(flags))

    def __len__(self) -> int:
        return len(self.pairs)


class LinkCorner(NamedTuple):
    """One corner of a vertex link, with the edges it is entered and left through."""

    triangle: int
    corner: int
    entry_edge: int
    exit_edge: int


class AnchorKind(str, Enum):
    VERTEX = 'vertex'
    EDGE = 'edge'
    FACE = 'face'


@dataclass(frozen=True)
class SurfacePoint:
    """A point of a polyhedron, anchored to a vertex, an edge or a face.

    Edge parameters are measured from the start corner of the edge; face
    coordinates are chart coordinates of the host triangle as returned by
    `chart_embed`.
    """

    kind: AnchorKind
    vertex: Optional[int] = None
    triangle: Optional[int] = None
    edge: Optional[int] = None
    param: Optional[float] = None
    coords: Optional[tuple[float, ...]] = None

    @classmethod
    def at_vertex(cls, vertex: int) -> 'SurfacePoint':
        return cls(AnchorKind.VERTEX, vertex=vertex)

    @classmethod
    def on_edge(cls, triangle: int, edge: int, param: float) -> 'SurfacePoint':
        return cls(AnchorKind.EDGE, triangle=triangle, edge=edge, param=float(param))

    @classmethod
    def in_face(cls, triangle: int, coords: Sequence[float]) -> 'SurfacePoint':
        return cls(AnchorKind.FACE, triangle=triangle, coords=tuple(float(x) for x in coords))

    def __str__(self) -> str:
        if self.kind is AnchorKind.VERTEX:
            return f'vertex:{self.vertex}'
        if self.kind is AnchorKind.EDGE:
            return f'edge:{self.triangle}:{self.edge}:{self.param!r}'
        return f'face:{self.triangle}:' + ':'.join(repr(x) for x in self.coords or ())


class AlexandrovReport(BaseModel):
    """Outcome of the vertex condition check."""

    passed: bool
    offending: list[int]
    total_angles: list[float]


@dataclass(frozen=True, eq=False)
class KPolyhedron:
    """A closed, connected surface glued from triangles of M_kappa.

    Build instances with `build` or `from_faces`; the derived fields are filled in
    there and never change afterwards.
    """

    kappa: float
    triangles: tuple[ModelTriangle, ...]
    gluing: GluingMap
    corner_vertex: tuple[tuple[int, int, int], ...]
    links: tuple[tuple[LinkCorner, ...], ...]
    corner_angles: np.ndarray
    total_angles: tuple[float, ...]
    omegas: tuple[float, ...]
    euler_char: int
    total_area: float
    charts: np.ndarray = field(repr=False)
    partners: dict[EdgeSlot, tuple[EdgeSlot, bool, int]] = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.total_angles)

    @property
    def num_edges(self) -> int:
        return len(self.gluing)

    @property
    def num_faces(self) -> int:
        return len(self.triangles)

    @property
    def space(self) -> ModelSpace:
        return as_curvature(self.kappa).space

    @property
    def scale(self) -> float:
        return as_curvature(self.kappa).scale

    def vertex_of(self, triangle: int, corner: int) -> int:
        return self.corner_vertex[triangle][corner]

    def partner(self, triangle: int, edge: int) -> tuple[EdgeSlot, bool, int]:
        """Glued slot, orientation flag and pair index of an edge slot."""
        return self.partners[(triangle, edge)]

    def edge_length(self, triangle: int, edge: int) -> float:
        return self.triangles[triangle].edge_length(edge)

    def min_edge_length(self) -> float:
        return min(min(t.sides) for t in self.triangles)

    def vertex_position(self, vertex: int) -> tuple[int, np.ndarray]:
        """A host triangle of a vertex and the vertex position in its unit chart."""
        corner = self.links[vertex][0]
        return corner.triangle, self.charts[corner.triangle, corner.corner]

    def check_vertex(self, vertex: int) -> None:
        if not 0 <= vertex < self.num_vertices:
            raise KPolyError(code=404, message=f'Vertex {vertex} does not exist (V={self.num_vertices})')


def _partner_table(num_faces: int, gluing: GluingMap) -> dict[EdgeSlot, tuple[EdgeSlot, bool, int]]:
    partners: dict[EdgeSlot, tuple[EdgeSlot, bool, int]] = {}
    for index, ((s1, s2), same) in enumerate(zip(gluing.pairs, gluing.same_direction)):
        for slot in (s1, s2):
            t, e = slot
            if not (0 <= t < num_faces and 0 <= e < 3):
                raise KPolyError(code=400, message=f'Gluing pair {index} references missing slot {slot}')
        if s1 == s2:
            raise KPolyError(code=403, message=f'Slot {s1} is glued to itself')
        for slot, other in ((s1, s2), (s2, s1)):
            if slot in partners:
                raise KPolyError(code=403, message=f'Slot {slot} appears in more than one gluing pair')
            partners[slot] = (other, same, index)

    missing = [(t, e) for t in range(num_faces) for e in range(3) if (t, e) not in partners]
    if missing:
        raise KPolyError(
            code=401,
            message=f'{len(missing)} edge slot(s) are not glued',
            debug_messages=[f'open slots: {missing[:10]}'],
        )
    return partners


def _matching_corner(corner: int, edge: int, partner: EdgeSlot, same: bool) -> int:
    """Corner of the partner triangle identified with `corner` across `edge`."""
    at_start = corner == edge
    _, partner_edge = partner
    start, end = edge_corners(partner_edge)
    if same:
        return start if at_start else end
    return end if at_start else start


def _other_edge(corner: int, edge: int) -> int:
    """The second edge of a triangle that contains `corner`."""
    return (corner + 2) % 3 if edge == corner else corner


def build(kappa: float, triangles: Sequence[Union[ModelTriangle, Sequence[float]]], gluing: GluingMap) -> KPolyhedron:
    """Glue model triangles into a closed polyhedral surface.

    Args:
        kappa: Curvature of every triangle.
        triangles: Model triangles, or (a, b, c) side triples.
        gluing: Edge slot pairing.

    Returns:
        KPolyhedron: The surface with vertex classes, links, angles and curvatures.

    Raises:
        KPolyError: 401 for an open edge, 402 when glued lengths differ, 403 for
            reused slots or a vertex whose link is not a single cycle, 301/302/304 for
            invalid triangles.
    """
    curvature = as_curvature(kappa)
    tolerances = get_tolerances()
    tris = tuple(
        t if isinstance(t, ModelTriangle) and t.kappa == curvature.kappa else ModelTriangle(curvature.kappa, *_sides(t))
        for t in triangles
    )
    if not tris:
        raise KPolyError(code=400, message='A polyhedron needs at least one triangle')

    partners = _partner_table(len(tris), gluing)

    for index, ((t1, e1), (t2, e2)) in enumerate(gluing.pairs):
        l1, l2 = tris[t1].edge_length(e1), tris[t2].edge_length(e2)
        if abs(l1 - l2) > tolerances.edge_match * max(l1, l2):
            raise KPolyError(
                code=402,
                message=f'Gluing pair {index} joins edges of length {l1!r} and {l2!r}',
                where=f'({t1},{e1})-({t2},{e2})',
            )

    corners = DisjointSet((t, k) for t in range(len(tris)) for k in range(3))
    for (t, e), ((t2, e2), same, _) in partners.items():
        for k in edge_corners(e):
            corners.merge((t, k), (t2, _matching_corner(k, e, (t2, e2), same)))

    corner_vertex = [[-1, -1, -1] for _ in tris]
    links: list[tuple[LinkCorner, ...]] = []
    for t in range(len(tris)):
        for k in range(3):
            if corner_vertex[t][k] >= 0:
                continue
            vertex = len(links)
            cycle = _link_cycle(partners, t, k)
            members = corners.subset((t, k))
            if len(cycle) != len(members):
                raise KPolyError(
                    code=403,
                    message=f'Vertex {vertex} has a link made of several cycles',
                    debug_messages=[f'cycle covers {len(cycle)} of {len(members)} corners'],
                )
            for link_corner in cycle:
                corner_vertex[link_corner.triangle][link_corner.corner] = vertex
            links.append(tuple(cycle))

    corner_angles = np.array([t.angles for t in tris])
    total_angles = tuple(
        float(math.fsum(corner_angles[c.triangle, c.corner] for c in cycle)) for cycle in links
    )
    omegas = tuple(TWO_PI - total for total in total_angles)
    euler_char = len(links) - len(gluing) + len(tris)
    total_area = math.fsum(triangle_area(t) for t in tris)
    charts = np.array([unit_chart(t) for t in tris])

    logger.debug(f'Built polyhedron: kappa={curvature.kappa}, V={len(links)}, E={len(gluing)}, F={len(tris)}')
    return KPolyhedron(
        kappa=curvature.kappa,
        triangles=tris,
        gluing=gluing,
        corner_vertex=tuple(tuple(row) for row in corner_vertex),
        links=tuple(links),
        corner_angles=corner_angles,
        total_angles=total_angles,
        omegas=omegas,
        euler_char=euler_char,
        total_area=total_area,
        charts=charts,
        partners=partners,
    )


def _sides(triangle: Union[ModelTriangle, Sequence[float]]) -> tuple[float, float, float]:
    if isinstance(triangle, ModelTriangle):
        return triangle.sides
    a, b, c = (float(x) for x in triangle)
    return a, b, c


def _link_cycle(partners: dict, triangle: int, corner: int) -> list[LinkCorner]:
    """Walk around a vertex starting at one corner, leaving each corner through its outgoing edge."""
    cycle = []
    t, k = triangle, corner
    entry, exit_edge = (corner + 2) % 3, corner
    for _ in range(len(partners) + 1):
        cycle.append(LinkCorner(t, k, entry, exit_edge))
        (t_next, e_next), same, _ = partners[(t, exit_edge)]
        k = _matching_corner(k, exit_edge, (t_next, e_next), same)
        t, entry = t_next, e_next
        exit_edge = _other_edge(k, entry)
        if (t, k) == (triangle, corner):
            return cycle
    raise KPolyError(code=403, message=f'Link of corner ({triangle}, {corner}) does not close')


def glue_by_vertices(faces: Sequence[Sequence[int]]) -> GluingMap:
    """Pair the edges of faces given as vertex-id triples by their vertex pair.

    The identification is orientation reversing when the two faces traverse the
    edge in opposite directions.

    Raises:
        KPolyError: 401 when an edge belongs to one face only, 403 when it belongs to more than two.
    """
    slots: dict[frozenset, list[tuple[EdgeSlot, tuple[int, int]]]] = {}
    for t, face in enumerate(faces):
        for e in range(3):
            start, end = face[e], face[(e + 1) % 3]
            slots.setdefault(frozenset((start, end)), []).append(((t, e), (start, end)))

    pairs = []
    for key, members in slots.items():
        if len(members) != 2:
            code = 401 if len(members) == 1 else 403
            raise KPolyError(code=code, message=f'Edge {sorted(key)} is shared by {len(members)} face(s)')
        (s1, d1), (s2, d2) = members
        pairs.append((*s1, *s2, d1 == d2))
    return GluingMap.from_pairs(pairs)


def from_faces(
    kappa: float,
    faces: Sequence[Sequence[int]],
    sides: Sequence[Sequence[float]],
) -> KPolyhedron:
    """Build a polyhedron from faces listed as vertex-id triples.

    Args:
        kappa: Curvature of every triangle.
        faces: Vertex ids (i, j, k) of corners A, B, C per face.
        sides: Side triples (a, b, c) per face.
    """
    return build(kappa, sides, glue_by_vertices(faces))


def vertex_of(polyhedron: KPolyhedron, triangle: int, corner: int) -> int:
    """Vertex class of a triangle corner."""
    if not (0 <= triangle < polyhedron.num_faces and 0 <= corner < 3):
        raise KPolyError(code=405, message=f'Corner ({triangle}, {corner}) does not exist')
    return polyhedron.vertex_of(triangle, corner)


def corner_angles(polyhedron: KPolyhedron) -> np.ndarray:
    """Angles at corners A, B, C of every triangle, one row per triangle."""
    return polyhedron.corner_angles.copy()


def link_cycle(polyhedron: KPolyhedron, vertex: int) -> tuple[LinkCorner, ...]:
    """Corners around a vertex in cyclic order."""
    polyhedron.check_vertex(vertex)
    return polyhedron.links[vertex]


def singular_curvature(polyhedron: KPolyhedron, vertex: int) -> float:
    """omega(v) = 2*pi - total angle at v."""
    polyhedron.check_vertex(vertex)
    return polyhedron.omegas[vertex]


def check_alexandrov(polyhedron: KPolyhedron) -> AlexandrovReport:
    """Check that no vertex has total angle above 2*pi (up to the configured slack)."""
    limit = TWO_PI + get_tolerances().alexandrov_slack
    offending = [v for v, total in enumerate(polyhedron.total_angles) if total > limit]
    if offending:
        logger.debug(f'Vertices violating the angle condition: {offending}')
    return AlexandrovReport(
        passed=not offending,
        offending=offending,
        total_angles=list(polyhedron.total_angles),
    )


def gauss_bonnet_residual(polyhedron: KPolyhedron) -> float:
    """sum(omega) + kappa * area - 2*pi*chi; vanishes for every kappa-polyhedron."""
    return math.fsum(polyhedron.omegas) + polyhedron.kappa * polyhedron.total_area - TWO_PI * polyhedron.euler_char


def conical_points(polyhedron: KPolyhedron, threshold: float = 0.0) -> list[tuple[int, float]]:
    """Vertices with omega above `threshold`, largest curvature first."""
    if threshold < 0.0:
        raise KPolyError(code=303, message=f'Threshold {threshold} must be non-negative')
    points = [(v, omega) for v, omega in enumerate(polyhedron.omegas) if omega > threshold]
    return sorted(points, key=lambda item: (-item[1], item[0]))


def rescale(polyhedron: KPolyhedron, s: float) -> KPolyhedron:
    """Multiply every length by s; the result is a (kappa / s^2)-polyhedron with the same angles."""
    if not (math.isfinite(s) and s > 0.0):
        raise KPolyError(code=303, message=f'Scale factor {s} must be positive')
    kappa = polyhedron.kappa / (s * s)
    return build(kappa, [t.scaled(s, kappa) for t in polyhedron.triangles], polyhedron.gluing)


def subdivide(polyhedron: KPolyhedron) -> KPolyhedron:
    """Split every triangle into four along the midpoints of its sides.

    Child 4t + k for k < 3 keeps corner k of triangle t; child 4t + 3 is the middle
    triangle. Old vertex classes keep their corners, so curvature at old vertices
    is unchanged and the new vertices are flat.
    """
    space = polyhedron.space
    scale = polyhedron.scale
    kappa = polyhedron.kappa
    children: list[tuple[float, float, float]] = []
    for t in range(polyhedron.num_faces):
        x = polyhedron.charts[t]
        m = [space.geodesic_point(x[e], x[(e + 1) % 3], 0.5) for e in range(3)]
        for corners in ((x[0], m[0], m[2]), (m[0], x[1], m[1]), (m[2], m[1], x[2]), (m[0], m[1], m[2])):
            p, q, r = corners
            children.append(
                (space.distance(q, r) / scale, space.distance(r, p) / scale, space.distance(p, q) / scale)
            )

    # (first half, second half) of each parent edge as (child, edge)
    halves = {0: ((0, 0), (1, 0)), 1: ((1, 1), (2, 1)), 2: ((2, 2), (0, 2))}
    pairs = []
    for t in range(polyhedron.num_faces):
        base = 4 * t
        pairs.extend([(base + 3, 0, base + 1, 2), (base + 3, 1, base + 2, 0), (base + 3, 2, base + 0, 1)])
    for ((t1, e1), (t2, e2)), same in zip(polyhedron.gluing.pairs, polyhedron.gluing.same_direction):
        first1, second1 = halves[e1]
        first2, second2 = halves[e2]
        matches = ((first1, first2), (second1, second2)) if same else ((first1, second2), (second1, first2))
        for (c1, f1), (c2, f2) in matches:
            pairs.append((4 * t1 + c1, f1, 4 * t2 + c2, f2, same))
    return build(kappa, children, GluingMap.from_pairs(pairs))


def subdivided_corner(polyhedron: KPolyhedron, vertex: int) -> tuple[int, int]:
    """A (triangle, corner) of `subdivide(polyhedron)` that lies on `vertex`."""
    polyhedron.check_vertex(vertex)
    corner = polyhedron.links[vertex][0]
    return 4 * corner.triangle + corner.corner, corner.corner


def validate_anchor(polyhedron: KPolyhedron, point: SurfacePoint) -> None:
    """Check that an anchor refers to an existing vertex, edge or face point.

    Raises:
        KPolyError: 405 for out-of-range ids, parameters or coordinates.
    """
    if point.kind is AnchorKind.VERTEX:
        if point.vertex is None or not 0 <= point.vertex < polyhedron.num_vertices:
            raise KPolyError(code=405, message=f'{point}: no such vertex')
        return
    if point.triangle is None or not 0 <= point.triangle < polyhedron.num_faces:
        raise KPolyError(code=405, message=f'{point}: no such triangle')
    if point.kind is AnchorKind.EDGE:
        if point.edge not in (0, 1, 2) or point.param is None or not 0.0 < point.param < 1.0:
            raise KPolyError(code=405, message=f'{point}: edge anchors need edge in 0..2 and param in (0, 1)')
        return
    if point.coords is None:
        raise KPolyError(code=405, message=f'{point}: face anchors need chart coordinates')
    expected = 2 if as_curvature(polyhedron.kappa).sign == 0 else 3
    if len(point.coords) != expected:
        raise KPolyError(code=405, message=f'{point}: expected {expected} chart coordinates')
    x = polyhedron.charts[point.triangle]
    p = chart_to_unit(polyhedron.kappa, point.coords)
    space = polyhedron.space
    tol = get_tolerances().absolute
    for e in range(3):
        start, end = edge_corners(e)
        orientation = space.side(x[start], x[end], x[(e + 2) % 3])
        if space.side(x[start], x[end], p) * math.copysign(1.0, orientation) < -tol:
            raise KPolyError(code=405, message=f'{point}: coordinates lie outside triangle {point.triangle}')


def anchor_hosts(polyhedron: KPolyhedron, point: SurfacePoint) -> list[tuple[int, np.ndarray]]:
    """Triangles containing a non-vertex anchor, with its unit-chart position in each."""
    space = polyhedron.space
    if point.kind is AnchorKind.FACE:
        return [(point.triangle, chart_to_unit(polyhedron.kappa, point.coords))]
    if point.kind is AnchorKind.EDGE:
        hosts = []
        t, e, u = point.triangle, point.edge, point.param
        x = polyhedron.charts[t]
        start, end = edge_corners(e)
        hosts.append((t, space.geodesic_point(x[start], x[end], u)))
        (t2, e2), same, _ = polyhedron.partner(t, e)
        y = polyhedron.charts[t2]
        start2, end2 = edge_corners(e2)
        hosts.append((t2, space.geodesic_point(y[start2], y[end2], u if same else 1.0 - u)))
        return hosts
    raise KPolyError(code=405, message=f'{point}: vertex anchors have no single host position')


def point_from_weights(polyhedron: KPolyhedron, triangle: int, weights: Sequence[float]) -> SurfacePoint:
    """Anchor for the point with barycentric-style weights over the corners of a triangle.

    The weights combine the unit-chart corner vectors, which are then projected
    back onto the model surface. Weights that vanish (up to the absolute tolerance)
    snap the point onto the corresponding edge or vertex.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (3,) or np.any(w < -get_tolerances().absolute) or w.sum() <= 0.0:
        raise KPolyError(code=405, message=f'Weights {tuple(weights)} do not describe a point of the triangle')
    w = np.clip(w, 0.0, None) / w.sum()
    tol = get_tolerances().absolute
    live = [k for k in range(3) if w[k] > tol]
    if len(live) == 1:
        return SurfacePoint.at_vertex(polyhedron.vertex_of(triangle, live[0]))
    x = polyhedron.charts[triangle]
    if len(live) == 2:
        i, j = live
        edge = i if (i + 1) % 3 == j else j
        start, end = edge_corners(edge)
        point = polyhedron.space.project(w[start] * x[start] + w[end] * x[end])
        # fraction along the edge measured by arc length
        d_start = polyhedron.space.distance(x[start], point)
        param = d_start / polyhedron.space.distance(x[start], x[end])
        return SurfacePoint.on_edge(triangle, edge, param)
    point = polyhedron.space.project(w @ x)
    return SurfacePoint.in_face(triangle, unit_to_chart(polyhedron.kappa, point))

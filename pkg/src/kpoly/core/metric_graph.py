"""Graph approximation of the intrinsic metric of a polyhedron.

Nodes are the vertex classes followed by m Steiner points per glued edge; each
triangle contributes an arc between every two of its boundary nodes, weighted by
their distance in the triangle's chart. Shortest paths come from
`scipy.sparse.csgraph.dijkstra`.

Refining from m to m' only adds nodes when m + 1 divides m' + 1, and only then
are distances guaranteed not to grow.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..utils.constants import DEFAULT_STEINER_POINTS
from ..utils.error_handler import KPolyError
from .kpolyhedron import AnchorKind, KPolyhedron, SurfacePoint, anchor_hosts, edge_corners, validate_anchor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MetricGraph:
    """Weighted graph over vertex classes and Steiner points.

    Attributes:
        polyhedron: The surface the graph approximates.
        steiner_points: Number of interior points per edge.
        matrix: Upper-triangular sparse weights, read as an undirected graph.
        boundary: Per triangle, the node ids on its boundary and their unit-chart positions.
    """

    polyhedron: KPolyhedron
    steiner_points: int
    matrix: csr_matrix
    boundary: tuple[tuple[np.ndarray, np.ndarray], ...]

    @property
    def num_nodes(self) -> int:
        return self.matrix.shape[0]

    def node_point(self, node: int) -> SurfacePoint:
        """Surface point carried by a node."""
        vertices = self.polyhedron.num_vertices
        if node < vertices:
            return SurfacePoint.at_vertex(node)
        pair, j = divmod(node - vertices, self.steiner_points)
        triangle, edge = self.polyhedron.gluing.pairs[pair][0]
        return SurfacePoint.on_edge(triangle, edge, (j + 1) / (self.steiner_points + 1))


def build_metric_graph(polyhedron: KPolyhedron, m: int = DEFAULT_STEINER_POINTS) -> MetricGraph:
    """Build the metric graph with m Steiner points on every edge.

    Args:
        polyhedron: The surface.
        m: Interior points per edge, evenly spaced.

    Returns:
        MetricGraph: The graph; self-loops are dropped and parallel arcs keep the shorter weight.
    """
    if m < 0:
        raise KPolyError(code=303, message=f'Steiner point count {m} must be non-negative')
    space = polyhedron.space
    scale = polyhedron.scale
    vertices = polyhedron.num_vertices
    num_nodes = vertices + m * polyhedron.num_edges
    params = np.arange(1, m + 1) / (m + 1)

    rows, cols, weights = [], [], []
    boundary = []
    for t in range(polyhedron.num_faces):
        x = polyhedron.charts[t]
        ids = [polyhedron.vertex_of(t, k) for k in range(3)]
        positions = [x[k] for k in range(3)]
        for e in range(3):
            _, same, pair = polyhedron.partner(t, e)
            leading = polyhedron.gluing.pairs[pair][0] == (t, e)
            start, end = edge_corners(e)
            for j, u in enumerate(params):
                ids.append(vertices + pair * m + j)
                positions.append(space.geodesic_point(x[start], x[end], u if leading or same else 1.0 - u))

        node_ids = np.array(ids)
        points = np.array(positions)
        boundary.append((node_ids, points))
        dist = space.pairwise_distances(points, points) / scale
        i, j = np.triu_indices(len(node_ids), k=1)
        keep = node_ids[i] != node_ids[j]
        a, b = node_ids[i[keep]], node_ids[j[keep]]
        rows.append(np.minimum(a, b))
        cols.append(np.maximum(a, b))
        weights.append(dist[i[keep], j[keep]])

    r, c, w = np.concatenate(rows), np.concatenate(cols), np.concatenate(weights)
    order = np.lexsort((w, c, r))
    r, c, w = r[order], c[order], w[order]
    first = np.ones(len(r), dtype=bool)
    first[1:] = (r[1:] != r[:-1]) | (c[1:] != c[:-1])
    matrix = csr_matrix((w[first], (r[first], c[first])), shape=(num_nodes, num_nodes))

    logger.debug(f'Metric graph: {num_nodes} nodes, {int(first.sum())} arcs (m={m})')
    return MetricGraph(polyhedron, m, matrix, tuple(boundary))


def _entries(graph: MetricGraph, point: SurfacePoint) -> dict[int, float]:
    """Graph nodes reachable from a point inside one of its host triangles, with their distances."""
    if point.kind is AnchorKind.VERTEX:
        return {point.vertex: 0.0}
    polyhedron = graph.polyhedron
    entries: dict[int, float] = {}
    for triangle, position in anchor_hosts(polyhedron, point):
        node_ids, points = graph.boundary[triangle]
        dist = polyhedron.space.pairwise_distances(position[None, :], points)[0] / polyhedron.scale
        for node, d in zip(node_ids.tolist(), dist.tolist()):
            if d < entries.get(node, np.inf):
                entries[node] = d
    return entries


def _direct(polyhedron: KPolyhedron, x: SurfacePoint, y: SurfacePoint) -> float:
    """Straight-segment distance when two non-vertex points share a host triangle."""
    if AnchorKind.VERTEX in (x.kind, y.kind):
        return np.inf
    best = np.inf
    for tx, px in anchor_hosts(polyhedron, x):
        for ty, py in anchor_hosts(polyhedron, y):
            if tx == ty:
                best = min(best, polyhedron.space.distance(px, py) / polyhedron.scale)
    return best


def pairwise_distances(
    polyhedron: KPolyhedron,
    points: Sequence[SurfacePoint],
    m: int = DEFAULT_STEINER_POINTS,
    graph: Optional[MetricGraph] = None,
) -> np.ndarray:
    """Graph distances between every two of the given points.

    Args:
        polyhedron: The surface.
        points: Anchored points.
        m: Steiner points per edge, used when no graph is passed.
        graph: A prebuilt graph for `polyhedron`.

    Returns:
        np.ndarray: Symmetric matrix with a zero diagonal.
    """
    for point in points:
        validate_anchor(polyhedron, point)
    graph = graph or build_metric_graph(polyhedron, m)
    entries = [_entries(graph, p) for p in points]
    sources = sorted({node for e in entries for node in e})
    row_of = {node: i for i, node in enumerate(sources)}
    table = dijkstra(graph.matrix, directed=False, indices=sources)

    size = len(points)
    result = np.zeros((size, size))
    for i in range(size):
        src_nodes = np.array([row_of[n] for n in entries[i]])
        src_weights = np.array(list(entries[i].values()))
        for j in range(i + 1, size):
            if points[i] == points[j]:
                continue
            dst_nodes = np.array(list(entries[j]))
            dst_weights = np.array(list(entries[j].values()))
            via = src_weights[:, None] + table[np.ix_(src_nodes, dst_nodes)] + dst_weights[None, :]
            result[i, j] = result[j, i] = min(float(via.min()), _direct(polyhedron, points[i], points[j]))
    return result


def distance(
    polyhedron: KPolyhedron,
    x: SurfacePoint,
    y: SurfacePoint,
    m: int = DEFAULT_STEINER_POINTS,
    graph: Optional[MetricGraph] = None,
) -> float:
    """Approximate intrinsic distance between two surface points.

    The result is an upper bound on the true distance that converges to it as m grows.
    """
    return float(pairwise_distances(polyhedron, [x, y], m, graph)[0, 1])

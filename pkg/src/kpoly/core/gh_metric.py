"""Gromov-Hausdorff distance between finite metric spaces.

A correspondence is stored as a boolean relation matrix. Search routines only
ever produce relations of the form graph(f) + graph(g) for maps f: X -> Y and
g: Y -> X; every correspondence contains one of these, and the distortion can
only shrink when pairs are removed.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import dijkstra

from ..utils.constants import DEFAULT_GH_RESTARTS, DEFAULT_GH_SIZE_LIMIT, DEFAULT_STEINER_POINTS
from ..utils.error_handler import KPolyError
from ..utils.models import GHBounds
from .config import get_tolerances
from .kpolyhedron import KPolyhedron, SurfacePoint
from .metric_graph import build_metric_graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A finite metric space given by its distance matrix."""

    d: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=float)
        object.__setattr__(self, 'd', d)
        validate_metric(d)

    @property
    def size(self) -> int:
        return self.d.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.d.max()) if self.size else 0.0

    def eccentricities(self) -> np.ndarray:
        return self.d.max(axis=1)

    def scaled(self, factor: float) -> 'FiniteMetricSpace':
        return FiniteMetricSpace(self.d * factor)


def validate_metric(d: np.ndarray) -> None:
    """Check that a matrix is a distance matrix.

    Raises:
        KPolyError: 503 when the matrix is not square, not symmetric, has a non-zero
            diagonal, a non-positive off-diagonal entry, or breaks the triangle inequality.
    """
    tol = get_tolerances().metric
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise KPolyError(code=503, message=f'Distance matrix must be square and non-empty, got shape {d.shape}')
    if not np.all(np.isfinite(d)):
        raise KPolyError(code=503, message='Distance matrix has non-finite entries')
    if not np.allclose(d, d.T, rtol=0.0, atol=tol):
        raise KPolyError(code=503, message='Distance matrix is not symmetric')
    if np.any(np.diag(d) != 0.0):
        raise KPolyError(code=503, message='Distance matrix has a non-zero diagonal')
    off_diagonal = d[~np.eye(d.shape[0], dtype=bool)]
    if np.any(off_diagonal <= 0.0):
        raise KPolyError(code=503, message='Distinct points must be at positive distance')
    shortcut = (d[:, :, None] + d[None, :, :]).min(axis=1)
    if np.any(d > shortcut + tol):
        i, j = np.unravel_index(np.argmax(d - shortcut), d.shape)
        raise KPolyError(
            code=503,
            message='Distance matrix violates the triangle inequality',
            debug_messages=[f'd[{i},{j}]={d[i, j]!r} exceeds a two-step path of length {shortcut[i, j]!r}'],
        )


@dataclass(frozen=True, eq=False)
class Correspondence:
    """A relation between X and Y that covers both."""

    relation: np.ndarray

    def __post_init__(self) -> None:
        relation = np.asarray(self.relation, dtype=bool)
        object.__setattr__(self, 'relation', relation)
        if relation.ndim != 2 or not relation.any(axis=1).all() or not relation.any(axis=0).all():
            raise KPolyError(code=504, message='A correspondence must relate every point of both spaces')

    @classmethod
    def from_maps(cls, f: Sequence[int], g: Sequence[int]) -> 'Correspondence':
        """graph(f) + graph(g) for f: X -> Y and g: Y -> X."""
        relation = np.zeros((len(f), len(g)), dtype=bool)
        relation[np.arange(len(f)), f] = True
        relation[g, np.arange(len(g))] = True
        return cls(relation)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.relation)]


def distortion(relation: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """sup |dX(x, x') - dY(y, y')| over related pairs (x, y) and (x', y')."""
    if relation.relation.shape != (X.size, Y.size):
        raise KPolyError(
            code=501,
            message=f'Relation of shape {relation.relation.shape} does not match spaces of sizes {X.size} and {Y.size}',
        )
    xs, ys = np.nonzero(relation.relation)
    return float(np.max(np.abs(X.d[np.ix_(xs, xs)] - Y.d[np.ix_(ys, ys)])))


def _maps_distortion(dx: np.ndarray, dy: np.ndarray, f: np.ndarray, g: np.ndarray) -> float:
    xs = np.concatenate([np.arange(len(f)), g])
    ys = np.concatenate([f, np.arange(len(g))])
    return float(np.max(np.abs(dx[np.ix_(xs, xs)] - dy[np.ix_(ys, ys)])))


def _hausdorff_1d(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two finite sets of reals."""
    gaps = np.abs(a[:, None] - b[None, :])
    return float(max(gaps.min(axis=1).max(), gaps.min(axis=0).max()))


def gh_lower_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """A certified lower bound on d_GH(X, Y).

    Any correspondence of distortion r puts every distance value of X within r of a
    distance value of Y (and back), and likewise for eccentricities; half the
    Hausdorff gap between those value sets is therefore a lower bound, as is half
    the difference of diameters.
    """
    values_x = np.unique(X.d)
    values_y = np.unique(Y.d)
    bound = max(
        0.5 * abs(X.diameter - Y.diameter),
        0.5 * _hausdorff_1d(values_x, values_y),
        0.5 * _hausdorff_1d(X.eccentricities(), Y.eccentricities()),
    )
    return float(bound)


def _local_search(dx: np.ndarray, dy: np.ndarray, f: np.ndarray, g: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Reassign single points while that strictly lowers the distortion."""
    best = _maps_distortion(dx, dy, f, g)
    improved = True
    while improved:
        improved = False
        for maps, targets in ((f, dy.shape[0]), (g, dx.shape[0])):
            for i in range(len(maps)):
                keep = maps[i]
                for candidate in range(targets):
                    if candidate == keep:
                        continue
                    maps[i] = candidate
                    value = _maps_distortion(dx, dy, f, g)
                    if value < best:
                        best, keep, improved = value, candidate, True
                maps[i] = keep
    return best, f, g


def _nearest_by_eccentricity(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    return np.argmin(np.abs(source[:, None] - target[None, :]), axis=1)


def gh_upper_bound(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    restarts: int = DEFAULT_GH_RESTARTS,
    seed: int = 0,
) -> tuple[float, Correspondence]:
    """An upper bound on d_GH(X, Y) with the correspondence that realises it.

    Starts from an eccentricity matching (and the identity when the sizes agree),
    then from `restarts` random maps, improving each by single-point reassignment.

    Returns:
        tuple[float, Correspondence]: Half the distortion of the best correspondence, and that correspondence.
    """
    if restarts < 0:
        raise KPolyError(code=303, message=f'Restart count {restarts} must be non-negative')
    dx, dy = X.d, Y.d
    ecc_x, ecc_y = X.eccentricities(), Y.eccentricities()
    starts = [(_nearest_by_eccentricity(ecc_x, ecc_y), _nearest_by_eccentricity(ecc_y, ecc_x))]
    if X.size == Y.size:
        starts.append((np.arange(X.size), np.arange(Y.size)))
    for index in range(restarts):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))
        starts.append((rng.integers(0, Y.size, X.size), rng.integers(0, X.size, Y.size)))

    best_value, best_maps = math.inf, starts[0]
    for f, g in starts:
        value, f, g = _local_search(dx, dy, f.copy(), g.copy())
        if value < best_value:
            best_value, best_maps = value, (f, g)
    certificate = Correspondence.from_maps(*best_maps)
    logger.debug(f'GH upper bound {best_value / 2} from {len(starts)} starts')
    return distortion(certificate, X, Y) / 2.0, certificate


def gh_exact(X: FiniteMetricSpace, Y: FiniteMetricSpace, size_limit: int = DEFAULT_GH_SIZE_LIMIT) -> float:
    """Exact d_GH(X, Y) by branch and bound over pairs of maps.

    Raises:
        KPolyError: 502 when either space has more than `size_limit` points.
    """
    if max(X.size, Y.size) > size_limit:
        raise KPolyError(
            code=502,
            message=f'Exact search is limited to {size_limit} points, got {X.size} and {Y.size}',
            detail='Use the upper and lower bounds instead, or raise --size-limit.',
        )
    dx, dy = X.d, Y.d
    n, m = X.size, Y.size
    upper, _ = gh_upper_bound(X, Y)
    best = [2.0 * upper]
    ecc_x, ecc_y = X.eccentricities(), Y.eccentricities()
    order_for = [sorted(range(m), key=lambda j: (abs(ecc_x[i] - ecc_y[j]), j)) for i in range(n)]

    def extend(xs: list[int], ys: list[int], current: float, x: int, y: int) -> float:
        if not xs:
            return current
        return max(current, float(np.max(np.abs(dx[x, xs] - dy[y, ys]))))

    def assign_y(xs: list[int], ys: list[int], current: float, pending: list[int]) -> None:
        if not pending:
            best[0] = min(best[0], current)
            return
        y, rest = pending[0], pending[1:]
        for x in range(n):
            value = extend(xs, ys, current, x, y)
            if value < best[0]:
                assign_y(xs + [x], ys + [y], value, rest)

    def assign_x(i: int, xs: list[int], ys: list[int], current: float) -> None:
        if i == n:
            assign_y(xs, ys, current, [j for j in range(m) if j not in set(ys)])
            return
        for y in order_for[i]:
            value = extend(xs, ys, current, i, y)
            if value < best[0]:
                assign_x(i + 1, xs + [i], ys + [y], value)

    assign_x(0, [], [], 0.0)
    return best[0] / 2.0


def gh_bounds(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    size_limit: int = DEFAULT_GH_SIZE_LIMIT,
    restarts: int = DEFAULT_GH_RESTARTS,
    seed: int = 0,
    exact: Optional[bool] = None,
) -> GHBounds:
    """Lower bound, upper bound with certificate, and the exact value when affordable.

    Args:
        exact: True forces the exact search (size-limit errors propagate), False skips
            it, None runs it whenever both spaces fit the size limit.

    Raises:
        KPolyError: 803 when the computed values are out of order.
    """
    lower = gh_lower_bound(X, Y)
    upper, certificate = gh_upper_bound(X, Y, restarts, seed)
    value = None
    if exact or (exact is None and max(X.size, Y.size) <= size_limit):
        value = gh_exact(X, Y, size_limit)

    slack = get_tolerances().absolute
    ordered = lower <= upper + slack
    if value is not None:
        ordered = ordered and lower <= value + slack and value <= upper + slack
    if not ordered:
        raise KPolyError(
            code=803,
            message=f'Bounds out of order: lower={lower!r}, exact={value!r}, upper={upper!r}',
        )
    return GHBounds(
        lower=float(lower),
        upper=float(upper),
        exact=None if value is None else float(value),
        certificate=certificate.pairs(),
    )


def farthest_point_sample(
    polyhedron: KPolyhedron,
    k: int,
    m: int = DEFAULT_STEINER_POINTS,
) -> tuple[list[SurfacePoint], np.ndarray]:
    """Farthest-point sampling over the nodes of the metric graph.

    The pool is the vertex set while k does not exceed it, so the conical points
    are picked first; Steiner points join the pool for larger k. Sampling starts at
    vertex 0 and ties go to the lowest node id.

    Returns:
        tuple: The sampled points and their graph distance matrix.
    """
    graph = build_metric_graph(polyhedron, m)
    pool_size = polyhedron.num_vertices if k <= polyhedron.num_vertices else graph.num_nodes
    if not 1 <= k <= pool_size:
        raise KPolyError(code=303, message=f'Cannot sample {k} points from a pool of {pool_size}')

    chosen = [0]
    rows = [dijkstra(graph.matrix, directed=False, indices=0)[:pool_size]]
    nearest = rows[0].copy()
    while len(chosen) < k:
        node = int(np.argmax(nearest))
        chosen.append(node)
        rows.append(dijkstra(graph.matrix, directed=False, indices=node)[:pool_size])
        nearest = np.minimum(nearest, rows[-1])

    table = np.array(rows)[:, chosen]
    table = np.minimum(table, table.T)
    np.fill_diagonal(table, 0.0)
    return [graph.node_point(node) for node in chosen], table


def sample_polyhedron(polyhedron: KPolyhedron, k: int, m: int = DEFAULT_STEINER_POINTS) -> FiniteMetricSpace:
    """k-point farthest-point sample of a polyhedron with its graph metric."""
    _, table = farthest_point_sample(polyhedron, k, m)
    return FiniteMetricSpace(table)

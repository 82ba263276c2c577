import logging
import math
from abc import ABC, abstractmethod

import numpy as np

logger = logging.getLogger(__name__)

E_X = np.array([1.0, 0.0, 0.0])


class ModelSpace(ABC):
    """Base adapter for the unit-curvature model surfaces.

    Points are 3-vectors. The plane is the affine slice z = 1, the sphere is the unit
    sphere and the hyperbolic plane is the upper sheet of x^2 + y^2 - z^2 = -1. In all
    three pictures the geodesic through u and w is cut out by the linear plane spanned
    by u and w, so side-of-line tests are a single determinant.

    Every length handled here is already rescaled to curvature -1, 0 or +1; the callers
    in `kpoly.core.model_geometry` do the sqrt|kappa| bookkeeping.

    Args:
        small_side (float): Side length below which angles use the half-angle formulas.
    """

    sign: int = 0
    name: str = ''

    def __init__(self, small_side: float = 1e-4) -> None:
        self.small_side = small_side

    @abstractmethod
    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        """Inner product of the ambient model (Euclidean or Minkowski)."""

    @abstractmethod
    def trig(self, t: float) -> tuple[float, float, float, float]:
        """Coefficients (C, S, C', S') of the geodesic x(t) = C(t) p + S(t) v."""

    @abstractmethod
    def tangent_component(self, p: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Project an ambient vector onto the tangent plane at p."""

    @abstractmethod
    def project(self, w: np.ndarray) -> np.ndarray:
        """Radially project an ambient vector onto the model surface."""

    @abstractmethod
    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        """Geodesic distance between two model points."""

    @abstractmethod
    def pairwise_distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Distance matrix between two stacks of model points."""

    @abstractmethod
    def crossing_time(self, a: float, b: float) -> float:
        """Smallest t > 0 with a C(t) + b S(t) = 0, or inf."""

    @abstractmethod
    def angle_from_sides(self, opposite: float, adj1: float, adj2: float) -> float:
        """Angle between the sides adj1 and adj2 of a valid triangle."""

    @abstractmethod
    def area(self, a: float, b: float, c: float) -> float:
        """Area of a valid triangle from its sides."""

    @abstractmethod
    def altitude(self, side: float, angle: float) -> float:
        """Distance from the far end of `side` to the line making `angle` with it."""

    @property
    def max_side(self) -> float:
        """Upper bound on side lengths of convex triangles."""
        return math.inf

    def origin(self) -> np.ndarray:
        return np.array([0.0, 0.0, 1.0])

    def norm(self, w: np.ndarray) -> float:
        return math.sqrt(max(self.inner(w, w), 0.0))

    def unit_tangent(self, p: np.ndarray, w: np.ndarray) -> np.ndarray:
        v = self.tangent_component(p, w)
        length = self.norm(v)
        if length == 0.0:
            raise ValueError('Tangent direction is undefined for coincident points')
        return v / length

    def tangent_toward(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Unit tangent at p of the segment from p to q."""
        return self.unit_tangent(p, q - p)

    def exp(self, p: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
        c, s, _, _ = self.trig(t)
        return c * p + s * v

    def velocity(self, p: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
        _, _, dc, ds = self.trig(t)
        return dc * p + ds * v

    def geodesic_point(self, p: np.ndarray, q: np.ndarray, s: float) -> np.ndarray:
        """Point at fraction s of the segment pq."""
        d = self.distance(p, q)
        if d == 0.0:
            return p.copy()
        return self.exp(p, self.tangent_toward(p, q), s * d)

    def side(self, u: np.ndarray, w: np.ndarray, y: np.ndarray) -> float:
        """Signed side of y with respect to the oriented line through u and w."""
        return float(np.dot(np.cross(u, w), y))

    def ray_exit(self, p: np.ndarray, v: np.ndarray, u: np.ndarray, w: np.ndarray) -> float:
        """Length travelled from p in direction v before meeting the line uw."""
        return self.crossing_time(self.side(u, w, p), self.side(u, w, v))

    def inward_normal(self, p: np.ndarray, along: np.ndarray, toward: np.ndarray) -> np.ndarray:
        """Unit tangent at p orthogonal to `along`, on the side of the point `toward`."""
        w = self.tangent_component(p, toward - p)
        w = w - self.inner(w, along) * along
        return w / self.norm(w)

    def place_triangle(self, a: float, b: float, c: float) -> np.ndarray:
        """Chart placement: A at the origin, B on the x-axis, C above it.

        Args:
            a: Side opposite A.
            b: Side opposite B.
            c: Side opposite C.

        Returns:
            np.ndarray: 3x3 array whose rows are A, B and C.
        """
        apex = self.origin()
        alpha = self.angle_from_sides(a, b, c)
        corner_b = self.exp(apex, E_X, c)
        corner_c = self.exp(apex, np.array([math.cos(alpha), math.sin(alpha), 0.0]), b)
        return np.vstack([apex, corner_b, corner_c])

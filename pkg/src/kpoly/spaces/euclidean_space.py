import math

import numpy as np
from scipy.spatial.distance import cdist

from .base_space import ModelSpace


class EuclideanPlane(ModelSpace):
    """The flat model M_0, realised as the affine plane z = 1."""

    sign = 0
    name = 'euclidean'

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(u[0] * v[0] + u[1] * v[1])

    def trig(self, t: float) -> tuple[float, float, float, float]:
        return 1.0, t, 0.0, 1.0

    def tangent_component(self, p: np.ndarray, w: np.ndarray) -> np.ndarray:
        return np.array([w[0], w[1], 0.0])

    def project(self, w: np.ndarray) -> np.ndarray:
        return np.array([w[0] / w[2], w[1] / w[2], 1.0])

    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        return math.hypot(q[0] - p[0], q[1] - p[1])

    def pairwise_distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return cdist(xs[:, :2], ys[:, :2])

    def crossing_time(self, a: float, b: float) -> float:
        if b == 0.0:
            return math.inf
        t = -a / b
        return t if t > 0.0 else math.inf

    def angle_from_sides(self, opposite: float, adj1: float, adj2: float) -> float:
        s = 0.5 * (opposite + adj1 + adj2)
        num = max((s - adj1) * (s - adj2), 0.0)
        den = max(s * (s - opposite), 0.0)
        return 2.0 * math.atan2(math.sqrt(num), math.sqrt(den))

    def area(self, a: float, b: float, c: float) -> float:
        # Kahan's ordering keeps needle-shaped triangles accurate
        x, y, z = sorted((a, b, c), reverse=True)
        product = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z))
        return 0.25 * math.sqrt(max(product, 0.0))

    def altitude(self, side: float, angle: float) -> float:
        return side * math.sin(angle)

import math

import numpy as np

from .base_space import ModelSpace

MINKOWSKI = np.array([1.0, 1.0, -1.0])


class HyperbolicPlane(ModelSpace):
    """The hyperboloid model of curvature -1."""

    sign = -1
    name = 'hyperbolic'

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])

    def trig(self, t: float) -> tuple[float, float, float, float]:
        c, s = math.cosh(t), math.sinh(t)
        return c, s, s, c

    def tangent_component(self, p: np.ndarray, w: np.ndarray) -> np.ndarray:
        return w + self.inner(p, w) * p

    def project(self, w: np.ndarray) -> np.ndarray:
        scale = math.sqrt(-self.inner(w, w))
        return w / scale if w[2] > 0 else -w / scale

    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        d = q - p
        return 2.0 * math.asinh(0.5 * math.sqrt(max(self.inner(d, d), 0.0)))

    def pairwise_distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        diffs = xs[:, None, :] - ys[None, :, :]
        chords = np.einsum('ijk,k,ijk->ij', diffs, MINKOWSKI, diffs)
        return 2.0 * np.arcsinh(0.5 * np.sqrt(np.clip(chords, 0.0, None)))

    def crossing_time(self, a: float, b: float) -> float:
        if b == 0.0:
            return math.inf
        ratio = -a / b
        if not 0.0 < ratio < 1.0:
            return math.inf
        return math.atanh(ratio)

    def angle_from_sides(self, opposite: float, adj1: float, adj2: float) -> float:
        if max(opposite, adj1, adj2) < self.small_side:
            s = 0.5 * (opposite + adj1 + adj2)
            num = max(math.sinh(s - adj1) * math.sinh(s - adj2), 0.0)
            den = max(math.sinh(s) * math.sinh(s - opposite), 0.0)
            return 2.0 * math.atan2(math.sqrt(num), math.sqrt(den))
        cos_angle = (math.cosh(adj1) * math.cosh(adj2) - math.cosh(opposite)) / (math.sinh(adj1) * math.sinh(adj2))
        return math.acos(min(1.0, max(-1.0, cos_angle)))

    def area(self, a: float, b: float, c: float) -> float:
        # hyperbolic L'Huilier for the angle defect
        s = 0.5 * (a + b + c)
        product = math.tanh(0.5 * s) * math.tanh(0.5 * (s - a)) * math.tanh(0.5 * (s - b)) * math.tanh(0.5 * (s - c))
        return 4.0 * math.atan(math.sqrt(max(product, 0.0)))

    def altitude(self, side: float, angle: float) -> float:
        return math.asinh(math.sinh(side) * math.sin(angle))

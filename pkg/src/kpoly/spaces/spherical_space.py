import math

import numpy as np

from .base_space import ModelSpace


class Sphere(ModelSpace):
    """The unit sphere, model of curvature +1."""

    sign = 1
    name = 'spherical'

    @property
    def max_side(self) -> float:
        return math.pi

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.dot(u, v))

    def trig(self, t: float) -> tuple[float, float, float, float]:
        c, s = math.cos(t), math.sin(t)
        return c, s, -s, c

    def tangent_component(self, p: np.ndarray, w: np.ndarray) -> np.ndarray:
        return w - np.dot(p, w) * p

    def project(self, w: np.ndarray) -> np.ndarray:
        return w / np.linalg.norm(w)

    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        return math.atan2(float(np.linalg.norm(np.cross(p, q))), float(np.dot(p, q)))

    def pairwise_distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        crosses = np.cross(xs[:, None, :], ys[None, :, :])
        return np.arctan2(np.linalg.norm(crosses, axis=-1), xs @ ys.T)

    def crossing_time(self, a: float, b: float) -> float:
        if a == 0.0 and b == 0.0:
            return math.inf
        # a cos t + b sin t vanishes at t = -atan2(a, b) mod pi
        t = (-math.atan2(a, b)) % math.pi
        return t if t > 0.0 else math.pi

    def angle_from_sides(self, opposite: float, adj1: float, adj2: float) -> float:
        if max(opposite, adj1, adj2) < self.small_side:
            s = 0.5 * (opposite + adj1 + adj2)
            num = max(math.sin(s - adj1) * math.sin(s - adj2), 0.0)
            den = max(math.sin(s) * math.sin(s - opposite), 0.0)
            return 2.0 * math.atan2(math.sqrt(num), math.sqrt(den))
        cos_angle = (math.cos(opposite) - math.cos(adj1) * math.cos(adj2)) / (math.sin(adj1) * math.sin(adj2))
        return math.acos(min(1.0, max(-1.0, cos_angle)))

    def area(self, a: float, b: float, c: float) -> float:
        # L'Huilier: tan(E/4)^2 = tan(s/2) tan((s-a)/2) tan((s-b)/2) tan((s-c)/2)
        s = 0.5 * (a + b + c)
        product = math.tan(0.5 * s) * math.tan(0.5 * (s - a)) * math.tan(0.5 * (s - b)) * math.tan(0.5 * (s - c))
        return 4.0 * math.atan(math.sqrt(max(product, 0.0)))

    def altitude(self, side: float, angle: float) -> float:
        return math.asin(min(1.0, math.sin(side) * math.sin(angle)))

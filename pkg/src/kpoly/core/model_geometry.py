"""Triangles in the model surfaces M_kappa.

Every function takes the curvature explicitly and works in chart coordinates of
M_kappa itself: 2-vectors in the plane for kappa = 0, and ambient 3-vectors on the
sphere of radius 1/sqrt(kappa) or on the hyperboloid x^2 + y^2 - z^2 = 1/kappa
otherwise. Internally lengths are rescaled to the unit-curvature adapters of
`kpoly.spaces`.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from ..spaces import ModelSpace, get_model_space
from ..utils.error_handler import KPolyError
from .config import get_tolerances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Curvature:
    """A real curvature value kappa."""

    kappa: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.kappa):
            raise KPolyError(code=303, message=f'Curvature must be finite, got {self.kappa}')

    @property
    def sign(self) -> int:
        return (self.kappa > 0) - (self.kappa < 0)

    @property
    def scale(self) -> float:
        """Factor mapping lengths of M_kappa to the unit model (1 when flat)."""
        return math.sqrt(abs(self.kappa)) if self.kappa else 1.0

    @property
    def space(self) -> ModelSpace:
        return get_model_space(self.kappa)

    def rescaled(self, s: float) -> 'Curvature':
        """Curvature after multiplying every length by s."""
        return Curvature(self.kappa / (s * s))

    def __float__(self) -> float:
        return float(self.kappa)


CurvatureLike = Union[float, Curvature]


def as_curvature(kappa: CurvatureLike) -> Curvature:
    return kappa if isinstance(kappa, Curvature) else Curvature(float(kappa))


def validate_sides(kappa: CurvatureLike, a: float, b: float, c: float) -> None:
    """Check that (a, b, c) are the sides of a non-degenerate triangle in M_kappa.

    Raises:
        KPolyError: 302 for non-positive or non-finite sides, 301 when the triangle
            inequality fails (equality included), 304 when a spherical triangle is too large.
    """
    curvature = as_curvature(kappa)
    sides = (a, b, c)
    if not all(math.isfinite(x) and x > 0.0 for x in sides):
        raise KPolyError(code=302, message=f'Sides {sides} must be positive and finite')

    longest = max(sides)
    gap = min(b + c - a, a + c - b, a + b - c)
    if gap <= get_tolerances().degenerate * longest:
        raise KPolyError(
            code=301,
            message=f'Sides {sides} violate the strict triangle inequality',
            debug_messages=[f'gap={gap!r}'],
        )

    if curvature.kappa > 0:
        unit = [x * curvature.scale for x in sides]
        if max(unit) >= math.pi or sum(unit) >= 2.0 * math.pi:
            raise KPolyError(
                code=304,
                message=f'Sides {sides} are too long for a triangle of curvature {curvature.kappa}',
                detail='Each side must stay below pi/sqrt(kappa) and the perimeter below 2*pi/sqrt(kappa).',
            )


@dataclass(frozen=True)
class ModelTriangle:
    """A triangle ABC of M_kappa given by its sides.

    Attributes:
        kappa: Curvature of the model surface.
        a: Side BC, opposite A.
        b: Side CA, opposite B.
        c: Side AB, opposite C.
    """

    kappa: float
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        validate_sides(self.kappa, self.a, self.b, self.c)

    @property
    def sides(self) -> tuple[float, float, float]:
        return self.a, self.b, self.c

    def edge_length(self, edge: int) -> float:
        """Length of edge `edge`, which runs from corner `edge` to corner `edge + 1`."""
        return (self.c, self.a, self.b)[edge]

    @cached_property
    def angles(self) -> tuple[float, float, float]:
        """Angles at A, B and C."""
        return (
            angle_from_sides(self.kappa, self.a, self.b, self.c),
            angle_from_sides(self.kappa, self.b, self.c, self.a),
            angle_from_sides(self.kappa, self.c, self.a, self.b),
        )

    def scaled(self, s: float, kappa: float) -> 'ModelTriangle':
        return ModelTriangle(kappa, self.a * s, self.b * s, self.c * s)


def angle_from_sides(kappa: CurvatureLike, opposite: float, adj1: float, adj2: float) -> float:
    """Angle between sides adj1 and adj2 of the model triangle with sides (opposite, adj1, adj2).

    Args:
        kappa: Curvature of the model surface.
        opposite: Side facing the angle.
        adj1: First side meeting at the angle.
        adj2: Second side meeting at the angle.

    Returns:
        float: The angle, strictly between 0 and pi.

    Raises:
        KPolyError: 302 when a side is zero, 301 or 304 when the sides are not a valid triangle.
    """
    curvature = as_curvature(kappa)
    if adj1 == 0.0 or adj2 == 0.0:
        raise KPolyError(code=302, message='An angle needs two sides of positive length')
    validate_sides(curvature, opposite, adj1, adj2)
    s = curvature.scale
    return curvature.space.angle_from_sides(opposite * s, adj1 * s, adj2 * s)


def comparison_angle(kappa: CurvatureLike, d_ab: float, d_bc: float, d_ac: float) -> float:
    """Angle at b of the model triangle with |ab| = d_ab, |bc| = d_bc, |ac| = d_ac."""
    return angle_from_sides(kappa, d_ac, d_ab, d_bc)


def sigma0(a: float, b: float, c: float) -> float:
    """Euclidean area of the triangle with sides a, b, c."""
    validate_sides(0.0, a, b, c)
    return get_model_space(0.0).area(a, b, c)


def triangle_area(triangle: ModelTriangle) -> float:
    """Area of a model triangle; for kappa != 0 this is (alpha + beta + gamma - pi) / kappa."""
    curvature = as_curvature(triangle.kappa)
    if curvature.sign == 0:
        return sigma0(*triangle.sides)
    s = curvature.scale
    return curvature.space.area(triangle.a * s, triangle.b * s, triangle.c * s) / abs(curvature.kappa)


def excess_e0(alpha: float, beta: float, gamma: float) -> float:
    """Angle excess alpha + beta + gamma - pi."""
    for angle in (alpha, beta, gamma):
        if not 0.0 < angle < math.pi:
            raise KPolyError(code=303, message=f'Angle {angle} is outside (0, pi)')
    return alpha + beta + gamma - math.pi


def chart_to_unit(kappa: CurvatureLike, point: Sequence[float]) -> np.ndarray:
    """Map chart coordinates of M_kappa to the unit-curvature adapter."""
    curvature = as_curvature(kappa)
    p = np.asarray(point, dtype=float)
    if curvature.sign == 0:
        return np.array([p[0], p[1], 1.0])
    return p * curvature.scale


def unit_to_chart(kappa: CurvatureLike, point: np.ndarray) -> np.ndarray:
    """Inverse of `chart_to_unit`; works on single points and on stacks of points."""
    curvature = as_curvature(kappa)
    if curvature.sign == 0:
        return np.array(point[..., :2], dtype=float)
    return np.asarray(point, dtype=float) / curvature.scale


def chart_embed(triangle: ModelTriangle) -> np.ndarray:
    """Place a triangle in a chart of M_kappa.

    A sits at the chart origin, B on the positive reference axis and C on the
    positive side of AB.

    Returns:
        np.ndarray: Rows A, B, C (2 columns when flat, 3 otherwise).
    """
    curvature = as_curvature(triangle.kappa)
    s = curvature.scale
    unit = curvature.space.place_triangle(triangle.a * s, triangle.b * s, triangle.c * s)
    return unit_to_chart(curvature, unit)


def unit_chart(triangle: ModelTriangle) -> np.ndarray:
    """Chart placement in the unit-curvature adapter (rows are 3-vectors)."""
    curvature = as_curvature(triangle.kappa)
    s = curvature.scale
    return curvature.space.place_triangle(triangle.a * s, triangle.b * s, triangle.c * s)


def model_distance(kappa: CurvatureLike, p: Sequence[float], q: Sequence[float]) -> float:
    """Geodesic distance between two chart points of M_kappa."""
    curvature = as_curvature(kappa)
    unit = curvature.space.distance(chart_to_unit(curvature, p), chart_to_unit(curvature, q))
    return unit / curvature.scale


def geodesic_point(kappa: CurvatureLike, p: Sequence[float], q: Sequence[float], s: float) -> np.ndarray:
    """Point at fraction s along the segment from p to q."""
    curvature = as_curvature(kappa)
    unit = curvature.space.geodesic_point(chart_to_unit(curvature, p), chart_to_unit(curvature, q), s)
    return unit_to_chart(curvature, unit)


def theta(kappa: CurvatureLike, A: float, B: float, C: float, s: float, t: float) -> float:
    """Distance between the point at fraction s of ab and the point at fraction t of ac.

    The triangle abc has |bc| = A, |ab| = B, |ac| = C and is laid out in a chart of
    M_kappa with a at the origin.

    Raises:
        KPolyError: 303 when s or t is outside [0, 1], 301 or 304 for an invalid triangle.
    """
    if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        raise KPolyError(code=303, message=f'Fractions s={s}, t={t} must lie in [0, 1]')
    curvature = as_curvature(kappa)
    validate_sides(curvature, A, B, C)
    space = curvature.space
    k = curvature.scale
    apex = space.origin()
    alpha = space.angle_from_sides(A * k, B * k, C * k)
    p = space.exp(apex, np.array([1.0, 0.0, 0.0]), s * B * k)
    q = space.exp(apex, np.array([math.cos(alpha), math.sin(alpha), 0.0]), t * C * k)
    return space.distance(p, q) / k


def theta_ratio_table(
    kappa: CurvatureLike,
    A: float,
    B: float,
    C: float,
    s: float,
    t: float,
    deltas: Sequence[float],
) -> list[float]:
    """Ratios Theta^kappa / Theta^0 for the triangle scaled by each delta.

    When both distances vanish (s = t = 0) the ratio is reported as 1.
    """
    ratios = []
    for delta in deltas:
        if not delta > 0.0:
            raise KPolyError(code=303, message=f'Scale delta={delta} must be positive')
        curved = theta(kappa, delta * A, delta * B, delta * C, s, t)
        flat = theta(0.0, delta * A, delta * B, delta * C, s, t)
        ratios.append(curved / flat if flat > 0.0 else 1.0)
    logger.debug(f'theta ratios for kappa={float(kappa)}: {ratios}')
    return ratios


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit of y = K * x^p on a log-log scale.

    Pairs with a non-positive value are skipped.

    Returns:
        tuple[float, float]: The constant K and the exponent p.

    Raises:
        KPolyError: 303 when fewer than two usable pairs remain.
    """
    pairs = [(x, y) for x, y in zip(xs, ys) if x > 0.0 and y > 0.0]
    if len(pairs) < 2:
        raise KPolyError(code=303, message='A power-law fit needs at least two positive samples')
    log_x, log_y = np.log(np.array(pairs)).T
    exponent, intercept = np.polyfit(log_x, log_y, 1)
    return float(math.exp(intercept)), float(exponent)

import logging
from functools import lru_cache

from ..core.config import get_tolerances
from .base_space import ModelSpace
from .euclidean_space import EuclideanPlane
from .hyperbolic_space import HyperbolicPlane
from .spherical_space import Sphere

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _space_for(sign: int, small_side: float) -> ModelSpace:
    if sign > 0:
        return Sphere(small_side)
    if sign < 0:
        return HyperbolicPlane(small_side)
    return EuclideanPlane(small_side)


def get_model_space(kappa: float) -> ModelSpace:
    """Get the unit-curvature model adapter for the sign of kappa.

    Args:
        kappa: Curvature of the model surface; only its sign matters here.

    Returns:
        ModelSpace: EuclideanPlane for kappa == 0, Sphere for kappa > 0 and
            HyperbolicPlane for kappa < 0.
    """
    sign = (kappa > 0) - (kappa < 0)
    return _space_for(sign, get_tolerances().small_side)

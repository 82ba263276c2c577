from .base_space import ModelSpace
from .euclidean_space import EuclideanPlane
from .hyperbolic_space import HyperbolicPlane
from .space_factory import get_model_space
from .spherical_space import Sphere

__all__ = ['EuclideanPlane', 'HyperbolicPlane', 'ModelSpace', 'Sphere', 'get_model_space']

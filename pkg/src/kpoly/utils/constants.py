"""Constants used throughout kpoly."""

import math

TWO_PI = 2.0 * math.pi

# Metric graph
DEFAULT_STEINER_POINTS = 8

# Gromov-Hausdorff
DEFAULT_GH_SIZE_LIMIT = 6
DEFAULT_GH_RESTARTS = 16

# Smoothing
WARP_WORKING_BOUND = math.pi / 4  # 2 * epsilon must stay below this
BISECTION_MAX_ITER = 200
DEFAULT_WARP_POINTS = 200
WARP_MARGIN = 0.1  # distance kept from the first zero of f
AUDIT_RTOL = 1e-8
CONE_LAW_TOL = 1e-10
AUDIT_LAMBDAS = tuple(round(0.1 * i, 1) for i in range(1, 11))
AUDIT_EPSILONS = (1e-2, 1e-3, 1e-4)

# Curvature estimation
PROBE_FRACTIONS = (1.0 / 8.0, 1.0 / 16.0)
SAMPLE_RADIUS_FRACTIONS = (0.25, 0.5)
MAX_CANDIDATE_FACTOR = 20  # candidates drawn per requested sample

# CSV output
FLOAT_FORMAT = '.17g'

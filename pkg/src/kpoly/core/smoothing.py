"""Smoothing of a conical point of a 1-polyhedron.

Around a vertex of curvature omega the surface is the cone metric
dr^2 + (1 - omega/2pi)^2 sin(r)^2 dtheta^2. It is replaced by a warped metric
dr^2 + f(r)^2 dtheta^2 where f solves f'' + k f = 0 with k = 1 outside the band
[eps, 2*eps] and k = (lam/eps)^2 inside it. The solution is piecewise
p sin(mu t) + q cos(mu t) and only its eta -> 0 limit is modelled; the Gaussian
curvature of the warped metric is -f''/f = mu^2 of the piece.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from ..utils.constants import (
    AUDIT_EPSILONS,
    AUDIT_LAMBDAS,
    AUDIT_RTOL,
    BISECTION_MAX_ITER,
    TWO_PI,
    WARP_MARGIN,
    WARP_WORKING_BOUND,
)
from ..utils.error_handler import KPolyError
from ..utils.models import AuditCell, FormulaAudit, WarpSummary
from .config import get_tolerances

logger = logging.getLogger(__name__)


def _check_params(lam: float, eps: float) -> None:
    if not (lam > 0.0 and eps > 0.0):
        raise KPolyError(code=303, message=f'lambda and epsilon must be positive, got {lam} and {eps}')
    if 2.0 * eps >= WARP_WORKING_BOUND:
        raise KPolyError(
            code=605,
            message=f'epsilon={eps} is too large',
            detail=f'The band [eps, 2*eps] must end below {WARP_WORKING_BOUND:.6f}.',
        )


def _check_omega(omega: float) -> None:
    if not 0.0 < omega < TWO_PI:
        raise KPolyError(code=303, message=f'Cone curvature {omega} must lie in (0, 2*pi)')


def k_profile(lam: float, eps: float, t: float) -> float:
    """The curvature profile: lam^2/eps^2 on [eps, 2*eps] and 1 elsewhere."""
    if eps <= t <= 2.0 * eps:
        return (lam / eps) ** 2
    return 1.0


@dataclass(frozen=True)
class WarpPiece:
    """f(t) = p sin(mu t) + q cos(mu t) on [start, end]."""

    start: float
    end: float
    mu: float
    p: float
    q: float

    def value(self, t: float) -> tuple[float, float]:
        s, c = math.sin(self.mu * t), math.cos(self.mu * t)
        return self.p * s + self.q * c, self.mu * (self.p * c - self.q * s)


def _match(mu: float, t: float, value: float, slope: float) -> tuple[float, float]:
    """Coefficients (p, q) of the frequency-mu solution with the given value and slope at t."""
    s, c = math.sin(mu * t), math.cos(mu * t)
    return value * s + slope / mu * c, value * c - slope / mu * s


@dataclass(frozen=True)
class WarpProfile:
    """C^1 solution of f'' + k f = 0 built from three closed-form pieces.

    Attributes:
        lam: Band frequency times eps.
        eps: Start of the band.
        pieces: Solutions on [0, eps], [eps, 2*eps] and [2*eps, inf).
    """

    lam: float
    eps: float
    pieces: tuple[WarpPiece, WarpPiece, WarpPiece]

    @property
    def knots(self) -> tuple[float, float]:
        return self.eps, 2.0 * self.eps

    @property
    def coefficients(self) -> tuple[float, float]:
        """(A, B) with f(t) = A sin t + B cos t beyond the band."""
        return self.pieces[2].p, self.pieces[2].q

    @property
    def t_max(self) -> float:
        """End of the working range, kept away from the first zero of f beyond the band."""
        A, B = self.coefficients
        phase = math.atan2(B, A)
        return math.pi - max(phase, 0.0) - WARP_MARGIN

    def at_knot(self, t: float) -> bool:
        return any(math.isclose(t, knot, rel_tol=1e-12, abs_tol=0.0) for knot in self.knots)

    def piece_at(self, t: float, side: str = 'right') -> WarpPiece:
        """The piece holding t; at a knot, `side` picks the left or right one."""
        if side not in ('left', 'right'):
            raise KPolyError(code=104, message=f"side must be 'left' or 'right', got {side!r}")
        if t < 0.0:
            raise KPolyError(code=605, message=f't={t} is outside the profile domain [0, inf)')
        for index, knot in enumerate(self.knots):
            if math.isclose(t, knot, rel_tol=1e-12, abs_tol=0.0):
                return self.pieces[index if side == 'left' else index + 1]
            if t < knot:
                return self.pieces[index]
        return self.pieces[2]

    def evaluate(self, t: float, side: str = 'right') -> tuple[float, float, float]:
        """f(t), f'(t) and the curvature mu^2 of the piece holding t."""
        piece = self.piece_at(t, side)
        f, fp = piece.value(t)
        return f, fp, piece.mu**2


def warp_solution(lam: float, eps: float, f0: float, fp0: float) -> WarpProfile:
    """Solution of f'' + k f = 0 with f(0) = f0 and f'(0) = fp0."""
    _check_params(lam, eps)
    first = WarpPiece(0.0, eps, 1.0, fp0, f0)
    band_mu = lam / eps
    p, q = _match(band_mu, eps, *first.value(eps))
    band = WarpPiece(eps, 2.0 * eps, band_mu, p, q)
    A, B = _match(1.0, 2.0 * eps, *band.value(2.0 * eps))
    return WarpProfile(lam, eps, (first, band, WarpPiece(2.0 * eps, math.inf, 1.0, A, B)))


def solve_warp(lam: float, eps: float) -> WarpProfile:
    """The profile with f(0) = 0 and f'(0) = 1, so f = sin near 0."""
    return warp_solution(lam, eps, 0.0, 1.0)


def warp_AB(lam: float, eps: float) -> tuple[float, float]:
    """Closed-form coefficients (A, B) of the profile beyond the band, expanded in full."""
    _check_params(lam, eps)
    se, ce = math.sin(eps), math.cos(eps)
    sl, cl = math.sin(lam), math.cos(lam)
    e2, l2 = eps * eps, lam * lam
    A = (
        3.0 * (e2 - l2) * se * sl * ce**2
        + 2.0 * eps * lam * cl * ce
        + se * (e2 + l2 + (l2 - e2) * se**2) * sl
    ) / (2.0 * eps * lam)
    B = (ce * (l2 + (e2 - l2) * math.cos(2.0 * eps)) * sl - eps * lam * cl * se) / (eps * lam)
    return A, B


def limit_coefficients(lam: float) -> tuple[float, float]:
    """(A, B) as eps -> 0."""
    return math.cos(lam) - lam * math.sin(lam), 0.0


def matched_terms(lam: float, eps: float) -> dict[str, float]:
    """The C^1-matched coefficients split into their cos(lam) and sin(lam) parts."""
    s1, c1 = math.sin(eps), math.cos(eps)
    s2, c2 = math.sin(2.0 * eps), math.cos(2.0 * eps)
    sl, cl = math.sin(lam), math.cos(lam)
    # f and f' at 2*eps are s1*cl + (eps/lam)*c1*sl and c1*cl - (lam/eps)*s1*sl
    return {
        'A.cos': cl * (s1 * s2 + c1 * c2),
        'A.sin': sl * ((eps / lam) * c1 * s2 - (lam / eps) * s1 * c2),
        'B.cos': cl * (s1 * c2 - c1 * s2),
        'B.sin': sl * ((eps / lam) * c1 * c2 + (lam / eps) * s1 * s2),
    }


def closed_form_terms(lam: float, eps: float) -> dict[str, float]:
    """The closed-form coefficients split into their cos(lam) and sin(lam) parts."""
    se, ce = math.sin(eps), math.cos(eps)
    sl, cl = math.sin(lam), math.cos(lam)
    e2, l2 = eps * eps, lam * lam
    return {
        'A.cos': 2.0 * eps * lam * cl * ce / (2.0 * eps * lam),
        'A.sin': (3.0 * (e2 - l2) * se * ce**2 + se * (e2 + l2 + (l2 - e2) * se**2)) * sl / (2.0 * eps * lam),
        'B.cos': -eps * lam * cl * se / (eps * lam),
        'B.sin': ce * (l2 + (e2 - l2) * math.cos(2.0 * eps)) * sl / (eps * lam),
    }


def amplitude_phase(A: float, B: float) -> tuple[float, float]:
    """amp and phi with A sin t + B cos t = amp sin(t + phi)."""
    if A == 0.0 and B == 0.0:
        raise KPolyError(code=603, message='Amplitude and phase are undefined for (A, B) = (0, 0)')
    return math.hypot(A, B), math.atan2(B, A)


def _signed_amplitude(lam: float, eps: float) -> float:
    A, B = solve_warp(lam, eps).coefficients
    return math.copysign(math.hypot(A, B), A)


def find_lambda(omega: float, eps: float, tau: float) -> float:
    """Band parameter lam >= eps whose profile has amplitude 1 - omega/2pi beyond the band.

    The signed amplitude is 1 at lam = eps and decreases to about -pi/2 at lam = pi/2,
    so bisection over [eps, pi/2] brackets the root.

    Raises:
        KPolyError: 601 when the bracket holds no sign change, 602 when the phase of the
            resulting profile is not below tau.
    """
    _check_omega(omega)
    if tau <= 0.0:
        raise KPolyError(code=303, message=f'tau must be positive, got {tau}')
    _check_params(eps, eps)
    target = 1.0 - omega / TWO_PI
    upper = math.pi / 2.0
    if eps >= upper:
        raise KPolyError(code=601, message=f'epsilon={eps} leaves no bracket below pi/2')

    def residual(lam: float) -> float:
        return _signed_amplitude(lam, eps) - target

    low, high = residual(eps), residual(upper)
    if low * high > 0.0:
        raise KPolyError(
            code=601,
            message=f'No band parameter in [{eps}, pi/2] reaches amplitude {target}',
            debug_messages=[f'residuals at the bracket ends: {low!r}, {high!r}'],
        )
    lam = float(bisect(residual, eps, upper, xtol=1e-15, maxiter=BISECTION_MAX_ITER))
    if abs(residual(lam)) > 1e-10:
        raise KPolyError(
            code=601,
            message=f'Amplitude {target} falls in a jump of the signed amplitude near lambda={lam!r}',
            detail='Use a smaller epsilon.',
        )

    A, B = solve_warp(lam, eps).coefficients
    _, phi = amplitude_phase(A, B)
    if abs(phi) >= tau:
        raise KPolyError(
            code=602,
            message=f'Phase {phi:.3e} is not below tau={tau}',
            detail='Use a smaller epsilon.',
        )
    logger.debug(f'find_lambda: omega={omega} eps={eps} -> lambda={lam!r}, phi={phi!r}')
    return lam


def smooth_cone(omega: float, eps: float, tau: float) -> tuple[WarpProfile, WarpSummary]:
    """Profile for a cone of curvature omega, with its summary record."""
    lam = find_lambda(omega, eps, tau)
    profile = solve_warp(lam, eps)
    A, B = profile.coefficients
    amp, phi = amplitude_phase(A, B)
    return profile, WarpSummary(lam=lam, A=A, B=B, amp=amp, phi=phi, residual=abs(amp - (1.0 - omega / TWO_PI)))


def curvature_of_warp(profile: WarpProfile, t: float, side: Optional[str] = None) -> float:
    """Gaussian curvature -f''/f of the warped metric at radius t.

    Raises:
        KPolyError: 604 at a knot unless `side` is given, 605 where f vanishes.
    """
    if side is None and profile.at_knot(t):
        raise KPolyError(
            code=604,
            message=f'Curvature jumps at the knot t={t}',
            detail="Pass side='left' or side='right' for a one-sided value.",
        )
    f, _, curvature = profile.evaluate(t, side or 'right')
    if abs(f) <= get_tolerances().degenerate:
        raise KPolyError(code=605, message=f'f vanishes at t={t}; the curvature is undefined')
    return curvature


def _rk4(k: float, y: np.ndarray, h: float, steps: int) -> list[np.ndarray]:
    """Classical Runge-Kutta on (f, f')' = (f', -k f) with constant k."""

    def rhs(state: np.ndarray) -> np.ndarray:
        return np.array([state[1], -k * state[0]])

    path = []
    for _ in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        path.append(y)
    return path


def ode_integrate_check(lam: float, eps: float, step: Optional[float] = None) -> float:
    """Max deviation between a fixed-step integration and the closed-form profile.

    The range [0, min(pi - 0.1, 10*eps + 1)] is split at the knots and each segment
    is covered by equal steps no longer than `step` (default eps/50).
    """
    _check_params(lam, eps)
    step = eps / 50.0 if step is None else step
    if not 0.0 < step <= eps / 50.0:
        raise KPolyError(code=303, message=f'Step {step} must lie in (0, eps/50]')
    profile = solve_warp(lam, eps)
    end = min(math.pi - 0.1, 10.0 * eps + 1.0)
    bounds = [0.0, eps, 2.0 * eps, end]
    state = np.array([0.0, 1.0])
    worst = 0.0
    for index, (start, stop) in enumerate(zip(bounds[:-1], bounds[1:])):
        steps = max(1, math.ceil((stop - start) / step - 1e-9))
        h = (stop - start) / steps
        path = _rk4(profile.pieces[index].mu ** 2, state, h, steps)
        for i, y in enumerate(path, start=1):
            t = start + i * h
            f, _ = profile.pieces[index].value(t)
            worst = max(worst, abs(y[0] - f))
        state = path[-1]
    return worst


def integration_order(lam: float, eps: float, step: float) -> float:
    """Observed convergence order from integrating with `step` and `step/2`."""
    coarse = ode_integrate_check(lam, eps, step)
    fine = ode_integrate_check(lam, eps, step / 2.0)
    return math.log2(coarse / fine)


def cone_circle_length(omega: float, r: float) -> float:
    """Length of the circle of radius r around a cone point of curvature omega on a 1-surface."""
    _check_omega(omega)
    if not 0.0 < r < math.pi:
        raise KPolyError(code=303, message=f'Radius {r} must lie in (0, pi)')
    return (1.0 - omega / TWO_PI) * TWO_PI * math.sin(r)


@dataclass(frozen=True)
class ConeCap:
    """Ball of radius R around a cone point of curvature omega, curvature 1 elsewhere."""

    R: float
    omega: float

    def __post_init__(self) -> None:
        _check_omega(self.omega)
        if not 0.0 < self.R < math.pi:
            raise KPolyError(code=303, message=f'Cap radius {self.R} must lie in (0, pi)')

    def circle_length(self, r: float) -> float:
        if r > self.R:
            raise KPolyError(code=303, message=f'Radius {r} exceeds the cap radius {self.R}')
        return cone_circle_length(self.omega, r)

    def smoothed(self, eps: float, tau: float) -> tuple[WarpProfile, WarpSummary]:
        """Smoothing profile whose band and phase fit inside the cap."""
        if 2.0 * eps + tau >= self.R:
            raise KPolyError(
                code=303, message=f'The band 2*eps={2 * eps} plus tau={tau} does not fit in radius {self.R}'
            )
        return smooth_cone(self.omega, eps, tau)


def _relative_gap(closed: float, matched: float, scale: float) -> float:
    return abs(closed - matched) / scale


def audit_formulas(
    lambdas: Sequence[float] = AUDIT_LAMBDAS,
    epsilons: Sequence[float] = AUDIT_EPSILONS,
    rtol: float = AUDIT_RTOL,
) -> FormulaAudit:
    """Compare the closed-form (A, B) with the C^1-matched coefficients over a grid.

    Errors are taken relative to the amplitude of the matched pair, the size of f
    beyond the band. A disagreeing cell names its first disagreeing term.
    """
    cells = []
    for lam in lambdas:
        for eps in epsilons:
            matched_A, matched_B = solve_warp(lam, eps).coefficients
            closed_A, closed_B = warp_AB(lam, eps)
            scale = math.hypot(matched_A, matched_B)
            rel_A = _relative_gap(closed_A, matched_A, scale)
            rel_B = _relative_gap(closed_B, matched_B, scale)
            agrees = rel_A <= rtol and rel_B <= rtol
            mismatch = None
            if not agrees:
                ours, theirs = matched_terms(lam, eps), closed_form_terms(lam, eps)
                mismatch = next(
                    (name for name in ours if _relative_gap(theirs[name], ours[name], scale) > rtol),
                    'A' if rel_A > rtol else 'B',
                )
                logger.warning(f'Coefficient formulas disagree at lambda={lam}, eps={eps}: term {mismatch}')
            cells.append(
                AuditCell(
                    lam=lam,
                    epsilon=eps,
                    matched_A=matched_A,
                    matched_B=matched_B,
                    closed_A=closed_A,
                    closed_B=closed_B,
                    rel_error_A=rel_A,
                    rel_error_B=rel_B,
                    agrees=agrees,
                    first_mismatch=mismatch,
                )
            )
    first = next((f'lambda={c.lam}, epsilon={c.epsilon}: {c.first_mismatch}' for c in cells if not c.agrees), None)
    return FormulaAudit(passed=first is None, rtol=rtol, cells=cells, first_mismatch=first)

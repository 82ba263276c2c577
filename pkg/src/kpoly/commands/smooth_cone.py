import logging
import math
from pathlib import Path
from typing import Optional

import click

from ..core.formats import format_float, write_audit_yaml
from ..core.smoothing import audit_formulas, curvature_of_warp, smooth_cone
from ..utils.constants import CONE_LAW_TOL, DEFAULT_WARP_POINTS, TWO_PI
from ..utils.error_handler import KPolyError, MessageType
from .base import KPolyCommand

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = ('lambda', 'A', 'B', 'amp', 'phi')


class SmoothCommand(KPolyCommand):
    """Builds the smoothing profile of a cone point and tabulates it."""

    def __init__(
        self,
        omega: float,
        epsilon: float,
        tau: float,
        points: int,
        audit_report: Optional[str] = None,
        output: Optional[str] = None,
        verbose: bool = False,
    ) -> None:
        super().__init__('smooth', verbose, output)
        self.omega = omega
        self.epsilon = epsilon
        self.tau = tau
        self.points = points
        self.audit_report = Path(audit_report) if audit_report else None

    def execute(self) -> None:
        """Tabulate f, f' and the curvature over the working range.

        Raises:
            KPolyError: 800 if the profile curvature drops below 1.
        """
        if self.points < 1:
            raise KPolyError(code=104, message=f'--points must be positive, got {self.points}')
        profile, summary = smooth_cone(self.omega, self.epsilon, self.tau)
        end = profile.t_max
        rows = []
        for i in range(1, self.points + 1):
            t = end * i / self.points
            f, fp, _ = profile.evaluate(t)
            rows.append((t, f, fp, curvature_of_warp(profile, t, side='right')))
        lowest = min(row[3] for row in rows)
        self.write_table(rows, ('t', 'f', 'fprime', 'curvature'))

        values = summary.model_dump(by_alias=True)
        click.echo(','.join(SUMMARY_FIELDS), err=True)
        click.echo(','.join(format_float(values[name]) for name in SUMMARY_FIELDS), err=True)
        if lowest < 1.0 - 1e-12:
            raise KPolyError(code=800, message=f'Profile curvature {lowest!r} is below 1')
        # beyond the band f is the warp of a cone with the same curvature
        cone = 1.0 - self.omega / TWO_PI
        drift = max(
            (abs(f - cone * math.sin(t + summary.phi)) for t, f, _, _ in rows if t > 2.0 * self.epsilon),
            default=0.0,
        )
        if drift > CONE_LAW_TOL:
            raise KPolyError(code=800, message=f'Profile departs from the cone law by {drift!r}')

        if self.audit_report is not None:
            self._write_audit()

    def _write_audit(self) -> None:
        audit = audit_formulas()
        try:
            with open(self.audit_report, 'w', encoding='utf-8') as stream:
                write_audit_yaml(audit, stream)
        except OSError as e:
            raise KPolyError(code=200, message=f'Cannot write {self.audit_report}', original_error=e)
        if audit.passed:
            self.log_success(f'Coefficient formulas agree on all {len(audit.cells)} grid points')
        else:
            KPolyError(
                code=600,
                type=MessageType.WARNING,
                message=f'Coefficient formulas disagree: {audit.first_mismatch}',
                detail=f'See {self.audit_report}.',
            ).handle()


def smooth_command() -> click.Command:
    """Create the smooth command for Click."""

    @click.command()
    @click.option('--omega', type=float, required=True, help='Cone curvature in (0, 2*pi)')
    @click.option('--epsilon', type=float, required=True, help='Start of the curvature band')
    @click.option('--tau', type=float, required=True, help='Bound on the phase of the profile')
    @click.option('--points', type=int, default=DEFAULT_WARP_POINTS, show_default=True, help='Rows of the table')
    @click.option('--audit-report', type=click.Path(dir_okay=False), help='Write the coefficient-formula audit as YAML')
    @click.option('--output', '-o', type=click.Path(dir_okay=False), help='CSV file (default: standard output)')
    @click.pass_obj
    def smooth(
        obj: Optional[dict],
        omega: float,
        epsilon: float,
        tau: float,
        points: int,
        audit_report: Optional[str],
        output: Optional[str],
    ) -> None:
        """Smooth a cone point of curvature omega; prints t,f,fprime,curvature and the profile summary."""
        try:
            cmd = SmoothCommand(
                omega, epsilon, tau, points, audit_report, output, verbose=bool(obj and obj.get('verbose'))
            )
            cmd.execute()
        except KPolyError as e:
            e.handle()

    return smooth

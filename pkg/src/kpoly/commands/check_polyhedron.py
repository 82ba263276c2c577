import logging
from typing import Optional

import click

from ..core.config import get_tolerances
from ..core.formats import format_float, read_kpoly
from ..core.kpolyhedron import check_alexandrov, conical_points
from ..utils.error_handler import KPolyError
from .base import KPolyCommand

logger = logging.getLogger(__name__)


class CheckCommand(KPolyCommand):
    """Validates a polyhedron file and reports the vertex condition."""

    def __init__(self, path: str, verbose: bool = False) -> None:
        super().__init__('check', verbose)
        self.path = path

    def execute(self) -> None:
        """Parse, build and check the polyhedron.

        Raises:
            KPolyError: 801 when a vertex has total angle above 2*pi.
        """
        polyhedron = read_kpoly(self.path)
        report = check_alexandrov(polyhedron)
        conical = conical_points(polyhedron, get_tolerances().alexandrov_slack)
        omegas: list[float] = []
        for _, omega in sorted(conical, key=lambda item: item[1]):
            if not omegas or omega - omegas[-1] > 1e-9:
                omegas.append(omega)
        summary = f'vertices: {len(conical)} conical'
        if omegas:
            summary += f" (ω={', '.join(format_float(omega) for omega in omegas)})"
        click.echo(f"alexandrov: {'pass' if report.passed else 'fail'}, {summary}")
        click.echo(
            f'kappa={format_float(polyhedron.kappa)}, triangles={polyhedron.num_faces}, '
            f'edges={polyhedron.num_edges}, vertices={polyhedron.num_vertices}, euler={polyhedron.euler_char}'
        )
        if not report.passed:
            raise KPolyError(
                code=801,
                message=f'Vertices {report.offending} have total angle above 2*pi',
                debug_messages=[f'vertex {v}: {report.total_angles[v]!r}' for v in report.offending],
            )


def check_command() -> click.Command:
    """Create the check command for Click."""

    @click.command()
    @click.argument('path', type=click.Path(dir_okay=False))
    @click.pass_obj
    def check(obj: Optional[dict], path: str) -> None:
        """Validate a .kpoly file: gluing, links and the vertex condition."""
        try:
            CheckCommand(path, verbose=bool(obj and obj.get('verbose'))).execute()
        except KPolyError as e:
            e.handle()

    return check

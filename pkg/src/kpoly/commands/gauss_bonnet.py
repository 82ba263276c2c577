import logging
from typing import Optional

import click

from ..core.config import get_tolerances
from ..core.formats import read_kpoly
from ..core.kpolyhedron import gauss_bonnet_residual
from ..utils.error_handler import KPolyError
from .base import KPolyCommand

logger = logging.getLogger(__name__)


class GaussBonnetCommand(KPolyCommand):
    """Prints the discrete Gauss-Bonnet residual of a polyhedron."""

    def __init__(self, path: str, verbose: bool = False) -> None:
        super().__init__('gauss-bonnet', verbose)
        self.path = path

    def execute(self) -> None:
        polyhedron = read_kpoly(self.path)
        residual = gauss_bonnet_residual(polyhedron)
        logger.debug(
            f'sum(omega)={sum(polyhedron.omegas)!r}, area={polyhedron.total_area!r}, chi={polyhedron.euler_char}'
        )
        click.echo(f'residual: {residual!r}')
        bound = get_tolerances().gauss_bonnet
        if abs(residual) > bound:
            raise KPolyError(code=802, message=f'Residual {residual!r} exceeds {bound}')


def gauss_bonnet_command() -> click.Command:
    """Create the gauss-bonnet command for Click."""

    @click.command(name='gauss-bonnet')
    @click.argument('path', type=click.Path(dir_okay=False))
    @click.pass_obj
    def gauss_bonnet(obj: Optional[dict], path: str) -> None:
        """Print sum(omega) + kappa * area - 2*pi*chi for a .kpoly file."""
        try:
            GaussBonnetCommand(path, verbose=bool(obj and obj.get('verbose'))).execute()
        except KPolyError as e:
            e.handle()

    return gauss_bonnet

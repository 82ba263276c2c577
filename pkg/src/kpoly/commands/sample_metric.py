import logging
from typing import Optional

import click

from ..core.formats import dump_fms, read_kpoly, write_fms
from ..core.gh_metric import sample_polyhedron
from ..utils.constants import DEFAULT_STEINER_POINTS
from ..utils.error_handler import KPolyError
from .base import KPolyCommand

logger = logging.getLogger(__name__)


class SampleCommand(KPolyCommand):
    """Turns a polyhedron into a finite metric space that `gh` can read."""

    def __init__(self, path: str, k: int, m: int, output: Optional[str] = None, verbose: bool = False) -> None:
        super().__init__('sample', verbose, output)
        self.path = path
        self.k = k
        self.m = m

    def execute(self) -> None:
        polyhedron = read_kpoly(self.path)
        space = sample_polyhedron(polyhedron, self.k, self.m)
        if self.output is None:
            click.echo(dump_fms(space), nl=False)
            return
        write_fms(space, self.output)
        self.log_success(f'Wrote a {space.size}-point sample to {self.output}')


def sample_command() -> click.Command:
    """Create the sample command for Click."""

    @click.command()
    @click.argument('path', type=click.Path(dir_okay=False))
    @click.option('-k', 'k', type=int, required=True, help='Number of sample points')
    @click.option(
        '-m', 'm', type=int, default=DEFAULT_STEINER_POINTS, show_default=True, help='Steiner points per edge'
    )
    @click.option('--output', '-o', type=click.Path(dir_okay=False), help='.fms file (default: standard output)')
    @click.pass_obj
    def sample(obj: Optional[dict], path: str, k: int, m: int, output: Optional[str]) -> None:
        """Farthest-point sample of a .kpoly surface, written as an .fms distance matrix."""
        try:
            SampleCommand(path, k, m, output, verbose=bool(obj and obj.get('verbose'))).execute()
        except KPolyError as e:
            e.handle()

    return sample

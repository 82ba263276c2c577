import logging
from typing import Optional

import click

from ..core.formats import read_fms
from ..core.gh_metric import gh_bounds
from ..utils.constants import DEFAULT_GH_RESTARTS, DEFAULT_GH_SIZE_LIMIT
from ..utils.error_handler import KPolyError
from .base import KPolyCommand

logger = logging.getLogger(__name__)


class GHCommand(KPolyCommand):
    """Bounds the Gromov-Hausdorff distance between two finite metric spaces."""

    def __init__(
        self,
        first: str,
        second: str,
        size_limit: int,
        restarts: int,
        seed: int,
        exact: Optional[bool],
        verbose: bool = False,
    ) -> None:
        super().__init__('gh', verbose)
        self.first = first
        self.second = second
        self.size_limit = size_limit
        self.restarts = restarts
        self.seed = seed
        self.exact = exact

    def execute(self) -> None:
        X, Y = read_fms(self.first), read_fms(self.second)
        bounds = gh_bounds(X, Y, self.size_limit, self.restarts, self.seed, self.exact)
        parts = [f'lower={bounds.lower!r}']
        if bounds.exact is not None:
            parts.append(f'exact={bounds.exact!r}')
        parts.append(f'upper={bounds.upper!r}')
        click.echo(', '.join(parts))
        click.echo('certificate: ' + ' '.join(f'{i}-{j}' for i, j in bounds.certificate))


def gh_command() -> click.Command:
    """Create the gh command for Click."""

    @click.command()
    @click.argument('first', type=click.Path(dir_okay=False))
    @click.argument('second', type=click.Path(dir_okay=False))
    @click.option(
        '--size-limit', type=int, default=DEFAULT_GH_SIZE_LIMIT, show_default=True, help='Largest size for exact search'
    )
    @click.option('--restarts', type=int, default=DEFAULT_GH_RESTARTS, show_default=True, help='Random restarts')
    @click.option('--seed', type=int, default=0, show_default=True, help='Seed of the restart streams')
    @click.option('--exact/--no-exact', default=None, help='Force or skip the exact search (default: when affordable)')
    @click.pass_obj
    def gh(
        obj: Optional[dict], first: str, second: str, size_limit: int, restarts: int, seed: int, exact: Optional[bool]
    ) -> None:
        """Lower bound, upper bound with certificate and exact Gromov-Hausdorff distance of two .fms files."""
        try:
            verbose = bool(obj and obj.get('verbose'))
            GHCommand(first, second, size_limit, restarts, seed, exact, verbose=verbose).execute()
        except KPolyError as e:
            e.handle()

    return gh

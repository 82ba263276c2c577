import logging
from typing import Optional

import click

from ..core.formats import parse_anchor, read_kpoly
from ..core.metric_graph import distance
from ..utils.constants import DEFAULT_STEINER_POINTS
from ..utils.error_handler import KPolyError
from .base import KPolyCommand

logger = logging.getLogger(__name__)


class DistanceCommand(KPolyCommand):
    """Approximates the intrinsic distance between two anchored points."""

    def __init__(self, path: str, source: str, target: str, m: int, verbose: bool = False) -> None:
        super().__init__('distance', verbose)
        self.path = path
        self.source = source
        self.target = target
        self.m = m

    def execute(self) -> None:
        polyhedron = read_kpoly(self.path)
        x = parse_anchor(polyhedron, self.source)
        y = parse_anchor(polyhedron, self.target)
        click.echo(f'distance: {distance(polyhedron, x, y, self.m)!r}')


def distance_command() -> click.Command:
    """Create the distance command for Click."""

    @click.command()
    @click.argument('path', type=click.Path(dir_okay=False))
    @click.option('--from', 'source', required=True, help='Start anchor, e.g. vertex:0 or face:3:1:1:1')
    @click.option('--to', 'target', required=True, help='End anchor')
    @click.option(
        '-m', 'm', type=int, default=DEFAULT_STEINER_POINTS, show_default=True, help='Steiner points per edge'
    )
    @click.pass_obj
    def distance_cmd(obj: Optional[dict], path: str, source: str, target: str, m: int) -> None:
        """Graph approximation of the distance between two points of a .kpoly surface."""
        try:
            DistanceCommand(path, source, target, m, verbose=bool(obj and obj.get('verbose'))).execute()
        except KPolyError as e:
            e.handle()

    return distance_cmd

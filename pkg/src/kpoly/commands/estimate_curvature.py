import logging
from typing import Optional

import click

from ..core.curvature_estimators import estimate_curvature_bounds
from ..core.formats import parse_anchor, read_kpoly
from ..utils.error_handler import KPolyError
from ..utils.models import CurvatureRow
from .base import KPolyCommand

logger = logging.getLogger(__name__)


def parse_deltas(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise KPolyError(code=104, message=f'Cannot parse scales {text!r}', original_error=e)


class CurvatureCommand(KPolyCommand):
    """Tabulates excess-ratio curvature estimates at a point over shrinking scales."""

    def __init__(
        self,
        path: str,
        point: str,
        deltas: str,
        angle_floor: float,
        samples: int,
        seed: int,
        workers: int,
        output: Optional[str] = None,
        verbose: bool = False,
    ) -> None:
        super().__init__('curvature', verbose, output)
        self.path = path
        self.point = point
        self.deltas = parse_deltas(deltas)
        self.angle_floor = angle_floor
        self.samples = samples
        self.seed = seed
        self.workers = workers

    def execute(self) -> None:
        polyhedron = read_kpoly(self.path)
        x = parse_anchor(polyhedron, self.point)
        rows = estimate_curvature_bounds(
            polyhedron, x, self.deltas, self.angle_floor, self.samples, self.seed, self.workers
        )
        self.write_table(rows, list(CurvatureRow.model_fields))


def curvature_command() -> click.Command:
    """Create the curvature command for Click."""

    @click.command()
    @click.argument('path', type=click.Path(dir_okay=False))
    @click.option('--point', required=True, help='Anchor of the point, e.g. vertex:0')
    @click.option('--deltas', required=True, help='Strictly decreasing scales, e.g. 0.2,0.1,0.05')
    @click.option('--angle-floor', type=float, default=0.2, show_default=True, help='Smallest admissible angle')
    @click.option('--samples', type=int, default=64, show_default=True, help='Triangles per scale')
    @click.option('--seed', type=int, default=0, show_default=True, help='Seed of the sample streams')
    @click.option('--workers', type=int, default=1, show_default=True, help='Threads evaluating candidates')
    @click.option('--output', '-o', type=click.Path(dir_okay=False), help='CSV file (default: standard output)')
    @click.pass_obj
    def curvature(
        obj: Optional[dict],
        path: str,
        point: str,
        deltas: str,
        angle_floor: float,
        samples: int,
        seed: int,
        workers: int,
        output: Optional[str],
    ) -> None:
        """Inf and sup of the excess ratio of small triangles around a point of a .kpoly surface."""
        try:
            cmd = CurvatureCommand(
                path, point, deltas, angle_floor, samples, seed, workers, output,
                verbose=bool(obj and obj.get('verbose')),
            )
            cmd.execute()
        except KPolyError as e:
            e.handle()

    return curvature

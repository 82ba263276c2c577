import logging
import re
from typing import Optional

import click

from ..core.approximation import (
    conical_net_experiment,
    convergence_experiment,
    get_oracle,
    replacement_experiment,
    semicontinuity_experiment,
)
from ..core.fixtures import FIXTURES, get_fixture
from ..utils.constants import DEFAULT_STEINER_POINTS
from ..utils.error_handler import KPolyError
from ..utils.models import ConicalNetRow, ConvergenceRow, ReplacementRow, SemicontinuityRow
from .base import KPolyCommand

logger = logging.getLogger(__name__)

MODES = ('convergence', 'replacement', 'semicontinuity', 'conical-net')


def parse_levels(text: str) -> list[int]:
    """Parse `L0-L1` (or a single level) into the inclusive list of levels."""
    match = re.fullmatch(r'\s*(\d+)\s*(?:-\s*(\d+)\s*)?', text)
    if not match:
        raise KPolyError(code=104, message=f'Cannot parse levels {text!r}', detail='Use L0-L1, e.g. 0-3.')
    first = int(match.group(1))
    last = int(match.group(2)) if match.group(2) is not None else first
    if last < first:
        raise KPolyError(code=104, message=f'Level range {text!r} is empty')
    return list(range(first, last + 1))


class ApproximateCommand(KPolyCommand):
    """Runs one of the polyhedral approximation experiments and writes its table."""

    def __init__(
        self,
        target: str,
        levels: str,
        samples: int,
        m: int,
        mode: str,
        kappa: float,
        scale: float,
        fixture: str,
        vertex: int,
        output: Optional[str] = None,
        verbose: bool = False,
    ) -> None:
        super().__init__('approximate', verbose, output)
        self.target = target
        self.levels = parse_levels(levels)
        self.samples = samples
        self.m = m
        self.mode = mode
        self.kappa = kappa
        self.scale = scale
        self.fixture = fixture
        self.vertex = vertex

    def execute(self) -> None:
        """Run the selected experiment.

        Raises:
            KPolyError: 800 when the semicontinuity inequality fails at some level.
        """
        if self.mode == 'semicontinuity':
            rows = semicontinuity_experiment(get_fixture(self.fixture), self.vertex, self.levels[-1])
            rows = [row for row in rows if row.level >= self.levels[0]]
            self.write_table(rows, list(SemicontinuityRow.model_fields))
            failed = [row.level for row in rows if not row.holds]
            if failed:
                raise KPolyError(code=800, message=f'Curvature at the marked vertex grew at levels {failed}')
            return

        oracle = get_oracle(self.target)
        if self.mode == 'convergence':
            self.write_table(
                convergence_experiment(oracle, self.levels, self.samples, self.m), list(ConvergenceRow.model_fields)
            )
        elif self.mode == 'replacement':
            self.write_table(
                replacement_experiment(oracle, self.levels, self.kappa, self.samples, self.m),
                list(ReplacementRow.model_fields),
            )
        else:
            self.write_table(
                conical_net_experiment(oracle, self.levels, self.kappa, self.scale), list(ConicalNetRow.model_fields)
            )


def approximate_command() -> click.Command:
    """Create the approximate command for Click."""

    @click.command()
    @click.option('--target', type=click.Choice(['sphere', 'torus']), default='sphere', show_default=True)
    @click.option('--levels', default='0-3', show_default=True, help='Refinement levels L0-L1')
    @click.option('--samples', type=int, default=42, show_default=True, help='Matched sample points')
    @click.option(
        '-m', 'm', type=int, default=DEFAULT_STEINER_POINTS, show_default=True, help='Steiner points per edge'
    )
    @click.option('--mode', type=click.Choice(MODES), default='convergence', show_default=True)
    @click.option('--kappa', type=float, default=1.0, show_default=True, help='Curvature of the replacement triangles')
    @click.option('--scale', type=float, default=0.5, show_default=True, help='Shrink factor of the conical-net mode')
    @click.option(
        '--fixture', type=click.Choice(sorted(FIXTURES)), default='cube', show_default=True,
        help='Polyhedron refined by the semicontinuity mode',
    )
    @click.option('--vertex', type=int, default=0, show_default=True, help='Marked vertex of the semicontinuity mode')
    @click.option('--output', '-o', type=click.Path(dir_okay=False), help='CSV file (default: standard output)')
    @click.pass_obj
    def approximate(
        obj: Optional[dict],
        target: str,
        levels: str,
        samples: int,
        m: int,
        mode: str,
        kappa: float,
        scale: float,
        fixture: str,
        vertex: int,
        output: Optional[str],
    ) -> None:
        """Polyhedral approximation experiments, one CSV row per level."""
        try:
            cmd = ApproximateCommand(
                target, levels, samples, m, mode, kappa, scale, fixture, vertex, output,
                verbose=bool(obj and obj.get('verbose')),
            )
            cmd.execute()
        except KPolyError as e:
            e.handle()

    return approximate

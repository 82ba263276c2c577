import logging

import click

from .commands.approximate import approximate_command
from .commands.check_polyhedron import check_command
from .commands.estimate_curvature import curvature_command
from .commands.gauss_bonnet import gauss_bonnet_command
from .commands.gh_distance import gh_command
from .commands.measure_distance import distance_command
from .commands.sample_metric import sample_command
from .commands.smooth_cone import smooth_command
from .utils.error_handler import KPolyError

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(levelname)s: %(message)s')
logger = logging.getLogger(__name__)


class KPolyCLI(click.Group):
    """Custom command group for better error handling.

    Errors that escape a subcommand are logged here. A KPolyError exits with its own
    code; anything else is unexpected and exits with 1.
    """

    def invoke(self, ctx: click.Context) -> None:
        try:
            return super().invoke(ctx)
        except KPolyError as e:
            e.log()
            ctx.exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as e:
            # Unexpected errors
            logger.error(str(e))
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug('Unexpected error:', exc_info=e)
            ctx.exit(1)


@click.group(cls=KPolyCLI)
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')
@click.pass_context
def main(ctx: click.Context, verbose: bool) -> None:
    """kpoly: polyhedral surfaces of curvature bounded below.

    Checks and measures kappa-polyhedra, bounds Gromov-Hausdorff distances,
    runs approximation experiments, smooths cone points and estimates
    curvature from small triangles. Tables are written as CSV.
    """
    logging.getLogger('kpoly').setLevel(logging.DEBUG if verbose else logging.INFO)
    ctx.obj = {'verbose': verbose}


# Add commands directly
main.add_command(check_command(), name='check')
main.add_command(gauss_bonnet_command(), name='gauss-bonnet')
main.add_command(distance_command(), name='distance')
main.add_command(gh_command(), name='gh')
main.add_command(sample_command(), name='sample')
main.add_command(approximate_command(), name='approximate')
main.add_command(smooth_command(), name='smooth')
main.add_command(curvature_command(), name='curvature')

if __name__ == '__main__':
    main()

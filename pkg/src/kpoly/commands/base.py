import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Optional, Sequence

import click
from pydantic import BaseModel

from ..core.formats import write_csv
from ..utils.error_handler import KPolyError

logger = logging.getLogger(__name__)


class KPolyCommand:
    """Base class for kpoly subcommands.

    Subclasses implement `execute`. Result tables go to `output` (standard output
    when unset) and status lines go through click.
    """

    def __init__(self, command_name: str, verbose: bool = False, output: Optional[str] = None) -> None:
        """Initialize the command.

        Args:
            command_name: Name of the subcommand.
            verbose: Whether verbose logging is on.
            output: Path of the result file, or None for standard output.
        """
        logger.debug(f"Initializing KPolyCommand for '{command_name}'")
        self.command_name = command_name
        self.verbose = verbose
        self.output = Path(output) if output and output != '-' else None

    def execute(self) -> None:
        raise NotImplementedError

    @contextmanager
    def open_output(self) -> Iterator[IO[str]]:
        """Yield the stream that results are written to."""
        if self.output is None:
            yield click.get_text_stream('stdout')
            return
        try:
            with open(self.output, 'w', encoding='utf-8', newline='') as stream:
                yield stream
        except OSError as e:
            raise KPolyError(code=200, message=f'Cannot write {self.output}', original_error=e)
        logger.debug(f'Wrote {self.output}')

    def write_table(self, rows: Sequence[BaseModel], header: Sequence[str]) -> None:
        with self.open_output() as stream:
            write_csv(rows, header, stream)
        if self.output is not None:
            self.log_success(f'Wrote {len(rows)} rows to {self.output}')

    def log_success(self, message: str) -> None:
        """Print a status line in green on stderr."""
        click.echo(click.style(message, fg='green'), err=True)

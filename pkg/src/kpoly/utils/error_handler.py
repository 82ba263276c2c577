import logging
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar, Optional

import click

logger = logging.getLogger(__name__)


class MessageType(Enum):
    """Severity of a reported problem.

    ERROR stops the command, WARNING and INFO are printed and the command goes on.
    """

    ERROR = 'error'
    WARNING = 'warning'
    INFO = 'info'


@dataclass
class ErrorContext:
    """Everything known about a failure at the point it is raised.

    Attributes:
        code: Numeric code, a key of `KPolyError.ERROR_MAP`.
        message: One-line description for the user.
        type: Severity.
        detail: Hint printed under the message.
        debug_messages: Lines printed only with --verbose.
        original_error: The exception being translated, if any.
        where: Location in the input (a triangle edge, a file line).
    """

    code: int
    message: str
    type: MessageType = MessageType.ERROR
    detail: Optional[str] = None
    debug_messages: list[str] = field(default_factory=list)
    original_error: Optional[Exception] = None
    where: Optional[str] = None


class KPolyError(Exception):
    """The one exception type raised by kpoly.

    Codes are grouped by hundreds:
    - 1xx: command-line arguments
    - 2xx: files and text formats
    - 3xx: model geometry domain
    - 4xx: polyhedron structure
    - 5xx: metric spaces and Gromov-Hausdorff bounds
    - 6xx: cone smoothing
    - 7xx: curvature estimation
    - 8xx: invariant violations

    Example:
        raise KPolyError(
            code=301,
            message='Sides (1, 1, 3) violate the triangle inequality',
            detail='Each side must be shorter than the sum of the other two.',
        )
    """

    ERROR_MAP: ClassVar[dict[int, str]] = {
        104: 'Invalid Argument Value',
        200: 'File Access Error',
        201: 'File Not Found',
        204: 'Invalid File Format',
        206: 'Invalid Anchor Syntax',
        300: 'General Geometry Error',
        301: 'Invalid Triangle',
        302: 'Degenerate Input',
        303: 'Parameter Out Of Range',
        304: 'Spherical Size Overflow',
        400: 'Invalid Triangle Id',
        401: 'Open Edge',
        402: 'Edge Length Mismatch',
        403: 'Non-Manifold Link',
        404: 'Unknown Vertex',
        405: 'Invalid Anchor',
        406: 'Geodesic Hits A Vertex',
        501: 'Shape Mismatch',
        502: 'Size Limit Exceeded',
        503: 'Invalid Metric',
        504: 'Invalid Correspondence',
        600: 'General Smoothing Error',
        601: 'No Root In Bracket',
        602: 'Phase Exceeds Tau',
        603: 'Zero Input',
        604: 'Knot Evaluation',
        605: 'Warp Domain Error',
        701: 'Insufficient Samples',
        702: 'Scale Too Large',
        703: 'Degenerate Triangle Sample',
        800: 'Invariant Violated',
        801: 'Alexandrov Condition Failed',
        802: 'Gauss-Bonnet Residual Too Large',
        803: 'Bound Ordering Violated',
    }

    STYLES: ClassVar[dict[MessageType, str]] = {
        MessageType.ERROR: 'red',
        MessageType.WARNING: 'yellow',
        MessageType.INFO: 'blue',
    }

    def __init__(
        self,
        code: int,
        message: Optional[str] = None,
        type: MessageType = MessageType.ERROR,
        detail: Optional[str] = None,
        debug_messages: Optional[list[str]] = None,
        original_error: Optional[Exception] = None,
        where: Optional[str] = None,
    ) -> None:
        self.context = ErrorContext(
            code=code,
            message=message or self.title(code),
            type=type,
            detail=detail,
            debug_messages=list(debug_messages or []),
            original_error=original_error,
            where=where,
        )
        super().__init__(str(code))

    @classmethod
    def title(cls, code: int) -> str:
        return cls.ERROR_MAP.get(code, 'Unknown Error')

    @property
    def exit_code(self) -> int:
        """Process exit code: 4 for size limits, 3 for invariant violations, 2 otherwise."""
        if self.context.code == 502:
            return 4
        if 800 <= self.context.code < 900:
            return 3
        return 2

    def log(self) -> None:
        """Print the error on stderr, with debug lines when verbose."""
        ctx = self.context
        line = f'[{ctx.code}] {self.title(ctx.code)}'
        if ctx.message != self.title(ctx.code):
            line += f' - {ctx.message}'
        if ctx.where:
            line = f'{ctx.where}: {line}'
        click.secho(f'{ctx.type.value.upper()}: {line}', fg=self.STYLES[ctx.type], err=True)
        if ctx.detail:
            click.echo(ctx.detail, err=True)

        if not logger.isEnabledFor(logging.DEBUG):
            return
        extra = list(ctx.debug_messages)
        if ctx.original_error is not None:
            extra.append(f'caused by {type(ctx.original_error).__name__}: {ctx.original_error}')
        for text in extra:
            click.echo(f'DEBUG: {text}', err=True)

    def handle(self) -> None:
        """Log, then exit with `exit_code` unless this is only a warning or a note."""
        self.log()
        if self.context.type is MessageType.ERROR:
            sys.exit(self.exit_code)

    def __str__(self) -> str:
        text = f'[{self.context.code}] {self.context.message}'
        return f'{text}: {self.context.detail}' if self.context.detail else text

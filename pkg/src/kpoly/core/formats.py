"""Text formats: `.kpoly` polyhedra, `.fms` metric spaces, anchors, CSV tables and YAML reports.

A `.kpoly` file reads

    # optional comments
    kpoly <kappa> <num_triangles>
    tri <id> <a> <b> <c>
    glue <t1> <e1> <t2> <e2> [1]

where the trailing `1` glues the edges start-to-start. A `.fms` file is a header
`fms <n>` followed by n rows of n distances.
"""

import csv
import logging
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel
from ruamel.yaml import YAML

from ..utils.constants import FLOAT_FORMAT
from ..utils.error_handler import KPolyError
from ..utils.models import FormulaAudit
from .gh_metric import FiniteMetricSpace
from .kpolyhedron import GluingMap, KPolyhedron, SurfacePoint, build, point_from_weights, validate_anchor

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_float(x: float) -> str:
    return format(float(x), FLOAT_FORMAT)


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    """Non-empty, comment-stripped lines as (line number, tokens)."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split('#', 1)[0].split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _number(token: str, kind: type, number: int, source: str) -> Union[int, float]:
    try:
        return kind(token)
    except ValueError:
        raise KPolyError(
            code=204,
            message=f'{source}:{number}: expected {kind.__name__}, got {token!r}',
        )


def read_text(path: PathLike) -> str:
    """Read a UTF-8 text file, mapping a missing file to error 201."""
    path = Path(path)
    if not path.is_file():
        raise KPolyError(code=201, message=f'No such file: {path}')
    try:
        return path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise KPolyError(code=200, message=f'Cannot read {path}', original_error=e)


def parse_kpoly(text: str, source: str = '<string>') -> KPolyhedron:
    """Parse the `.kpoly` format.

    Raises:
        KPolyError: 204 for malformed lines, missing or repeated triangle ids;
            structural errors of `build` propagate.
    """
    lines = _content_lines(text)
    if not lines or lines[0][1][0] != 'kpoly' or len(lines[0][1]) != 3:
        raise KPolyError(code=204, message=f"{source}: the first line must be 'kpoly <kappa> <num_triangles>'")
    number, header = lines[0]
    kappa = _number(header[1], float, number, source)
    count = _number(header[2], int, number, source)
    if count < 1:
        raise KPolyError(code=204, message=f'{source}:{number}: a polyhedron needs at least one triangle')

    sides: dict[int, tuple[float, float, float]] = {}
    records = []
    for number, tokens in lines[1:]:
        keyword = tokens[0]
        if keyword == 'tri' and len(tokens) == 5:
            tri_id = _number(tokens[1], int, number, source)
            if tri_id in sides or not 0 <= tri_id < count:
                raise KPolyError(
                    code=204, message=f'{source}:{number}: triangle id {tri_id} is repeated or out of range'
                )
            sides[tri_id] = tuple(_number(t, float, number, source) for t in tokens[2:])
        elif keyword == 'glue' and len(tokens) in (5, 6):
            record = [_number(t, int, number, source) for t in tokens[1:]]
            if len(record) == 5 and record[4] not in (0, 1):
                raise KPolyError(code=204, message=f'{source}:{number}: the orientation flag must be 0 or 1')
            records.append(record)
        else:
            raise KPolyError(code=204, message=f'{source}:{number}: cannot parse {" ".join(tokens)!r}')

    if len(sides) != count:
        missing = sorted(set(range(count)) - set(sides))
        raise KPolyError(code=204, message=f'{source}: missing triangles {missing}')
    logger.debug(f'{source}: {count} triangles, {len(records)} gluings, kappa={kappa}')
    return build(kappa, [sides[t] for t in range(count)], GluingMap.from_pairs(records))


def read_kpoly(path: PathLike) -> KPolyhedron:
    return parse_kpoly(read_text(path), str(path))


def dump_kpoly(polyhedron: KPolyhedron) -> str:
    """Serialise a polyhedron; parsing the output rebuilds the same surface."""
    lines = [f'kpoly {format_float(polyhedron.kappa)} {polyhedron.num_faces}']
    for t, triangle in enumerate(polyhedron.triangles):
        lines.append(f'tri {t} ' + ' '.join(format_float(x) for x in triangle.sides))
    for ((t1, e1), (t2, e2)), same in zip(polyhedron.gluing.pairs, polyhedron.gluing.same_direction):
        lines.append(f'glue {t1} {e1} {t2} {e2}' + (' 1' if same else ''))
    return '\n'.join(lines) + '\n'


def write_kpoly(polyhedron: KPolyhedron, path: PathLike) -> None:
    Path(path).write_text(dump_kpoly(polyhedron), encoding='utf-8')


def parse_fms(text: str, source: str = '<string>') -> FiniteMetricSpace:
    """Parse the `.fms` format.

    Raises:
        KPolyError: 204 for a bad header or row; 503 when the matrix is not a metric.
    """
    lines = _content_lines(text)
    if not lines or lines[0][1][0] != 'fms' or len(lines[0][1]) != 2:
        raise KPolyError(code=204, message=f"{source}: the first line must be 'fms <n>'")
    number, header = lines[0]
    n = _number(header[1], int, number, source)
    rows = lines[1:]
    if n < 1 or len(rows) != n:
        raise KPolyError(code=204, message=f'{source}: expected {n} rows, found {len(rows)}')
    matrix = []
    for number, tokens in rows:
        if len(tokens) != n:
            raise KPolyError(code=204, message=f'{source}:{number}: expected {n} entries, found {len(tokens)}')
        matrix.append([_number(t, float, number, source) for t in tokens])
    return FiniteMetricSpace(np.array(matrix))


def read_fms(path: PathLike) -> FiniteMetricSpace:
    return parse_fms(read_text(path), str(path))


def dump_fms(space: FiniteMetricSpace) -> str:
    lines = [f'fms {space.size}']
    lines.extend(' '.join(format_float(x) for x in row) for row in space.d)
    return '\n'.join(lines) + '\n'


def write_fms(space: FiniteMetricSpace, path: PathLike) -> None:
    """Write a metric space as .fms text, mapping an unwritable path to error 200."""
    try:
        Path(path).write_text(dump_fms(space), encoding='utf-8')
    except OSError as e:
        raise KPolyError(code=200, message=f'Cannot write {path}', original_error=e)


def parse_anchor(polyhedron: KPolyhedron, text: str) -> SurfacePoint:
    """Parse `vertex:<id>`, `edge:<tri>:<edge>:<param>` or `face:<tri>:<w0>:<w1>:<w2>`.

    Face weights are barycentric-style weights over the corners, projected onto
    the model surface.

    Raises:
        KPolyError: 206 for malformed syntax, 405 for anchors off the polyhedron.
    """
    parts = text.strip().split(':')
    expected = {'vertex': 2, 'edge': 4, 'face': 5}
    if parts[0] not in expected or len(parts) != expected[parts[0]]:
        raise KPolyError(
            code=206,
            message=f'Cannot parse anchor {text!r}',
            detail='Use vertex:<id>, edge:<tri>:<edge>:<param> or face:<tri>:<w0>:<w1>:<w2>.',
        )
    try:
        if parts[0] == 'vertex':
            point = SurfacePoint.at_vertex(int(parts[1]))
        elif parts[0] == 'edge':
            point = SurfacePoint.on_edge(int(parts[1]), int(parts[2]), float(parts[3]))
        else:
            triangle = int(parts[1])
            if not 0 <= triangle < polyhedron.num_faces:
                raise KPolyError(code=405, message=f'{text}: no such triangle')
            point = point_from_weights(polyhedron, triangle, [float(w) for w in parts[2:]])
    except ValueError as e:
        raise KPolyError(code=206, message=f'Cannot parse anchor {text!r}', original_error=e)
    validate_anchor(polyhedron, point)
    return point


def write_csv(rows: Iterable[Union[BaseModel, Sequence]], header: Sequence[str], stream: IO[str]) -> None:
    """CSV with a header row; floats use 17 significant digits."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        values = [getattr(row, name) for name in header] if isinstance(row, BaseModel) else list(row)
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in values])


def _configure_yaml() -> YAML:
    yaml = YAML()
    yaml.default_flow_style = False
    yaml.explicit_start = False
    yaml.explicit_end = False
    return yaml


def write_audit_yaml(audit: FormulaAudit, stream: IO[str]) -> None:
    """Dump a formula audit as YAML."""
    _configure_yaml().dump(audit.model_dump(), stream)


def read_audit_yaml(stream: IO[str]) -> FormulaAudit:
    return FormulaAudit.model_validate(_configure_yaml().load(stream))

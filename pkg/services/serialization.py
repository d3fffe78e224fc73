"""
Serialization Service for the amplituhedron toolkit
Exact-rational JSON wire format, context files, CSV tables and atomic writes
"""

import csv
import io
import json
import logging
import os
import re
import tempfile
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Sequence

from config import Config
from errors import ContractError, DimensionError, ParseError, PositivityError
from models import GrassmannC, Matrix, PositiveZ, TwistorContext, YPoint
from services.exact_core import rank
from services.positivity import apply_map, certify_z, classify_c

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')


def parse_scalar(value: Any) -> Fraction:
    """Accept integers or 'p/q' / 'p' strings; decimal floats are rejected"""
    if isinstance(value, bool):
        raise ParseError(f"booleans are not scalars: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = RATIONAL_PATTERN.match(value)
        if match:
            numerator, denominator = match.groups()
            if denominator is not None and int(denominator) == 0:
                raise ParseError(f"zero denominator in {value!r}")
            return Fraction(int(numerator), int(denominator or 1))
    raise ParseError(f"not an exact rational: {value!r}")


def matrix_from_dict(data: Any, label: str = 'matrix') -> Matrix:
    if isinstance(data, list):
        data = {'entries': data}
    if not isinstance(data, dict) or 'entries' not in data:
        raise ParseError(f"{label} must be an object with 'entries'")
    entries = data['entries']
    if not isinstance(entries, list) or any(not isinstance(row, list) for row in entries):
        raise ParseError(f"{label} entries must be a list of rows")
    rows = [[parse_scalar(x) for x in row] for row in entries]
    cols = data.get('cols', len(rows[0]) if rows else 0)
    declared_rows = data.get('rows', len(rows))
    if declared_rows != len(rows) or any(len(row) != cols for row in rows):
        raise ParseError(f"{label} is declared {declared_rows}x{cols} but its entries do not match")
    try:
        return Matrix.of(rows, cols=cols)
    except DimensionError as e:
        raise ParseError(str(e))


def context_from_dict(data: Dict[str, Any], allow_large_n: bool = False,
                      max_n: Optional[int] = None) -> TwistorContext:
    """
    Build a certified context from its JSON object.

    Exactly one of C (then Y = C Z) or Y must be present. Z is certified by
    all of its maximal minors. n above max_n (Config.MAX_N by default) needs
    allow_large_n.
    """
    max_n = max_n if max_n is not None else Config.MAX_N
    if not isinstance(data, dict):
        raise ParseError("a context must be a JSON object")
    try:
        n, k, m = int(data['n']), int(data['k']), int(data['m'])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"context needs integer n, k, m: {e}")
    if k < 1 or m < 1 or n < k + m:
        raise ContractError(f"need k >= 1, m >= 1 and n >= k+m, got n={n}, k={k}, m={m}")
    if n > max_n and not allow_large_n:
        raise ContractError(f"n={n} exceeds the limit {max_n}; pass --allow-large-n")
    if ('C' in data) == ('Y' in data):
        raise ParseError("a context carries exactly one of 'C' or 'Y'")

    z_matrix = matrix_from_dict(data.get('Z'), 'Z')
    if (z_matrix.rows, z_matrix.cols) != (n, k + m):
        raise DimensionError(f"Z must be {n}x{k + m}, got {z_matrix.rows}x{z_matrix.cols}")
    if not certify_z(z_matrix):
        raise PositivityError("Z has a maximal minor that is not strictly positive")
    z = PositiveZ(n=n, k=k, m=m, matrix=z_matrix, certified=True)

    if 'C' in data:
        c_matrix = matrix_from_dict(data['C'], 'C')
        if (c_matrix.rows, c_matrix.cols) != (k, n):
            raise DimensionError(f"C must be {k}x{n}, got {c_matrix.rows}x{c_matrix.cols}")
        c = GrassmannC(k=k, n=n, matrix=c_matrix, positivity_class=classify_c(c_matrix))
        return TwistorContext(z=z, y=apply_map(c, z), c=c)

    y_matrix = matrix_from_dict(data['Y'], 'Y')
    if (y_matrix.rows, y_matrix.cols) != (k, k + m):
        raise DimensionError(f"Y must be {k}x{k + m}, got {y_matrix.rows}x{y_matrix.cols}")
    if rank(y_matrix) != k:
        raise ContractError(f"Y has rank {rank(y_matrix)} < k={k}")
    return TwistorContext(z=z, y=YPoint(k=k, m=m, matrix=y_matrix))


def context_to_dict(ctx: TwistorContext) -> Dict[str, Any]:
    return ctx.to_dict()


def dumps(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline"""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e}")


def read_context(path: str, allow_large_n: bool = False, max_n: Optional[int] = None) -> TwistorContext:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}")
    return context_from_dict(loads(text), allow_large_n=allow_large_n, max_n=max_n)


def write_text_atomic(path: str, text: str) -> str:
    """Write to a temporary file beside the target, then rename over it"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix='.tmp-', dir=directory)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug("wrote %s (%d bytes)", path, len(text))
    return path


def write_json_atomic(path: str, data: Any) -> str:
    return write_text_atomic(path, dumps(data))


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()

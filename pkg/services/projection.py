"""
Projection Service for the amplituhedron toolkit
Exact coordinates of Z_i in the quotient V_Y, read off by twistor functionals
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import List, Sequence, Tuple

from errors import DegeneratePointError
from models import TwistorContext
from services.exact_core import determinant

logger = logging.getLogger(__name__)


def _unit(size: int, position: int) -> List[Fraction]:
    return [Fraction(int(j == position)) for j in range(size)]


def projection_basis(ctx: TwistorContext) -> Tuple[Tuple[int, ...], Fraction]:
    """
    Lexicographically first m unit vectors completing Y to a basis.

    Returns the 0-based positions and det(Y; E).
    """
    cached = ctx.cache.get('projection_basis')
    if cached is not None:
        return cached
    width = ctx.k + ctx.m
    y_rows = [list(row) for row in ctx.y.matrix.entries]
    for positions in combinations(range(width), ctx.m):
        base = determinant(y_rows + [_unit(width, p) for p in positions])
        if base != 0:
            ctx.cache['projection_basis'] = (positions, base)
            return positions, base
    raise DegeneratePointError("Y has rank below k; no quotient basis exists")


def project(ctx: TwistorContext, vector: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Coordinates b with vector = sum_j b_j e_{E_j} modulo the row space of Y"""
    positions, base = projection_basis(ctx)
    width = ctx.k + ctx.m
    y_rows = [list(row) for row in ctx.y.matrix.entries]
    coordinates = []
    for j in range(ctx.m):
        rows = [_unit(width, p) for p in positions]
        rows[j] = [Fraction(x) for x in vector]
        coordinates.append(determinant(y_rows + rows) / base)
    return tuple(coordinates)


def project_row(ctx: TwistorContext, i: int) -> Tuple[Fraction, ...]:
    """Projected coordinates of Z_i (1-based), cached on the context"""
    table = ctx.cache.setdefault('projected', {})
    if i not in table:
        table[i] = project(ctx, ctx.z.row(i))
    return table[i]

"""
Exact Core Service for the amplituhedron toolkit
Rational linear algebra (fraction-free Bareiss) and the window enumerators
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm
from typing import List, Optional, Sequence, Tuple, Union

from errors import ContractError, DimensionError
from models import Matrix

logger = logging.getLogger(__name__)

Rows = Sequence[Sequence[Fraction]]
MatrixLike = Union[Matrix, Rows]


def _rows_of(m: MatrixLike) -> List[List[Fraction]]:
    if isinstance(m, Matrix):
        return [list(row) for row in m.entries]
    return [[Fraction(x) for x in row] for row in m]


def sign(x) -> int:
    return (x > 0) - (x < 0)


def integer_row(row: Sequence[Fraction]) -> Tuple[List[int], int]:
    """Scale a rational row to integers; returns (ints, scale) with ints = scale * row"""
    scale = 1
    for x in row:
        scale = lcm(scale, Fraction(x).denominator)
    return [int(Fraction(x) * scale) for x in row], scale


def bareiss_determinant(rows: List[List[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination; rows are consumed"""
    size = len(rows)
    if size == 0:
        return 1
    parity = 1
    previous = 1
    for k in range(size - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, size):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    parity = -parity
                    break
            else:
                return 0
        pivot = rows[k][k]
        pivot_row = rows[k]
        for i in range(k + 1, size):
            row = rows[i]
            lead = row[k]
            for j in range(k + 1, size):
                row[j] = (row[j] * pivot - lead * pivot_row[j]) // previous
        previous = pivot
    return parity * rows[size - 1][size - 1]


def determinant_of_scaled(scaled_rows: Sequence[Tuple[List[int], int]]) -> Fraction:
    """Determinant from rows already cleared by integer_row"""
    scale = 1
    for _, s in scaled_rows:
        scale *= s
    return Fraction(bareiss_determinant([list(ints) for ints, _ in scaled_rows]), scale)


def determinant(m: MatrixLike) -> Fraction:
    """Exact determinant of a square matrix"""
    rows = _rows_of(m)
    size = len(rows)
    if isinstance(m, Matrix) and m.rows != m.cols:
        raise DimensionError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    if any(len(row) != size for row in rows):
        raise DimensionError(f"determinant needs a square matrix, got {size} rows of widths "
                             f"{sorted({len(row) for row in rows})}")
    return determinant_of_scaled([integer_row(row) for row in rows])


def rank(m: MatrixLike) -> int:
    """Exact rank by Gaussian elimination over the rationals"""
    rows = _rows_of(m)
    if not rows:
        return 0
    width = len(rows[0])
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][col] != 0:
                factor = rows[i][col] / rows[r][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve(m: MatrixLike, rhs: Sequence[Fraction]) -> Optional[Tuple[Fraction, ...]]:
    """
    Solve m x = rhs exactly.

    Args:
        m: coefficient matrix, possibly non-square
        rhs: right-hand side, one entry per row of m

    Returns:
        The unique solution, or None when the system is inconsistent or underdetermined
    """
    rows = _rows_of(m)
    if len(rows) != len(rhs):
        raise DimensionError(f"{len(rows)} equations but {len(rhs)} right-hand sides")
    unknowns = len(rows[0]) if rows else 0
    augmented = [row + [Fraction(b)] for row, b in zip(rows, rhs)]
    r = 0
    for col in range(unknowns):
        pivot = next((i for i in range(r, len(augmented)) if augmented[i][col] != 0), None)
        if pivot is None:
            return None
        augmented[r], augmented[pivot] = augmented[pivot], augmented[r]
        lead = augmented[r][col]
        augmented[r] = [x / lead for x in augmented[r]]
        for i in range(len(augmented)):
            if i != r and augmented[i][col] != 0:
                factor = augmented[i][col]
                augmented[i] = [a - factor * b for a, b in zip(augmented[i], augmented[r])]
        r += 1
    if any(row[-1] != 0 for row in augmented[r:]):
        return None
    return tuple(augmented[i][-1] for i in range(unknowns))


def matmul(a: MatrixLike, b: MatrixLike) -> Matrix:
    left, right = _rows_of(a), _rows_of(b)
    inner = len(right)
    if any(len(row) != inner for row in left):
        raise DimensionError(f"cannot multiply: inner dimensions differ ({inner} rows on the right)")
    width = len(right[0]) if right else (b.cols if isinstance(b, Matrix) else 0)
    product = [
        [sum((row[t] * right[t][j] for t in range(inner)), Fraction(0)) for j in range(width)]
        for row in left
    ]
    return Matrix.of(product, cols=width)


def transpose(a: MatrixLike) -> Matrix:
    rows = _rows_of(a)
    width = len(rows[0]) if rows else (a.cols if isinstance(a, Matrix) else 0)
    return Matrix.of([[row[j] for row in rows] for j in range(width)], cols=len(rows))


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting seq; 0 when seq has a repeat"""
    if len(set(seq)) != len(seq):
        return 0
    items = list(seq)
    parity = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                parity = -parity
    return parity


def plucker(m: Matrix, cols: Sequence[int]) -> Fraction:
    """Maximal minor on the 1-based ascending column list cols"""
    cols = tuple(cols)
    if len(cols) != m.rows:
        raise ContractError(f"plucker needs {m.rows} columns, got {len(cols)}")
    if any(b <= a for a, b in zip(cols, cols[1:])):
        raise ContractError(f"plucker columns must be strictly ascending: {cols}")
    if any(c < 1 or c > m.cols for c in cols):
        raise ContractError(f"plucker columns out of range 1..{m.cols}: {cols}")
    return determinant([[row[c - 1] for c in cols] for row in m.entries])


def plucker_signed(m: Matrix, cols: Sequence[int]) -> Fraction:
    """Antisymmetric extension of plucker to unsorted or repeating lists"""
    cols = tuple(cols)
    if len(cols) != m.rows:
        raise ContractError(f"plucker_signed needs {m.rows} columns, got {len(cols)}")
    parity = permutation_sign(cols)
    if parity == 0:
        return Fraction(0)
    return parity * plucker(m, sorted(cols))


def binomial(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


@lru_cache(maxsize=None)
def pair_windows(lo: int, hi: int, r: int) -> Tuple[Tuple[int, ...], ...]:
    """
    Lists (i_1, i_1+1, ..., i_r, i_r+1) inside [lo, hi] with i_{j+1} >= i_j + 2.

    Emitted in lexicographic order of the starting indices.
    """
    if r == 0:
        return ((),)
    found = []
    for start in range(lo, hi - 2 * r + 2):
        for rest in pair_windows(start + 2, hi, r - 1):
            found.append((start, start + 1) + rest)
    return tuple(found)


def window_lists_even(n: int, m: int) -> List[Tuple[int, ...]]:
    """Type-(a) windows followed by the wrapped type-(b) lists (J, n, 1)"""
    if m < 2 or m % 2:
        raise ContractError(f"window_lists_even needs an even m >= 2, got {m}")
    if n < m:
        raise ContractError(f"window_lists_even needs n >= m, got n={n}, m={m}")
    half = m // 2
    lists = list(pair_windows(1, n, half))
    lists.extend(j + (n, 1) for j in pair_windows(2, n - 1, half - 1))
    return lists


def window_lists_odd(n: int, m: int) -> List[Tuple[int, ...]]:
    if m < 1 or m % 2 == 0:
        raise ContractError(f"window_lists_odd needs an odd m >= 1, got {m}")
    if n < m + 1:
        raise ContractError(f"window_lists_odd needs n >= m+1, got n={n}, m={m}")
    return list(pair_windows(1, n, (m + 1) // 2))


def pair_decomposition(indices: Sequence[int]) -> Optional[List[Tuple[int, int]]]:
    """Split a sorted index set into consecutive pairs, pairing each block from the left"""
    items = sorted(indices)
    if len(items) % 2:
        return None
    pairs = []
    for a, b in zip(items[0::2], items[1::2]):
        if b != a + 1:
            return None
        pairs.append((a, b))
    return pairs


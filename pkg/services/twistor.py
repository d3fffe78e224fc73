"""
Twistor Service for the amplituhedron toolkit
Twistor coordinates, the Cauchy-Binet cross-check, coarse boundary signs,
sign-flip patterns and the C-/Z-equation residuals
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import List, Sequence, Tuple

from errors import ContractError
from models import (CoarseBoundaryReport, CoarseWindowResult, ForbiddenPatternResult,
                    SignSequence, TwistorContext)
from services.exact_core import (determinant, determinant_of_scaled, integer_row, pair_windows,
                                 permutation_sign, plucker, plucker_signed, sign)

logger = logging.getLogger(__name__)


def _scaled_rows(ctx: TwistorContext):
    """Integer-cleared Y rows and Z rows, computed once per context"""
    cached = ctx.cache.get('scaled')
    if cached is None:
        y_rows = [integer_row(row) for row in ctx.y.matrix.entries]
        z_rows = [integer_row(row) for row in ctx.z.matrix.entries]
        cached = ctx.cache['scaled'] = (y_rows, z_rows)
    return cached


def _check_indices(ctx: TwistorContext, indices: Sequence[int], length: int):
    if len(indices) != length:
        raise ContractError(f"expected {length} indices, got {len(indices)}: {tuple(indices)}")
    if any(i < 1 or i > ctx.n for i in indices):
        raise ContractError(f"indices must lie in 1..{ctx.n}: {tuple(indices)}")


def twistor(ctx: TwistorContext, indices: Sequence[int]) -> Fraction:
    """<Y, i_1, ..., i_m>: determinant of the Y rows stacked over the chosen Z rows"""
    indices = tuple(indices)
    _check_indices(ctx, indices, ctx.m)
    parity = permutation_sign(indices)
    if parity == 0:
        return Fraction(0)
    key = tuple(sorted(indices))
    table = ctx.cache.setdefault('twistor', {})
    value = table.get(key)
    if value is None:
        y_rows, z_rows = _scaled_rows(ctx)
        value = table[key] = determinant_of_scaled(y_rows + [z_rows[i - 1] for i in key])
    return parity * value


def twistor_of_vectors(ctx: TwistorContext, vectors: Sequence[Sequence[Fraction]]) -> Fraction:
    """det(Y_1, ..., Y_k, v_1, ..., v_m) for arbitrary vectors v"""
    if len(vectors) != ctx.m:
        raise ContractError(f"expected {ctx.m} vectors, got {len(vectors)}")
    y_rows, _ = _scaled_rows(ctx)
    return determinant_of_scaled(y_rows + [integer_row(v) for v in vectors])


def maximal_z_minor(ctx: TwistorContext, indices: Sequence[int]) -> Fraction:
    """<i_1, ..., i_{k+m}> on Z alone"""
    _check_indices(ctx, indices, ctx.k + ctx.m)
    return determinant([ctx.z.row(i) for i in indices])


def twistor_via_cauchy_binet(ctx: TwistorContext, indices: Sequence[int]) -> Fraction:
    """sum over k-subsets J of p_J(C) <J, i_1, ..., i_m>"""
    if ctx.c is None:
        raise ContractError("the Cauchy-Binet expansion needs C")
    indices = tuple(indices)
    _check_indices(ctx, indices, ctx.m)
    total = Fraction(0)
    for cols in combinations(range(1, ctx.n + 1), ctx.k):
        if set(cols) & set(indices):
            continue
        p = plucker(ctx.c.matrix, cols)
        if p:
            total += p * maximal_z_minor(ctx, cols + indices)
    return total


def coarse_windows(n: int, k: int, m: int) -> List[Tuple[Tuple[int, ...], int]]:
    """Windows of the coarse boundary conditions with their sign prefactor"""
    if m % 2 == 0:
        half = m // 2
        found = [(window, 1) for window in pair_windows(1, n, half)]
        found.extend((j + (n, 1), (-1) ** (k + 1)) for j in pair_windows(2, n - 1, half - 1))
        return found
    r = (m + 1) // 2
    found = [((1,) + window, (-1) ** k) for window in pair_windows(2, n, r - 1)]
    found.extend((window + (n,), 1) for window in pair_windows(1, n - 1, r - 1))
    return found


def coarse_boundary_report(ctx: TwistorContext, strict: bool = False) -> CoarseBoundaryReport:
    """
    Evaluate every coarse boundary window.

    Per-window results are relative to the stored Y representative. The
    orientation is +1 when all windows hold as stored, -1 when all hold after
    flipping the global sign, 0 otherwise.
    """
    results = []
    for window, prefactor in coarse_windows(ctx.n, ctx.k, ctx.m):
        value = prefactor * twistor(ctx, window)
        s = sign(value)
        results.append(CoarseWindowResult(
            window=window,
            prefactor=prefactor,
            value=value,
            sign=s,
            satisfied=(s > 0) if strict else (s >= 0)
        ))
    signs = [w.sign for w in results]
    if strict:
        holds, holds_flipped = all(s > 0 for s in signs), all(s < 0 for s in signs)
    else:
        holds, holds_flipped = all(s >= 0 for s in signs), all(s <= 0 for s in signs)
    orientation = 1 if holds else (-1 if holds_flipped else 0)
    return CoarseBoundaryReport(
        windows=tuple(results),
        strict=strict,
        satisfied=holds,
        orientation=orientation,
        without_coarse_boundary=all(s != 0 for s in signs)
    )


def sign_flip_count(seq) -> int:
    """Sign changes along a sequence, ignoring zeros"""
    values = seq.values if isinstance(seq, SignSequence) else seq
    flips = 0
    previous = 0
    for v in values:
        if v == 0:
            continue
        if previous and v != previous:
            flips += 1
        previous = v
    return flips


def twistor_sequence(ctx: TwistorContext, b: Sequence[int]) -> SignSequence:
    """Signs of <Y, B, i> for i = 1..n, for any list B of length m-1"""
    b = tuple(b)
    _check_indices(ctx, b, ctx.m - 1)
    indices = tuple(range(1, ctx.n + 1))
    values = tuple(sign(twistor(ctx, b + (i,))) for i in indices)
    return SignSequence(values=values, source_window=b, indices=indices)


def is_pair_window(b: Sequence[int], n: int) -> bool:
    """b = (b_1, b_1+1, ..., b_s, b_s+1) ascending with b_{j+1} >= b_j + 2 inside [1, n]"""
    b = tuple(b)
    if len(b) % 2:
        return False
    return b in pair_windows(1, n, len(b) // 2)


def window_twistor_sequence(ctx: TwistorContext, b: Sequence[int]) -> SignSequence:
    """(<Y, B, i>)_i for m odd and B a union of adjacent pairs"""
    if ctx.m % 2 == 0:
        raise ContractError(f"window sequences need odd m, got {ctx.m}")
    if not is_pair_window(b, ctx.n):
        raise ContractError(f"B must be a union of disjoint ascending adjacent pairs in 1..{ctx.n}: {tuple(b)}")
    return twistor_sequence(ctx, b)


def sign_flip_windows(n: int, m: int) -> List[Tuple[int, ...]]:
    """All B windows of length m-1 (m odd)"""
    return list(pair_windows(1, n, (m - 1) // 2))


def boundary_anchored_windows(n: int, m: int) -> List[Tuple[int, ...]]:
    """B = (1, pairs) or (pairs, n) of length m-1, for even m"""
    if m % 2:
        raise ContractError(f"boundary-anchored windows need even m, got {m}")
    r = m // 2
    found = [(1,) + w for w in pair_windows(2, n, r - 1)]
    found.extend(w + (n,) for w in pair_windows(1, n - 1, r - 1))
    return found


def even_window_sequence(ctx: TwistorContext, b: Sequence[int]) -> SignSequence:
    """Experimental even-m sequence with a boundary-anchored B"""
    if tuple(b) not in boundary_anchored_windows(ctx.n, ctx.m):
        raise ContractError(f"B is not boundary anchored: {tuple(b)}")
    return twistor_sequence(ctx, b)


def lower_bound_flip_check(ctx: TwistorContext, b: Sequence[int]) -> bool:
    """For C strictly positive: at least k flips, or the sequence vanishes identically"""
    seq = twistor_sequence(ctx, b)
    return sign_flip_count(seq) >= ctx.k or not any(seq.values)


def forbidden_vanishing_check(seq: SignSequence) -> ForbiddenPatternResult:
    """
    Look for a zero flanked by equal nonzero signs, or two consecutive zeros.

    Positions whose index lies in the source window are dropped first;
    neighbours are then the adjacent surviving positions.
    """
    restricted = seq.restricted()
    values, indices = restricted.values, restricted.indices
    for p in range(1, len(values) - 1):
        if values[p] == 0 and values[p - 1] != 0 and values[p - 1] == values[p + 1]:
            return ForbiddenPatternResult(ok=False, pattern=1,
                                          indices=(indices[p - 1], indices[p], indices[p + 1]))
    for p in range(len(values) - 1):
        if values[p] == 0 and values[p + 1] == 0:
            return ForbiddenPatternResult(ok=False, pattern=2, indices=(indices[p], indices[p + 1]))
    return ForbiddenPatternResult(ok=True)


def c_equation_residual(ctx: TwistorContext, a: Sequence[int], b: Sequence[int]) -> Fraction:
    """sum_i p_{A,i}(C) <Y, B, i>"""
    if ctx.c is None:
        raise ContractError("the C-equations need C")
    if ctx.k < 1:
        raise ContractError("the C-equations need k >= 1")
    a, b = tuple(a), tuple(b)
    _check_indices(ctx, a, ctx.k - 1)
    _check_indices(ctx, b, ctx.m - 1)
    total = Fraction(0)
    for i in range(1, ctx.n + 1):
        p = plucker_signed(ctx.c.matrix, a + (i,))
        if p:
            total += p * twistor(ctx, b + (i,))
    return total


def z_equation_residual(ctx: TwistorContext, a: Sequence[int], b: Sequence[int]) -> Fraction:
    """sum_{i in A} (-1)^{#i} p_{A minus i}(W) <Y, B, i> with W the transpose of Z"""
    a, b = tuple(a), tuple(b)
    if len(a) != ctx.k + ctx.m + 1:
        raise ContractError(f"A must have k+m+1 = {ctx.k + ctx.m + 1} indices, got {len(a)}")
    if any(y <= x for x, y in zip(a, a[1:])):
        raise ContractError(f"A must be strictly ascending: {a}")
    _check_indices(ctx, a, len(a))
    _check_indices(ctx, b, ctx.m - 1)
    total = Fraction(0)
    for position, i in enumerate(a):
        value = twistor(ctx, b + (i,))
        if value:
            rest = a[:position] + a[position + 1:]
            total += (-1) ** position * maximal_z_minor(ctx, rest) * value
    return total


def twistor_with_replacement(ctx: TwistorContext, window: Sequence[int], position: int,
                             vector: Sequence[Fraction]) -> Fraction:
    """<Y, I> with the Z row at `position` replaced by an arbitrary vector"""
    y_rows, z_rows = _scaled_rows(ctx)
    rows = [z_rows[i - 1] for i in window]
    rows[position] = integer_row(vector)
    return determinant_of_scaled(y_rows + rows)

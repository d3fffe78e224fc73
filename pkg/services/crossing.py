"""
Crossing Service for the amplituhedron toolkit
Crossing numbers for odd m: origin-in-simplex tests, minimal cells, conjugate vertices
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Tuple

from errors import ContractError, DegenerateConfiguration, FlatnessError
from models import Cell, CrossingResult, HalfSpaceDiagnostic, RelationCheck, TwistorContext
from services.exact_core import (binomial, pair_decomposition, pair_windows, rank, sign, solve,
                                 window_lists_odd)
from services.projection import project_row
from services.twistor import twistor

logger = logging.getLogger(__name__)


def _require_odd(m: int):
    if m < 1 or m % 2 == 0:
        raise ContractError(f"crossing needs an odd m >= 1, got {m}")


def barycentric_signs(ctx: TwistorContext, window: Sequence[int]) -> List[Fraction]:
    """(-1)^a <Y, I minus its a-th entry>, a = 0..m: Cramer numerators of the origin"""
    _require_odd(ctx.m)
    window = tuple(window)
    if len(window) != ctx.m + 1:
        raise ContractError(f"a crossing window has m+1 = {ctx.m + 1} entries, got {window}")
    return [(-1) ** a * twistor(ctx, window[:a] + window[a + 1:]) for a in range(len(window))]


def is_full_dimensional(values: Sequence[Fraction]) -> bool:
    """The simplex spans V_Y iff the Cramer numerators do not sum to zero"""
    return sum(values) != 0


def origin_in_simplex_alternating(ctx: TwistorContext, window: Sequence[int]) -> bool:
    """True iff all barycentric numerators share one strict sign"""
    values = barycentric_signs(ctx, window)
    if any(v == 0 for v in values):
        raise DegenerateConfiguration(f"a barycentric sign of {tuple(window)} vanishes",
                                      window=tuple(window), values=values)
    return len({sign(v) for v in values}) == 1


def _affinely_independent(points: Sequence[Sequence[Fraction]]) -> bool:
    if len(points) <= 1:
        return True
    origin = points[0]
    differences = [[a - b for a, b in zip(p, origin)] for p in points[1:]]
    return rank(differences) == len(points) - 1


def _relative_interior_contains_origin(points: Sequence[Sequence[Fraction]]) -> bool:
    """Solve sum l_t p_t = 0, sum l_t = 1 and require every l_t > 0"""
    dim = len(points[0])
    rows = [[p[j] for p in points] for j in range(dim)]
    rows.append([Fraction(1)] * len(points))
    solution = solve(rows, [Fraction(0)] * dim + [Fraction(1)])
    return solution is not None and all(x > 0 for x in solution)


def minimal_cells_containing_origin(ctx: TwistorContext, window: Sequence[int]) -> FrozenSet[Cell]:
    """Every affinely independent vertex subset whose relative interior holds the origin of V_Y"""
    _require_odd(ctx.m)
    window = tuple(window)
    cells = set()
    for size in range(1, len(window) + 1):
        for subset in combinations(window, size):
            points = [project_row(ctx, i) for i in subset]
            if not _affinely_independent(points):
                continue
            if _relative_interior_contains_origin(points):
                cells.add(Cell(vertex_indices=tuple(sorted(subset)), dim=size - 1))
    return frozenset(cells)


def crossing_number(ctx: TwistorContext, windows: Optional[Sequence[Tuple[int, ...]]] = None) -> CrossingResult:
    """
    Number of distinct cells of the window simplices containing the origin.

    Windows with a vanishing barycentric sign fall back to the minimal-cell
    search; cells are deduplicated by their sorted index sets.
    """
    _require_odd(ctx.m)
    if windows is None:
        windows = window_lists_odd(ctx.n, ctx.m)
    cells = set()
    simplices = []
    for window in windows:
        try:
            if origin_in_simplex_alternating(ctx, window):
                cells.add(Cell(vertex_indices=tuple(sorted(window)), dim=ctx.m))
                simplices.append(tuple(window))
        except DegenerateConfiguration:
            logger.debug("window %s is degenerate, searching minimal cells", window)
            found = minimal_cells_containing_origin(ctx, window)
            if found:
                cells.update(found)
                simplices.append(tuple(window))
    degenerate = any(cell.dim < ctx.m for cell in cells)
    return CrossingResult(
        count=len(cells),
        cells_hit=frozenset(cells),
        simplices_hit=tuple(sorted(set(simplices))),
        degenerate=degenerate
    )


def crossing_formula(k: int, m: int) -> int:
    """Closed-form crossing number on the amplituhedron"""
    _require_odd(m)
    if k < 1:
        raise ContractError(f"crossing_formula needs k >= 1, got {k}")
    if k % 2:
        value = Fraction(2 * k + m - 1, m + 1) * binomial((k + m - 2) // 2, (m - 1) // 2)
    else:
        value = Fraction(2 * binomial((k + m - 1) // 2, (m + 1) // 2))
    if value.denominator != 1:
        raise ContractError(f"crossing_formula({k}, {m}) is not an integer: {value}")
    return int(value)


def crossing_m1_oracle(ctx: TwistorContext) -> int:
    """
    m = 1 crossing by direct containment on the line V_Y.

    The projected coordinate of Z_i is proportional to <Y, i>; a vertex is hit
    when it projects to 0, an edge (i, i+1) when its ends lie strictly on
    opposite sides.
    """
    if ctx.m != 1:
        raise ContractError(f"the line oracle needs m = 1, got {ctx.m}")
    t = [twistor(ctx, (i,)) for i in range(1, ctx.n + 1)]
    vertices = sum(1 for value in t if value == 0)
    edges = sum(1 for a, b in zip(t, t[1:]) if a * b < 0)
    return vertices + edges


def predicted_hits_n_equals_k_plus_m(k: int, m: int) -> List[Tuple[int, ...]]:
    """For n = k+m, S(I) contains the origin iff all i_j share one parity"""
    _require_odd(m)
    return [window for window in window_lists_odd(k + m, m)
            if len({i % 2 for i in window[0::2]}) == 1]


@lru_cache(maxsize=None)
def boundary_supports(n: int, m: int) -> Tuple[FrozenSet[int], ...]:
    """Index sets {1} + pairs and pairs + {n} whose descendants are the boundary cells"""
    _require_odd(m)
    r = (m + 1) // 2
    supports = [frozenset((1,) + pairs) for pairs in pair_windows(2, n, r - 1)]
    supports.extend(frozenset(pairs + (n,)) for pairs in pair_windows(1, n - 1, r - 1))
    return tuple(supports)


def is_boundary_cell(cell: Sequence[int], n: int, m: int) -> bool:
    vertices = set(cell)
    return any(vertices <= support for support in boundary_supports(n, m))


def ancestor_windows(cell: Sequence[int], n: int, m: int) -> List[Tuple[int, ...]]:
    vertices = set(cell)
    return [w for w in window_lists_odd(n, m) if vertices <= set(w)]


def conjugate_vertex(cell: Sequence[int], i: int, n: int) -> int:
    """
    The other vertex completing the internal (m-1)-cell to an ancestor window.

    Args:
        cell: the m vertex indices of the cell
        i: a vertex with cell + {i} a window
        n: number of points

    Returns:
        The conjugate vertex
    """
    cell = tuple(sorted(cell))
    m = len(cell)
    _require_odd(m)
    if i in cell:
        raise ContractError(f"vertex {i} already belongs to the cell {cell}")
    if is_boundary_cell(cell, n, m):
        raise ContractError(f"cell {cell} is a boundary cell; no conjugate vertex is guaranteed")
    pairs = pair_decomposition(cell + (i,))
    if pairs is None or any(b > n for _, b in pairs):
        raise ContractError(f"{cell} + {i} is not a window")

    complement = set(range(1, n + 1)) - set(cell)
    lower, upper = next(pair for pair in pairs if i in pair)
    if i == lower:
        candidates = [j for j in complement if j >= lower + 2]
        conjugate = min(candidates) if candidates else None
    else:
        candidates = [j for j in complement if j <= lower - 1]
        conjugate = max(candidates) if candidates else None
    if conjugate is None or pair_decomposition(cell + (conjugate,)) is None:
        raise ContractError(f"no conjugate of {i} for cell {cell}")
    return conjugate


def half_space_diagnostic(ctx: TwistorContext, cell: Sequence[int], vertex: int = None) -> HalfSpaceDiagnostic:
    """
    Whether Z_i and its conjugate lie on opposite sides of the hyperplane of the cell.

    The origin is assumed to lie in the cell or a descendant, so the
    hyperplane passes through 0 and is spanned by the cell minus a pivot
    vertex lying between i and its conjugate; sides are then signs of
    <Y, cell minus pivot, x>.
    """
    _require_odd(ctx.m)
    cell = tuple(sorted(cell))
    if len(cell) != ctx.m:
        raise ContractError(f"an (m-1)-cell has m = {ctx.m} vertices, got {cell}")
    if vertex is None:
        ancestors = ancestor_windows(cell, ctx.n, ctx.m)
        if not ancestors:
            raise ContractError(f"cell {cell} has no ancestor window")
        vertex = next(j for j in ancestors[0] if j not in cell)
    conjugate = conjugate_vertex(cell, vertex, ctx.n)
    low, high = sorted((vertex, conjugate))
    between = [j for j in cell if low < j < high]
    pivot = between[0] if between else cell[0]
    rest = tuple(j for j in cell if j != pivot)
    side_vertex = twistor(ctx, rest + (vertex,))
    side_conjugate = twistor(ctx, rest + (conjugate,))
    if side_vertex == 0 or side_conjugate == 0:
        raise FlatnessError(f"vertex {vertex} or {conjugate} lies on the hyperplane of cell {cell}")
    return HalfSpaceDiagnostic(
        cell=cell,
        vertex=vertex,
        conjugate=conjugate,
        pivot=pivot,
        opposite_sides=sign(side_vertex) != sign(side_conjugate)
    )


def crossing_winding_relation(crossing: int, winding_above: int, winding_below: Optional[int],
                              k: int, m: int) -> RelationCheck:
    """
    c = 2 w(m+1) - w(m-1) for k odd, c = 2 w(m+1) for k even.

    The k-odd branch needs m >= 3 since no winding is defined at m = 0.
    """
    _require_odd(m)
    if k % 2:
        if m < 3 or winding_below is None:
            raise ContractError("the k-odd relation needs m >= 3 and the winding at m-1")
        expected = 2 * winding_above - winding_below
    else:
        expected = 2 * winding_above
    return RelationCheck(
        k=k, m=m,
        crossing=crossing,
        winding_above=winding_above,
        winding_below=winding_below,
        expected=expected,
        consistent=(crossing == expected)
    )

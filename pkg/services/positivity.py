"""
Positivity Service for the amplituhedron toolkit
Samplers and exhaustive certificates for positive Z, positive and nonnegative C, and padding
"""

import logging
import random
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence

from config import Config
from errors import ContractError, DegeneratePointError, DimensionError, PositivityError
from models import GrassmannC, Matrix, PositiveZ, PositivityClass, TwistorContext, YPoint
from services.exact_core import determinant, matmul, plucker, rank

logger = logging.getLogger(__name__)


def _check_nodes(nodes: Sequence[Fraction], count: int, label: str) -> List[Fraction]:
    nodes = [Fraction(x) for x in nodes]
    if len(nodes) != count:
        raise ContractError(f"{label} needs {count} nodes, got {len(nodes)}")
    if any(x <= 0 for x in nodes):
        raise ContractError(f"{label} nodes must be positive: {nodes}")
    if any(b <= a for a, b in zip(nodes, nodes[1:])):
        raise ContractError(f"{label} nodes must be strictly increasing: {nodes}")
    return nodes


def random_nodes(count: int, seed: int, denominator: int = None) -> List[Fraction]:
    """Increasing integers 1..count, each shifted by a jitter in [0, 1/2)"""
    denominator = denominator or Config.JITTER_DENOMINATOR
    rng = random.Random(seed)
    return [i + Fraction(rng.randrange(denominator), 2 * denominator) for i in range(1, count + 1)]


def maximal_minors(matrix: Matrix) -> dict:
    """All maximal row minors of a tall matrix, keyed by 1-based ascending row sets"""
    size = matrix.cols
    return {
        rows: determinant([matrix.entries[i - 1] for i in rows])
        for rows in combinations(range(1, matrix.rows + 1), size)
    }


def certify_z(matrix: Matrix) -> bool:
    """True iff every maximal minor on ascending row sets is strictly positive"""
    return all(value > 0 for value in maximal_minors(matrix).values())


def classify_c(matrix: Matrix) -> PositivityClass:
    """Positivity class of a k x n representative from all of its maximal minors"""
    minors = [plucker(matrix, cols) for cols in combinations(range(1, matrix.cols + 1), matrix.rows)]
    if all(p > 0 for p in minors):
        return PositivityClass.STRICTLY_POSITIVE
    if all(p >= 0 for p in minors):
        return PositivityClass.NONNEGATIVE
    return PositivityClass.UNCONSTRAINED


def sample_vandermonde_z(n: int, k: int, m: int, nodes: Sequence[Fraction]) -> PositiveZ:
    """
    Vandermonde external data: row i = (1, x_i, ..., x_i^{k+m-1}).

    Args:
        n: number of rows
        k: Grassmannian rank
        m: dimension of V_Y
        nodes: n strictly increasing positive rationals

    Returns:
        PositiveZ certified by checking every maximal minor
    """
    if n < k + m:
        raise ContractError(f"need n >= k+m, got n={n}, k={k}, m={m}")
    nodes = _check_nodes(nodes, n, 'sample_vandermonde_z')
    width = k + m
    matrix = Matrix.of([[x ** e for e in range(width)] for x in nodes], cols=width)
    if not certify_z(matrix):
        raise PositivityError(f"Vandermonde Z failed certification for nodes {nodes}")
    return PositiveZ(n=n, k=k, m=m, matrix=matrix, certified=True, nodes=tuple(nodes))


def sample_positive_c(k: int, n: int, nodes: Sequence[Fraction]) -> GrassmannC:
    """Strictly positive C with entry (a, j) = t_a^{j-1}"""
    if k < 1 or n < k:
        raise ContractError(f"need 1 <= k <= n, got k={k}, n={n}")
    nodes = _check_nodes(nodes, k, 'sample_positive_c')
    matrix = Matrix.of([[t ** (j - 1) for j in range(1, n + 1)] for t in nodes], cols=n)
    if classify_c(matrix) != PositivityClass.STRICTLY_POSITIVE:
        raise PositivityError(f"Vandermonde C failed certification for nodes {nodes}")
    return GrassmannC(k=k, n=n, matrix=matrix, positivity_class=PositivityClass.STRICTLY_POSITIVE)


def network_weight_count(k: int, n: int) -> int:
    return k * (n - k)


def draw_network_weights(k: int, n: int, seed: int, allow_zero: bool = True) -> List[Fraction]:
    """Seeded nonnegative weights; with allow_zero roughly one in three vanishes"""
    rng = random.Random(seed)
    weights = []
    for _ in range(network_weight_count(k, n)):
        if allow_zero and rng.randrange(Config.TNN_ZERO_PROBABILITY_DENOMINATOR) == 0:
            weights.append(Fraction(0))
        else:
            weights.append(Fraction(rng.randint(1, 6), rng.randint(1, 3)))
    return weights


def twisted_cyclic_shift(rows: Sequence[Sequence[Fraction]], k: int, times: int = 1) -> List[List[Fraction]]:
    """(c_1, ..., c_n) -> (c_2, ..., c_n, (-1)^{k-1} c_1), applied `times` times"""
    rows = [list(row) for row in rows]
    twist = (-1) ** (k - 1)
    for _ in range(times):
        rows = [row[1:] + [twist * row[0]] for row in rows]
    return rows


def sample_tnn_boundary_c(k: int, n: int, path_weights: Optional[Sequence[Fraction]] = None,
                          seed: int = 0, shift: int = 0) -> GrassmannC:
    """
    Nonnegative C from a planar network.

    Starts from [I_k | 0] and multiplies on the right by elementary factors
    x_i(w) = I + w E_{i,i+1}, for a = k..1 and i = a..a+n-k-1. Each factor adds
    w times column i to column i+1, so all maximal minors stay nonnegative.
    A twisted cyclic shift then moves the result to a rotated positroid cell;
    it permutes the maximal minors and keeps their signs.
    """
    if k < 1 or n < k:
        raise ContractError(f"need 1 <= k <= n, got k={k}, n={n}")
    if path_weights is None:
        path_weights = draw_network_weights(k, n, seed)
    weights = [Fraction(w) for w in path_weights]
    if len(weights) != network_weight_count(k, n):
        raise ContractError(f"expected {network_weight_count(k, n)} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ContractError("path weights must be nonnegative")

    rows = [[Fraction(int(i == a)) for i in range(n)] for a in range(k)]
    position = 0
    for a in range(k, 0, -1):
        for t in range(n - k):
            column = a + t  # 1-based column i; factor touches columns i and i+1
            w = weights[position]
            position += 1
            if w:
                for row in rows:
                    row[column] += w * row[column - 1]
    if shift % n:
        rows = twisted_cyclic_shift(rows, k, shift % n)
    matrix = Matrix.of(rows, cols=n)

    positivity_class = classify_c(matrix)
    if positivity_class == PositivityClass.UNCONSTRAINED:
        raise PositivityError(f"network C has a negative minor for weights {weights}")
    logger.debug("network C k=%d n=%d class=%s", k, n, positivity_class.value)
    return GrassmannC(k=k, n=n, matrix=matrix, positivity_class=positivity_class)


def pad_with_zero_column(c: GrassmannC) -> GrassmannC:
    """Append a zero column; positive classes become Nonnegative"""
    matrix = Matrix.of([list(row) + [Fraction(0)] for row in c.matrix.entries], cols=c.n + 1)
    padded_class = (PositivityClass.UNCONSTRAINED
                    if c.positivity_class == PositivityClass.UNCONSTRAINED
                    else PositivityClass.NONNEGATIVE)
    return GrassmannC(k=c.k, n=c.n + 1, matrix=matrix, positivity_class=padded_class)


def extend_z_for_padding(z: PositiveZ) -> PositiveZ:
    """Append the Vandermonde row at node x_n + 1"""
    if not z.nodes:
        raise ContractError("extending Z needs its Vandermonde nodes")
    return sample_vandermonde_z(z.n + 1, z.k, z.m, list(z.nodes) + [z.nodes[-1] + 1])


def apply_map(c: GrassmannC, z: PositiveZ) -> YPoint:
    """Y = C Z"""
    if c.n != z.n or c.k != z.k:
        raise DimensionError(f"C is {c.k}x{c.n} but Z expects {z.k}x{z.n}")
    product = matmul(c.matrix, z.matrix)
    if rank(product) != c.k:
        raise DegeneratePointError(f"C Z has rank {rank(product)} < k={c.k}")
    return YPoint(k=c.k, m=z.m, matrix=product)


def same_row_space(a: Matrix, b: Matrix) -> bool:
    """Row spaces agree iff stacking does not raise the rank"""
    stacked = list(a.entries) + list(b.entries)
    r = rank(a)
    return r == rank(b) == rank(stacked)


def sample_unconstrained_y(k: int, m: int, seed: int, bound: int = 5) -> YPoint:
    """Random full-rank integer Y"""
    rng = random.Random(seed)
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(k + m)] for _ in range(k)]
        if rank(rows) == k:
            return YPoint(k=k, m=m, matrix=Matrix.of(rows, cols=k + m))


def row_mix(y: YPoint, seed: int, positive: bool = False) -> YPoint:
    """Replace Y by M Y for a random invertible integer M (det M > 0 when positive)"""
    rng = random.Random(seed)
    while True:
        mixer = [[rng.randint(-3, 3) for _ in range(y.k)] for _ in range(y.k)]
        det = determinant(mixer)
        if det != 0 and (det > 0 or not positive):
            return YPoint(k=y.k, m=y.m, matrix=matmul(mixer, y.matrix))


def sample_context(n: int, k: int, m: int, seed: int, c_kind: str = 'vandermonde') -> TwistorContext:
    """
    Seeded (C, Z) pair with Y = C Z.

    c_kind is 'vandermonde', 'network' (all weights positive) or 'boundary'
    (network weights with zeros, under a random twisted cyclic shift).
    """
    z = sample_vandermonde_z(n, k, m, random_nodes(n, seed))
    if c_kind == 'vandermonde':
        c = sample_positive_c(k, n, random_nodes(k, seed + 7919))
    elif c_kind == 'network':
        c = sample_tnn_boundary_c(k, n, draw_network_weights(k, n, seed, allow_zero=False))
    elif c_kind == 'boundary':
        shift = random.Random(seed + 104729).randrange(n)
        c = sample_tnn_boundary_c(k, n, seed=seed, shift=shift)
    else:
        raise ContractError(f"unknown C sampler '{c_kind}'")
    return TwistorContext(z=z, y=apply_map(c, z), c=c)


def padded_context(ctx: TwistorContext) -> TwistorContext:
    """The same Y seen through (C | 0) and Z extended by one row"""
    if ctx.c is None:
        raise ContractError("padding needs C")
    c = pad_with_zero_column(ctx.c)
    z = extend_z_for_padding(ctx.z)
    return TwistorContext(z=z, y=apply_map(c, z), c=c)


def context_at_m(ctx: TwistorContext, m: int) -> TwistorContext:
    """
    The same C and Vandermonde nodes seen at another m.

    When n < k+m, C gets zero columns and the nodes are extended as in padding.
    """
    if ctx.c is None or not ctx.z.nodes:
        raise ContractError("changing m needs C and the Vandermonde nodes")
    if m < 1:
        raise ContractError(f"need m >= 1, got {m}")
    c, nodes = ctx.c, list(ctx.z.nodes)
    while c.n < ctx.k + m:
        c = pad_with_zero_column(c)
        nodes.append(nodes[-1] + 1)
    z = sample_vandermonde_z(c.n, ctx.k, m, nodes)
    return TwistorContext(z=z, y=apply_map(c, z), c=c)

"""
Domain records for the amplituhedron toolkit
Immutable value types shared by every service, each with a to_dict() for reports
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple


def scalar_to_str(value: Fraction) -> str:
    """Render an exact rational as 'p/q' (or 'p' when integral)"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Matrix:
    """Row-major grid of exact rationals"""
    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            from errors import DimensionError
            raise DimensionError(
                f"Matrix declared {self.rows}x{self.cols} but entries do not match"
            )

    @classmethod
    def of(cls, rows, cols: int = None) -> 'Matrix':
        """Build from any nested iterable of numbers; cols is needed only for 0-row matrices"""
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(rows=len(entries), cols=cols, entries=entries)

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rows': self.rows,
            'cols': self.cols,
            'entries': [[scalar_to_str(x) for x in row] for row in self.entries]
        }

    def __repr__(self):
        return f'<Matrix {self.rows}x{self.cols}>'


class PositivityClass(str, Enum):
    STRICTLY_POSITIVE = 'StrictlyPositive'
    NONNEGATIVE = 'Nonnegative'
    UNCONSTRAINED = 'Unconstrained'


@dataclass(frozen=True)
class PositiveZ:
    """The n x (k+m) external data with its maximal-minor certificate"""
    n: int
    k: int
    m: int
    matrix: Matrix
    certified: bool
    nodes: Optional[Tuple[Fraction, ...]] = None

    def row(self, i: int) -> Tuple[Fraction, ...]:
        """1-based row access"""
        return self.matrix.entries[i - 1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'k': self.k,
            'm': self.m,
            'matrix': self.matrix.to_dict(),
            'certified': self.certified,
            'nodes': [scalar_to_str(x) for x in self.nodes] if self.nodes else None
        }


@dataclass(frozen=True)
class GrassmannC:
    """k x n representative of a point of the Grassmannian"""
    k: int
    n: int
    matrix: Matrix
    positivity_class: PositivityClass

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'n': self.n,
            'matrix': self.matrix.to_dict(),
            'positivity_class': self.positivity_class.value
        }


@dataclass(frozen=True)
class YPoint:
    """k x (k+m) representative of Y; twistors are fixed up to det of a row change"""
    k: int
    m: int
    matrix: Matrix

    def to_dict(self) -> Dict[str, Any]:
        return {'k': self.k, 'm': self.m, 'matrix': self.matrix.to_dict()}


@dataclass(frozen=True)
class TwistorContext:
    """A pair (Y, Z), optionally with the C that produced Y"""
    z: PositiveZ
    y: YPoint
    c: Optional[GrassmannC] = None
    cache: Dict[Any, Any] = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        from errors import DimensionError
        if self.y.matrix.cols != self.z.matrix.cols:
            raise DimensionError(
                f"Y has {self.y.matrix.cols} columns but Z has {self.z.matrix.cols}"
            )
        if self.y.k != self.z.k or self.y.m != self.z.m:
            raise DimensionError(f"Y is ({self.y.k},{self.y.m}) but Z is ({self.z.k},{self.z.m})")
        if self.c is not None and (self.c.k != self.k or self.c.n != self.n):
            raise DimensionError(f"C is {self.c.k}x{self.c.n}, expected {self.k}x{self.n}")

    @property
    def n(self) -> int:
        return self.z.n

    @property
    def k(self) -> int:
        return self.z.k

    @property
    def m(self) -> int:
        return self.z.m

    def with_y(self, y: YPoint) -> 'TwistorContext':
        """Same Z, new Y; C is dropped since it no longer produces Y"""
        return TwistorContext(z=self.z, y=y)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'n': self.n,
            'k': self.k,
            'm': self.m,
            'Z': self.z.matrix.to_dict(),
        }
        if self.c is not None:
            data['C'] = self.c.matrix.to_dict()
        else:
            data['Y'] = self.y.matrix.to_dict()
        return data


@dataclass(frozen=True)
class SignSequence:
    """Signs of (<Y,B,i>) in the order of indices"""
    values: Tuple[int, ...]
    source_window: Tuple[int, ...]
    indices: Tuple[int, ...]

    def restricted(self) -> 'SignSequence':
        """Drop the positions whose index belongs to the source window"""
        keep = [(i, v) for i, v in zip(self.indices, self.values) if i not in self.source_window]
        return SignSequence(
            values=tuple(v for _, v in keep),
            source_window=self.source_window,
            indices=tuple(i for i, _ in keep)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'values': list(self.values),
            'source_window': list(self.source_window),
            'indices': list(self.indices)
        }


@dataclass(frozen=True)
class CoarseWindowResult:
    window: Tuple[int, ...]
    prefactor: int
    value: Fraction
    sign: int
    satisfied: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'window': list(self.window),
            'prefactor': self.prefactor,
            'value': scalar_to_str(self.value),
            'sign': self.sign,
            'satisfied': self.satisfied
        }


@dataclass(frozen=True)
class CoarseBoundaryReport:
    """Coarse boundary signs relative to the stored Y representative"""
    windows: Tuple[CoarseWindowResult, ...]
    strict: bool
    satisfied: bool
    orientation: int
    without_coarse_boundary: bool

    @property
    def satisfied_up_to_sign(self) -> bool:
        return self.orientation != 0

    @property
    def zero_windows(self) -> List[Tuple[int, ...]]:
        return [w.window for w in self.windows if w.sign == 0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'windows': [w.to_dict() for w in self.windows],
            'strict': self.strict,
            'satisfied': self.satisfied,
            'orientation': self.orientation,
            'satisfied_up_to_sign': self.satisfied_up_to_sign,
            'without_coarse_boundary': self.without_coarse_boundary
        }


@dataclass(frozen=True)
class ForbiddenPatternResult:
    ok: bool
    pattern: Optional[int] = None
    indices: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'ok': self.ok, 'pattern': self.pattern, 'indices': list(self.indices)}


class RayMode(str, Enum):
    RANDOM_GENERIC = 'random'
    MU_INFINITESIMAL = 'mu'


@dataclass(frozen=True)
class RayDirection:
    """
    Direction of a ray from the origin of V_Y.

    In random mode the lift is sum(c_i * Z_i). In mu mode `mu_terms` lists
    (index, power) pairs of Z_n + mu Z_{n-1} + ... with mu infinitesimal.
    """
    mode: RayMode
    coefficients: Tuple[Fraction, ...] = ()
    mu_terms: Tuple[Tuple[int, int], ...] = ()
    seed: Optional[int] = None
    attempts: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode.value,
            'coefficients': [scalar_to_str(c) for c in self.coefficients],
            'mu_terms': [list(t) for t in self.mu_terms],
            'seed': self.seed,
            'attempts': self.attempts
        }


@dataclass(frozen=True)
class WindingHit:
    window: Tuple[int, ...]
    orientation: int

    def to_dict(self) -> Dict[str, Any]:
        return {'window': list(self.window), 'orientation': self.orientation}


@dataclass(frozen=True)
class WindingResult:
    signed_sum: int
    magnitude: int
    hits: Tuple[WindingHit, ...]
    ray_used: RayDirection

    def to_dict(self) -> Dict[str, Any]:
        return {
            'signed_sum': self.signed_sum,
            'magnitude': self.magnitude,
            'hits': [h.to_dict() for h in self.hits],
            'ray': self.ray_used.to_dict()
        }


@dataclass(frozen=True)
class FlipRelation:
    w_doubled: int
    s: int
    consistent: bool
    bounded: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'w_doubled': self.w_doubled,
            's': self.s,
            'consistent': self.consistent,
            'bounded': self.bounded
        }


@dataclass(frozen=True, order=True)
class Cell:
    """Relative interior of the hull of affinely independent projected vertices"""
    vertex_indices: Tuple[int, ...]
    dim: int

    def to_dict(self) -> Dict[str, Any]:
        return {'vertices': list(self.vertex_indices), 'dim': self.dim}


@dataclass(frozen=True)
class CrossingResult:
    count: int
    cells_hit: frozenset
    simplices_hit: Tuple[Tuple[int, ...], ...]
    degenerate: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'count': self.count,
            'cells': [c.to_dict() for c in sorted(self.cells_hit)],
            'simplices': [list(s) for s in self.simplices_hit],
            'degenerate': self.degenerate
        }


@dataclass(frozen=True)
class HalfSpaceDiagnostic:
    cell: Tuple[int, ...]
    vertex: int
    conjugate: int
    pivot: int
    opposite_sides: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'cell': list(self.cell),
            'vertex': self.vertex,
            'conjugate': self.conjugate,
            'pivot': self.pivot,
            'opposite_sides': self.opposite_sides
        }


@dataclass(frozen=True)
class RelationCheck:
    k: int
    m: int
    crossing: int
    winding_above: int
    winding_below: Optional[int]
    expected: int
    consistent: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'm': self.m,
            'crossing': self.crossing,
            'winding_above': self.winding_above,
            'winding_below': self.winding_below,
            'expected': self.expected,
            'consistent': self.consistent
        }


class Verdict(str, Enum):
    INSIDE = 'Inside'
    OUTSIDE = 'Outside'
    COARSE_BOUNDARY_HIT = 'CoarseBoundaryHit'
    UNPROVEN = 'Unproven'


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: Verdict
    winding_magnitude: int
    coarse_ok: bool
    flips_of_first_row: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict.value,
            'winding_magnitude': self.winding_magnitude,
            'coarse_ok': self.coarse_ok,
            'flips_of_first_row': self.flips_of_first_row
        }


@dataclass(frozen=True)
class SignFlipMembership:
    flips: int
    maximal: bool
    coarse_ok: bool

    @property
    def criterion_inside(self) -> bool:
        """Sign-flip description of the m=2 amplituhedron"""
        return self.coarse_ok and self.maximal

    def to_dict(self) -> Dict[str, Any]:
        return {
            'flips': self.flips,
            'maximal': self.maximal,
            'coarse_ok': self.coarse_ok,
            'criterion_inside': self.criterion_inside
        }


@dataclass(frozen=True)
class CaseResult:
    """One (suite, n, k, m, seed) outcome of the verification harness"""
    suite: str
    n: int
    k: int
    m: int
    seed: int
    passed: bool
    computed: Any = None
    expected: Any = None
    detail: str = ''
    context: Optional[Dict[str, Any]] = None

    @property
    def sort_key(self) -> Tuple[int, int, int, int, str]:
        return (self.n, self.k, self.m, self.seed, self.suite)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'n': self.n,
            'k': self.k,
            'm': self.m,
            'seed': self.seed,
            'passed': self.passed,
            'computed': self.computed,
            'expected': self.expected,
            'detail': self.detail
        }


@dataclass(frozen=True)
class VerificationReport:
    grid: Tuple[Tuple[int, int, int, int], ...]
    cases: Tuple[CaseResult, ...]

    @property
    def summary(self) -> Dict[str, Any]:
        suites: Dict[str, Dict[str, int]] = {}
        for case in self.cases:
            tally = suites.setdefault(case.suite, {'passed': 0, 'failed': 0})
            tally['passed' if case.passed else 'failed'] += 1
        failed = sum(t['failed'] for t in suites.values())
        return {
            'total': len(self.cases),
            'passed': len(self.cases) - failed,
            'failed': failed,
            'suites': suites
        }

    @property
    def all_passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def failures(self) -> List[CaseResult]:
        return sorted((c for c in self.cases if not c.passed), key=lambda c: c.sort_key)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'grid': [list(g) for g in self.grid],
            'cases': [c.to_dict() for c in self.cases],
            'summary': self.summary,
            'all_passed': self.all_passed
        }


@dataclass(frozen=True)
class CommandConfig:
    """Resolved invocation of one CLI subcommand"""
    subcommand: str
    inputs: Tuple[str, ...] = ()
    seed: int = 0
    mode: str = 'random'
    output: Optional[str] = None
    allow_large_n: bool = False
    options: Dict[str, Any] = field(default_factory=dict, hash=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subcommand': self.subcommand,
            'inputs': list(self.inputs),
            'seed': self.seed,
            'mode': self.mode,
            'output': self.output,
            'allow_large_n': self.allow_large_n,
            'options': dict(self.options)
        }

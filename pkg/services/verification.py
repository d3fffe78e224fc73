"""
Verification Service for the amplituhedron toolkit
Batch reproduction of the winding and crossing theorems and of every identity they rest on
"""

import logging
import re
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config import Config
from errors import AmplituhedronError, ContractError, ParseError
from models import CaseResult, TwistorContext, Verdict, VerificationReport
from services.crossing import (crossing_formula, crossing_m1_oracle, crossing_number,
                               crossing_winding_relation, half_space_diagnostic, is_boundary_cell)
from services.crossing import predicted_hits_n_equals_k_plus_m as predicted_crossing_hits
from services.exact_core import window_lists_even, window_lists_odd
from services.membership import (construct_inside, construct_outside, maximality_bound_check,
                                 membership_m2, signflip_membership_m2, unconstrained_wcb_context)
from services.positivity import context_at_m, padded_context, row_mix, sample_context
from services.serialization import context_from_dict
from services.twistor import (boundary_anchored_windows, c_equation_residual, coarse_boundary_report,
                              even_window_sequence, forbidden_vanishing_check, lower_bound_flip_check,
                              sign_flip_count, sign_flip_windows, twistor, twistor_sequence,
                              twistor_via_cauchy_binet, window_twistor_sequence, z_equation_residual)
from services.winding import mu_ray_winding, winding_formula, winding_number
from services.winding import predicted_hits_n_equals_k_plus_m as predicted_winding_hits

logger = logging.getLogger(__name__)

GRID_PRESETS = {
    'default': "m=2,4;k=1-4;n=0-3|m=1,3;k=1-4;n=0-3|m=5;k=1-2;n=0-3",
    'quick': "m=2;k=1-2;n=0-1|m=1,3;k=1-2;n=0-1",
}

Cell = Tuple[int, int, int]

# Seed marking cases that cover a whole (n, k, m) cell rather than one sample
CELL_SEED = -1

RAY_SEEDS_PER_SAMPLE = 3


def _parse_values(text: str, key: str) -> List[int]:
    values = []
    for part in text.split(','):
        part = part.strip()
        match = re.fullmatch(r'(\d+)(?:-(\d+))?', part)
        if not match:
            raise ParseError(f"bad value '{part}' for '{key}' in grid")
        lo, hi = int(match.group(1)), int(match.group(2) or match.group(1))
        if hi < lo:
            raise ParseError(f"empty range '{part}' for '{key}' in grid")
        values.extend(range(lo, hi + 1))
    return values


def parse_grid(spec: str) -> List[Cell]:
    """
    Expand a grid string into (n, k, m) cells.

    Blocks are joined by '|'; each block is 'm=..;k=..;n=..' with comma lists
    and inclusive ranges, n given as an offset from k+m. A preset name
    ('default', 'quick') is expanded first.
    """
    spec = GRID_PRESETS.get(spec.strip(), spec)
    cells: List[Cell] = []
    for block in spec.split('|'):
        fields: Dict[str, List[int]] = {}
        for item in block.split(';'):
            if not item.strip():
                continue
            key, sep, value = item.partition('=')
            key = key.strip()
            if not sep or key not in ('m', 'k', 'n'):
                raise ParseError(f"bad grid field '{item}'")
            fields[key] = _parse_values(value, key)
        if 'm' not in fields or 'k' not in fields:
            raise ParseError(f"grid block '{block}' needs both m and k")
        for m in fields['m']:
            for k in fields['k']:
                if m < 1 or k < 1:
                    raise ParseError(f"grid block '{block}' needs m, k >= 1")
                for offset in fields.get('n', [0]):
                    cell = (k + m + offset, k, m)
                    if cell not in cells:
                        cells.append(cell)
    return cells


def c_kind_for_seed(seed: int) -> str:
    """Alternate the two strictly positive C samplers across seeds"""
    return 'vandermonde' if seed % 2 == 0 else 'network'


class VerificationHarness:
    """Runs every suite on a grid of (n, k, m) cells and seeds"""

    def __init__(self, settings=None):
        self.settings = settings or Config
        self.logger = logging.getLogger(__name__)

    # -- case helpers -------------------------------------------------------

    def _case(self, suite: str, cell: Cell, seed: int, passed: bool, computed=None, expected=None,
              detail: str = '', ctx: Optional[TwistorContext] = None) -> CaseResult:
        n, k, m = cell
        if not passed:
            self.logger.warning("%s failed on n=%d k=%d m=%d seed=%d: %s", suite, n, k, m, seed, detail)
        return CaseResult(
            suite=suite, n=n, k=k, m=m, seed=seed, passed=passed,
            computed=computed, expected=expected, detail=detail,
            context=ctx.to_dict() if (ctx is not None and not passed) else None
        )

    def _winding(self, ctx: TwistorContext, seed: int):
        return winding_number(ctx, ray_seed=seed, retries=self.settings.RAY_RETRIES)

    def _guarded(self, suite: str, cell: Cell, seed: int, check: Callable[[], CaseResult]) -> CaseResult:
        try:
            return check()
        except AmplituhedronError as e:
            return self._case(suite, cell, seed, False, detail=f"{type(e).__name__}: {e}")

    # -- per-sample suites --------------------------------------------------

    def check_theorem(self, ctx: TwistorContext, seed: int) -> CaseResult:
        cell = (ctx.n, ctx.k, ctx.m)
        if ctx.m % 2 == 0:
            computed = self._winding(ctx, seed).magnitude
            expected = winding_formula(ctx.k, ctx.m)
            return self._case('theorem', cell, seed, computed == expected, computed, expected, ctx=ctx)
        result = crossing_number(ctx)
        expected = crossing_formula(ctx.k, ctx.m)
        detail = ''
        passed = result.count == expected
        if result.degenerate:
            sides = self._degenerate_sides(ctx, result.cells_hit)
            detail = f"degenerate hit; conjugate sides opposite: {sides}"
            passed = passed and all(sides)
        return self._case('theorem', cell, seed, passed, result.count, expected, detail, ctx)

    def _degenerate_sides(self, ctx: TwistorContext, cells) -> List[bool]:
        sides = []
        for cell in sorted(cells):
            if cell.dim != ctx.m - 1 or is_boundary_cell(cell.vertex_indices, ctx.n, ctx.m):
                continue
            sides.append(half_space_diagnostic(ctx, cell.vertex_indices).opposite_sides)
        return sides

    def check_padding(self, ctx: TwistorContext, seed: int) -> CaseResult:
        cell = (ctx.n, ctx.k, ctx.m)
        padded = padded_context(ctx)
        if ctx.m % 2 == 0:
            before = self._winding(ctx, seed).magnitude
            after = self._winding(padded, seed).magnitude
        else:
            before, after = crossing_number(ctx).count, crossing_number(padded).count
        return self._case('padding', cell, seed, before == after, after, before, ctx=ctx)

    def check_ray_independence(self, ctx: TwistorContext, seed: int) -> CaseResult:
        """Several rays and a positively row-mixed representative give the same signed winding"""
        cell = (ctx.n, ctx.k, ctx.m)
        values = [self._winding(ctx, seed + 1000 * t).signed_sum for t in range(RAY_SEEDS_PER_SAMPLE)]
        values.append(self._winding(ctx.with_y(row_mix(ctx.y, seed, positive=True)), seed).signed_sum)
        return self._case('ray_independence', cell, seed, len(set(values)) == 1, values, values[0], ctx=ctx)

    def check_mu_ray(self, ctx: TwistorContext, seed: int) -> CaseResult:
        cell = (ctx.n, ctx.k, ctx.m)
        random_ray = self._winding(ctx, seed)
        mu = mu_ray_winding(ctx)
        return self._case('mu_ray', cell, seed, mu.signed_sum == random_ray.signed_sum,
                          mu.signed_sum, random_ray.signed_sum, ctx=ctx)

    def check_identities(self, ctx: TwistorContext, seed: int) -> CaseResult:
        cell = (ctx.n, ctx.k, ctx.m)
        indices = range(1, ctx.n + 1)
        b_lists = list(combinations(indices, ctx.m - 1))
        for a in combinations(indices, ctx.k - 1):
            for b in b_lists:
                residual = c_equation_residual(ctx, a, b)
                if residual != 0:
                    return self._case('identities', cell, seed, False, str(residual), '0',
                                      f"C-equation A={a} B={b}", ctx)
        for a in combinations(indices, ctx.k + ctx.m + 1):
            for b in b_lists:
                residual = z_equation_residual(ctx, a, b)
                if residual != 0:
                    return self._case('identities', cell, seed, False, str(residual), '0',
                                      f"Z-equation A={a} B={b}", ctx)
        windows = window_lists_even(ctx.n, ctx.m) if ctx.m % 2 == 0 else window_lists_odd(ctx.n, ctx.m)
        for window in windows:
            for face in ([window] if ctx.m % 2 == 0 else combinations(window, ctx.m)):
                if twistor(ctx, face) != twistor_via_cauchy_binet(ctx, face):
                    return self._case('identities', cell, seed, False, detail=f"Cauchy-Binet at {face}", ctx=ctx)
        return self._case('identities', cell, seed, True)

    def check_sign_flips(self, ctx: TwistorContext, seed: int) -> CaseResult:
        """Exactly k flips on every window sequence, at least k or all zero on any B"""
        cell = (ctx.n, ctx.k, ctx.m)
        if ctx.m % 2:
            sequences = [window_twistor_sequence(ctx, b) for b in sign_flip_windows(ctx.n, ctx.m)]
        else:
            sequences = [even_window_sequence(ctx, b) for b in boundary_anchored_windows(ctx.n, ctx.m)]
        flips = [sign_flip_count(seq) for seq in sequences]
        bad = [seq.source_window for seq, s in zip(sequences, flips) if s != ctx.k]
        if bad:
            return self._case('sign_flips', cell, seed, False, flips, ctx.k, f"windows {bad}", ctx)
        for b in combinations(range(1, ctx.n + 1), ctx.m - 1):
            if not lower_bound_flip_check(ctx, b):
                return self._case('sign_flips', cell, seed, False, detail=f"lower bound fails at B={b}", ctx=ctx)
        if not coarse_boundary_report(ctx, strict=True).satisfied:
            return self._case('sign_flips', cell, seed, False, detail="strict coarse conditions fail", ctx=ctx)
        return self._case('sign_flips', cell, seed, True, ctx.k, ctx.k)

    def check_membership(self, cell: Cell, seed: int) -> CaseResult:
        n, k, _ = cell
        inside = construct_inside(k, n, seed)
        outside = construct_outside(k, n, seed, retries=self.settings.RAY_RETRIES)
        verdicts = (membership_m2(inside, seed, self.settings.RAY_RETRIES).verdict,
                    membership_m2(outside, seed, self.settings.RAY_RETRIES).verdict)
        criteria = (signflip_membership_m2(inside).criterion_inside,
                    signflip_membership_m2(outside).criterion_inside)
        passed = verdicts == (Verdict.INSIDE, Verdict.OUTSIDE) and criteria == (True, False)
        failing = inside if verdicts[0] != Verdict.INSIDE or not criteria[0] else outside
        return self._case('membership', cell, seed, passed,
                          [v.value for v in verdicts], [Verdict.INSIDE.value, Verdict.OUTSIDE.value],
                          f"sign-flip criterion {criteria}", failing)

    def check_relation(self, ctx: TwistorContext, seed: int) -> CaseResult:
        """Crossing against the windings of the same C and nodes at m+1 and m-1"""
        k, m = ctx.k, ctx.m
        cell = (ctx.n, k, m)
        crossing = crossing_number(ctx).count
        above = self._winding(context_at_m(ctx, m + 1), seed).magnitude
        below = None
        if k % 2:
            below = self._winding(context_at_m(ctx, m - 1), seed).magnitude
        check = crossing_winding_relation(crossing, above, below, k, m)
        return self._case('relation', cell, seed, check.consistent, check.crossing, check.expected, ctx=ctx)

    def check_m1_oracle(self, ctx: TwistorContext, seed: int) -> CaseResult:
        cell = (ctx.n, ctx.k, ctx.m)
        oracle, general = crossing_m1_oracle(ctx), crossing_number(ctx).count
        return self._case('m1_oracle', cell, seed, oracle == general, general, oracle, ctx=ctx)

    # -- per-cell suites ----------------------------------------------------

    def check_predicted_hits(self, cell: Cell) -> CaseResult:
        """For n = k+m the hit pattern is explicit"""
        n, k, m = cell
        ctx = sample_context(n, k, m, 0)
        if m % 2 == 0:
            computed = sorted((h.window, h.orientation) for h in mu_ray_winding(ctx).hits)
            expected = sorted((h.window, h.orientation) for h in predicted_winding_hits(k, m))
        else:
            computed = list(crossing_number(ctx).simplices_hit)
            expected = sorted(predicted_crossing_hits(k, m))
        return self._case('predicted_hits', cell, CELL_SEED, computed == expected,
                          [list(x) for x in computed], [list(x) for x in expected], ctx=ctx)

    def check_unconstrained(self, cell: Cell) -> CaseResult:
        """Random Y: at most k flips on window sequences, winding at most floor((k+1)/2) for m = 2"""
        n, k, m = cell
        for sample in range(self.settings.UNCONSTRAINED_SAMPLES):
            ctx = unconstrained_wcb_context(n, k, m, sample, retries=self.settings.RAY_RETRIES)
            if m % 2:
                sequences = [twistor_sequence(ctx, b) for b in sign_flip_windows(n, m)]
            elif m == 2:
                sequences = [twistor_sequence(ctx, (1,))]
            else:
                sequences = []
            for seq in sequences:
                if sign_flip_count(seq) > k:
                    return self._case('unconstrained', cell, CELL_SEED, False, sign_flip_count(seq), k,
                                      f"sample {sample}, B={seq.source_window}", ctx)
            if m == 2 and not maximality_bound_check(ctx, sample, self.settings.RAY_RETRIES):
                return self._case('unconstrained', cell, CELL_SEED, False,
                                  detail=f"winding above the maximum at sample {sample}", ctx=ctx)
        return self._case('unconstrained', cell, CELL_SEED, True, detail=f"{self.settings.UNCONSTRAINED_SAMPLES} samples")

    def check_forbidden_patterns(self, cell: Cell) -> Tuple[CaseResult, int]:
        """
        Draw nonnegative network C until BOUNDARY_SAMPLES of them show a zero.

        Only sequences with exactly k flips are inspected. Returns the case and
        the number of samples where a zero actually occurred.
        """
        n, k, m = cell
        zero_cases = 0
        draws = 0
        cap = 4 * self.settings.BOUNDARY_SAMPLES
        while zero_cases < self.settings.BOUNDARY_SAMPLES and draws < cap:
            draws += 1
            try:
                ctx = sample_context(n, k, m, draws, c_kind='boundary')
            except AmplituhedronError:
                continue
            saw_zero = False
            for b in sign_flip_windows(n, m):
                seq = window_twistor_sequence(ctx, b)
                if sign_flip_count(seq) != k or all(seq.restricted().values):
                    continue
                saw_zero = True
                result = forbidden_vanishing_check(seq)
                if not result.ok:
                    return self._case('forbidden_patterns', cell, CELL_SEED, False, list(result.indices),
                                      detail=f"pattern {result.pattern} for B={b}", ctx=ctx), zero_cases
            zero_cases += saw_zero
        self.logger.debug("forbidden patterns n=%d k=%d m=%d: %d zero cases in %d draws", n, k, m, zero_cases, draws)
        return self._case('forbidden_patterns', cell, CELL_SEED, True, zero_cases,
                          detail=f"{draws} draws"), zero_cases

    def check_worked_example(self) -> CaseResult:
        """n=3, k=1, m=1 with Y = (3, 6): the origin sits on vertex 2"""
        ctx = context_from_dict({'n': 3, 'k': 1, 'm': 1,
                                 'Z': [['1', '1'], ['1', '2'], ['1', '3']], 'C': [['1', '1', '1']]})
        result = crossing_number(ctx)
        vertices = sorted(c.vertex_indices for c in result.cells_hit)
        passed = result.count == crossing_formula(1, 1) and vertices == [(2,)] and result.degenerate
        return self._case('worked_example', (3, 1, 1), CELL_SEED, passed, result.count, 1,
                          f"cells {vertices}", ctx)

    # -- drivers ------------------------------------------------------------

    def run_sample(self, cell: Cell, seed: int) -> List[CaseResult]:
        n, k, m = cell
        try:
            ctx = sample_context(n, k, m, seed, c_kind=c_kind_for_seed(seed))
        except AmplituhedronError as e:
            return [self._case('sample', cell, seed, False, detail=str(e))]
        checks = [('theorem', self.check_theorem), ('padding', self.check_padding)]
        if m % 2 == 0:
            checks += [('ray_independence', self.check_ray_independence), ('mu_ray', self.check_mu_ray)]
        checks.append(('sign_flips', self.check_sign_flips))
        if n <= self.settings.IDENTITY_MAX_N:
            checks.append(('identities', self.check_identities))
        if m == 1:
            checks.append(('m1_oracle', self.check_m1_oracle))
        if m == 3:
            checks.append(('relation', self.check_relation))
        results = [self._guarded(name, cell, seed, lambda f=check: f(ctx, seed)) for name, check in checks]
        if m == 2 and seed < self.settings.MEMBERSHIP_CASES:
            results.append(self._guarded('membership', cell, seed, lambda: self.check_membership(cell, seed)))
        return results

    def run_cell(self, cell: Cell, seeds: int) -> Tuple[List[CaseResult], int]:
        """All cases of one cell; returns the cases and the confirmed zero count"""
        n, k, m = cell
        if n < k + m or k < 1 or m < 1:
            raise ContractError(f"grid cell needs n >= k+m with k, m >= 1: {cell}")
        self.logger.info("verifying n=%d k=%d m=%d over %d seeds", n, k, m, seeds)
        results = []
        for seed in range(seeds):
            results.extend(self.run_sample(cell, seed))
        if n == k + m:
            results.append(self._guarded('predicted_hits', cell, CELL_SEED, lambda: self.check_predicted_hits(cell)))
        if m % 2 or m == 2:
            results.append(self._guarded('unconstrained', cell, CELL_SEED, lambda: self.check_unconstrained(cell)))
        zero_cases = 0
        if m % 2:
            try:
                case, zero_cases = self.check_forbidden_patterns(cell)
            except AmplituhedronError as e:
                case = self._case('forbidden_patterns', cell, CELL_SEED, False, detail=str(e))
            results.append(case)
        if cell == (3, 1, 1):
            results.append(self._guarded('worked_example', cell, CELL_SEED, self.check_worked_example))
        return results, zero_cases

    def run(self, cells: Sequence[Cell], seeds: int = None, workers: int = None) -> VerificationReport:
        """
        Verify every cell; results are merged in grid order.

        Args:
            cells: (n, k, m) triples, usually from parse_grid
            seeds: seeds per cell, Config.DEFAULT_SEEDS by default
            workers: process count; 1 runs in-process

        Returns:
            VerificationReport over every case
        """
        seeds = seeds if seeds is not None else self.settings.DEFAULT_SEEDS
        workers = workers or self.settings.WORKERS
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_run_cell_worker, [(cell, seeds, self.settings) for cell in cells]))
        else:
            outcomes = [self.run_cell(cell, seeds) for cell in cells]

        cases = [case for results, _ in outcomes for case in results]
        odd_cells = [cell for cell in cells if cell[2] % 2]
        if odd_cells:
            zero_cases = sum(zeros for _, zeros in outcomes)
            listed = ', '.join(f"({n},{k},{m})" for n, k, m in odd_cells)
            cases.append(self._case('forbidden_coverage', odd_cells[0], CELL_SEED,
                                    zero_cases >= self.settings.MIN_ZERO_CASES,
                                    zero_cases, self.settings.MIN_ZERO_CASES,
                                    f"samples with a vanishing twistor in a k-flip sequence over cells {listed}"))
        grid = tuple((n, k, m, seed) for n, k, m in cells for seed in range(seeds))
        report = VerificationReport(grid=grid, cases=tuple(cases))
        summary = report.summary
        self.logger.info("verification finished: %d passed, %d failed", summary['passed'], summary['failed'])
        return report


def _run_cell_worker(args) -> Tuple[List[CaseResult], int]:
    cell, seeds, settings = args
    return VerificationHarness(settings).run_cell(cell, seeds)


def verify_theorems(grid_spec: str, seeds: int = None, workers: int = None, settings=None) -> VerificationReport:
    return VerificationHarness(settings).run(parse_grid(grid_spec), seeds, workers)


def failure_dump(report: VerificationReport) -> Optional[Dict]:
    """The first failing case by (n, k, m, seed), with its context matrices"""
    failures = report.failures()
    if not failures:
        return None
    first = failures[0]
    data = first.to_dict()
    data['context'] = first.context
    return data

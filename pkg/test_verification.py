"""
Tests for the grid parser and the verification harness
"""
import pytest

from config import TestingConfig
from errors import ParseError
from services import verification
from services.positivity import sample_context
from services.verification import (CELL_SEED, GRID_PRESETS, VerificationHarness, c_kind_for_seed,
                                   failure_dump, parse_grid, verify_theorems)


def test_parse_grid_expands_offsets():
    assert parse_grid("m=2;k=1-2;n=0-1") == [(3, 1, 2), (4, 1, 2), (4, 2, 2), (5, 2, 2)]
    assert parse_grid("m=1,3;k=1") == [(2, 1, 1), (4, 1, 3)]


def test_parse_grid_presets():
    assert parse_grid('quick') == parse_grid(GRID_PRESETS['quick'])
    assert (3, 1, 1) in parse_grid('quick')
    assert (7, 2, 5) in parse_grid('default')


@pytest.mark.parametrize('spec', ["m=2", "m=2;k=x", "m=2;k=3-1", "q=1;m=2;k=1", "m=0;k=1", "m=2;k=1;n"])
def test_parse_grid_rejects(spec):
    with pytest.raises(ParseError):
        parse_grid(spec)


def test_c_kind_alternates():
    assert [c_kind_for_seed(s) for s in range(3)] == ['vandermonde', 'network', 'vandermonde']


def test_quick_grid_passes(settings):
    report = verify_theorems('quick', seeds=2, settings=settings)
    assert report.all_passed, failure_dump(report)
    assert failure_dump(report) is None
    suites = report.summary['suites']
    for name in ('theorem', 'padding', 'sign_flips', 'identities', 'mu_ray', 'membership', 'relation',
                 'm1_oracle', 'predicted_hits', 'unconstrained', 'forbidden_patterns', 'worked_example',
                 'forbidden_coverage'):
        assert name in suites
    assert report.grid[0] == (3, 1, 2, 0)


def test_even_cell_runs_in_process(settings):
    results, zeros = VerificationHarness(settings).run_cell((5, 1, 4), seeds=1)
    assert zeros == 0
    assert all(case.passed for case in results)
    assert {case.seed for case in results} == {0, CELL_SEED}


def test_failures_carry_their_context(settings, monkeypatch):
    monkeypatch.setattr('services.verification.winding_formula', lambda k, m: 99)
    report = VerificationHarness(settings).run([(3, 1, 2)], seeds=1)
    assert not report.all_passed
    dump = failure_dump(report)
    assert dump['suite'] == 'theorem' and dump['expected'] == 99
    assert set(dump['context']) >= {'n', 'k', 'm', 'Z'}


def test_workers_do_not_change_the_report(settings):
    cells = [(3, 1, 2), (3, 1, 1)]
    harness = VerificationHarness(settings)
    assert harness.run(cells, seeds=1, workers=1).to_dict() == harness.run(cells, seeds=1, workers=2).to_dict()


def test_forbidden_coverage_is_reported_on_the_odd_cells(settings):
    report = VerificationHarness(settings).run([(3, 1, 2), (3, 1, 1), (4, 1, 3)], seeds=1)
    coverage = [case for case in report.cases if case.suite == 'forbidden_coverage']
    assert len(coverage) == 1
    assert (coverage[0].n, coverage[0].k, coverage[0].m) == (3, 1, 1)
    assert '(3,1,1), (4,1,3)' in coverage[0].detail
    assert '(3,1,2)' not in coverage[0].detail


def test_even_grid_has_no_coverage_case(settings):
    report = VerificationHarness(settings).run([(3, 1, 2)], seeds=1)
    assert 'forbidden_coverage' not in report.summary['suites']


@pytest.mark.parametrize('cell', [(5, 2, 3), (7, 2, 3)])
def test_forbidden_patterns_find_zero_cases(settings, cell):
    case, zero_cases = VerificationHarness(settings).check_forbidden_patterns(cell)
    assert case.passed, case.detail
    assert zero_cases > 0


@pytest.mark.parametrize('n,k,seed', [(4, 1, 0), (5, 1, 1), (5, 2, 2), (6, 3, 3)])
def test_relation_reuses_c_and_nodes(settings, monkeypatch, n, k, seed):
    ctx = sample_context(n, k, 3, seed, c_kind='vandermonde')
    moved = []
    original = verification.context_at_m

    def recording(source, m):
        result = original(source, m)
        moved.append(result)
        return result

    monkeypatch.setattr(verification, 'context_at_m', recording)
    case = VerificationHarness(settings).check_relation(ctx, seed)
    assert case.passed, case.detail
    assert [c.m for c in moved] == ([4, 2] if k % 2 else [4])
    for other in moved:
        assert other.z.nodes[:n] == ctx.z.nodes
        assert [row[:n] for row in other.c.matrix.entries] == list(ctx.c.matrix.entries)


class FewRetries(TestingConfig):
    RAY_RETRIES = 5
    MEMBERSHIP_CASES = 0


def test_harness_hands_its_retries_to_the_winding(monkeypatch):
    seen = []
    original = verification.winding_number

    def recording(ctx, ray_seed=0, retries=None):
        seen.append(retries)
        return original(ctx, ray_seed=ray_seed, retries=retries)

    monkeypatch.setattr(verification, 'winding_number', recording)
    results = VerificationHarness(FewRetries).run_sample((4, 1, 2), 0)
    assert all(case.passed for case in results)
    assert seen and set(seen) == {5}

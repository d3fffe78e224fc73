"""
Tests for crossing numbers, cells and conjugate vertices
"""
import random
from itertools import combinations

import pytest

from errors import ContractError, DegenerateConfiguration, FlatnessError
from models import Cell, Matrix, TwistorContext, YPoint
from services.crossing import (ancestor_windows, barycentric_signs, conjugate_vertex, crossing_formula,
                               crossing_m1_oracle, crossing_number, crossing_winding_relation,
                               half_space_diagnostic, is_boundary_cell, is_full_dimensional,
                               minimal_cells_containing_origin, origin_in_simplex_alternating,
                               predicted_hits_n_equals_k_plus_m)
from services.exact_core import window_lists_odd
from services.positivity import sample_context, sample_vandermonde_z
from services.winding import winding_formula


def test_segment_origin_sits_on_a_vertex(segment_ctx):
    assert barycentric_signs(segment_ctx, (1, 2)) == [0, 3]
    with pytest.raises(DegenerateConfiguration) as info:
        origin_in_simplex_alternating(segment_ctx, (1, 2))
    assert info.value.window == (1, 2)

    result = crossing_number(segment_ctx)
    assert result.count == 1 == crossing_formula(1, 1)
    assert result.cells_hit == frozenset({Cell(vertex_indices=(2,), dim=0)})
    assert result.simplices_hit == ((1, 2), (2, 3))
    assert result.degenerate


def test_segment_oracle(segment_ctx):
    assert crossing_m1_oracle(segment_ctx) == 1


def test_full_dimensional_test():
    assert is_full_dimensional([1, 2, -1])
    assert not is_full_dimensional([1, -1])


@pytest.mark.parametrize('k,m,expected', [
    (1, 1, 1), (2, 1, 2), (3, 1, 3), (4, 1, 4),
    (1, 3, 1), (2, 3, 2), (3, 3, 4), (4, 3, 6),
    (1, 5, 1), (2, 5, 2),
])
def test_crossing_formula(k, m, expected):
    assert crossing_formula(k, m) == expected


def test_crossing_formula_contract():
    with pytest.raises(ContractError):
        crossing_formula(1, 2)
    with pytest.raises(ContractError):
        crossing_formula(0, 1)


@pytest.mark.parametrize('n,k,m,seed', [
    (3, 2, 1, 0), (5, 3, 1, 1), (5, 1, 3, 2), (6, 2, 3, 3), (7, 3, 3, 4), (8, 4, 3, 5), (7, 2, 5, 6),
])
def test_crossing_matches_the_formula_on_samples(n, k, m, seed):
    ctx = sample_context(n, k, m, seed, c_kind='network' if seed % 2 else 'vandermonde')
    result = crossing_number(ctx)
    assert result.count == crossing_formula(k, m)
    assert not result.degenerate


@pytest.mark.parametrize('n,k,seed', [(3, 2, 0), (5, 4, 1), (6, 3, 2), (7, 2, 3)])
def test_line_oracle_agrees(n, k, seed):
    ctx = sample_context(n, k, 1, seed)
    assert crossing_m1_oracle(ctx) == crossing_number(ctx).count


def test_minimal_cells_agree_with_the_sign_test():
    ctx = sample_context(7, 3, 3, seed=9)
    slow = set()
    for window in window_lists_odd(ctx.n, ctx.m):
        slow |= minimal_cells_containing_origin(ctx, window)
    assert frozenset(slow) == crossing_number(ctx).cells_hit


@pytest.mark.parametrize('k,m', [(1, 1), (2, 1), (1, 3), (2, 3), (3, 3)])
def test_predicted_hits_when_n_is_k_plus_m(k, m):
    ctx = sample_context(k + m, k, m, seed=k + m)
    predicted = predicted_hits_n_equals_k_plus_m(k, m)
    assert list(crossing_number(ctx).simplices_hit) == sorted(predicted)
    assert len(predicted) == crossing_formula(k, m)


def test_boundary_cells():
    assert is_boundary_cell((1, 4, 5), 7, 3)
    assert is_boundary_cell((4, 5, 7), 7, 3)
    assert not is_boundary_cell((2, 5, 6), 7, 3)
    assert not is_boundary_cell((3, 6, 7), 7, 3)
    assert is_boundary_cell((1,), 4, 1) and is_boundary_cell((4,), 4, 1)
    assert not is_boundary_cell((2,), 4, 1)


def test_conjugate_vertex_example():
    assert conjugate_vertex((2, 5, 6), 1, 7) == 3
    assert conjugate_vertex((2, 5, 6), 3, 7) == 1
    with pytest.raises(ContractError):
        conjugate_vertex((1, 4, 5), 2, 7)
    with pytest.raises(ContractError):
        conjugate_vertex((2, 5, 6), 5, 7)
    with pytest.raises(ContractError):
        conjugate_vertex((2, 5, 6), 4, 7)


@pytest.mark.parametrize('n,m', [(n, m) for m in (1, 3, 5) for n in range(m + 2, 9)])
def test_internal_cells_have_two_ancestors_swapped_by_the_conjugate(n, m):
    for cell in combinations(range(1, n + 1), m):
        ancestors = ancestor_windows(cell, n, m)
        if not ancestors or is_boundary_cell(cell, n, m):
            continue
        assert len(ancestors) == 2
        first, second = ([j for j in w if j not in cell][0] for w in ancestors)
        assert conjugate_vertex(cell, first, n) == second
        assert conjugate_vertex(cell, second, n) == first


def test_half_space_on_the_segment(segment_ctx):
    diagnostic = half_space_diagnostic(segment_ctx, (2,))
    assert (diagnostic.vertex, diagnostic.conjugate, diagnostic.pivot) == (1, 3, 2)
    assert diagnostic.opposite_sides


def test_half_space_reports_same_side():
    z = sample_vandermonde_z(4, 2, 1, [1, 2, 3, 4])
    # Y spans Z_2 and Z_1 - Z_3, so <Y,1> = <Y,3> = -2
    ctx = TwistorContext(z=z, y=YPoint(k=2, m=1, matrix=Matrix.of([[1, 2, 4], [0, -2, -8]])))
    diagnostic = half_space_diagnostic(ctx, (2,), vertex=1)
    assert diagnostic.conjugate == 3
    assert not diagnostic.opposite_sides


def test_half_space_on_a_flat_vertex(segment_ctx):
    flat = segment_ctx.with_y(YPoint(k=1, m=1, matrix=Matrix.of([[1, 1]])))
    with pytest.raises(FlatnessError):
        half_space_diagnostic(flat, (2,), vertex=1)


def test_crossing_winding_relation():
    odd = crossing_winding_relation(crossing_formula(3, 3), winding_formula(3, 4), winding_formula(3, 2), 3, 3)
    assert odd.expected == 4 and odd.consistent
    even = crossing_winding_relation(crossing_formula(2, 1), winding_formula(2, 2), None, 2, 1)
    assert even.expected == 2 and even.consistent
    assert not crossing_winding_relation(5, 3, 2, 3, 3).consistent
    with pytest.raises(ContractError):
        crossing_winding_relation(1, 1, None, 1, 1)
    with pytest.raises(ContractError):
        crossing_winding_relation(1, 1, None, 1, 3)


@pytest.mark.parametrize('n,k,m,seed', [(6, 2, 3, 1), (7, 3, 3, 4), (5, 4, 1, 2)])
def test_crossing_ignores_window_order_and_repeats(n, k, m, seed):
    ctx = sample_context(n, k, m, seed)
    windows = window_lists_odd(n, m)
    reference = crossing_number(ctx, windows)
    shuffled = list(windows)
    random.Random(seed).shuffle(shuffled)
    doubled = shuffled + windows[: len(windows) // 2 + 1]
    for variant in (shuffled, doubled):
        result = crossing_number(ctx, variant)
        assert result.count == reference.count == crossing_formula(k, m)
        assert result.cells_hit == reference.cells_hit
        assert result.simplices_hit == reference.simplices_hit


def test_degenerate_crossing_ignores_repeats(segment_ctx):
    windows = window_lists_odd(3, 1)
    result = crossing_number(segment_ctx, windows + windows[::-1])
    assert result.count == 1
    assert result.simplices_hit == ((1, 2), (2, 3))

"""
Tests for exact coordinates in the quotient by Y
"""
from fractions import Fraction

import pytest

from errors import DegeneratePointError
from models import Matrix, YPoint
from services.projection import project, project_row, projection_basis
from services.twistor import twistor


def test_segment_projects_onto_a_line(segment_ctx):
    assert projection_basis(segment_ctx) == ((0,), -6)
    assert [project_row(segment_ctx, i) for i in (1, 2, 3)] == [
        (Fraction(1, 2),), (Fraction(0),), (Fraction(-1, 2),)
    ]


def test_projected_coordinate_is_proportional_to_the_twistor(triangle_ctx):
    _, base = projection_basis(triangle_ctx)
    for i in range(1, 4):
        for j in range(1, 4):
            a, b = project_row(triangle_ctx, i), project_row(triangle_ctx, j)
            assert (a[0] * b[1] - a[1] * b[0]) * base == twistor(triangle_ctx, (i, j))


def test_y_itself_projects_to_the_origin(triangle_ctx):
    assert project(triangle_ctx, triangle_ctx.y.matrix.row(0)) == (0, 0)


def test_rank_deficient_y_has_no_basis(segment_ctx):
    flat = segment_ctx.with_y(YPoint(k=1, m=1, matrix=Matrix.of([[0, 0]])))
    with pytest.raises(DegeneratePointError):
        projection_basis(flat)

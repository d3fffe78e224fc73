"""
Tests for the m=2 polygon drawing
"""
import re

import pytest

from errors import ContractError
from services.svg_render import PolygonRenderer, render_polygon_svg


def test_triangle_svg(triangle_ctx):
    svg = render_polygon_svg(triangle_ctx)
    assert svg.startswith('<?xml')
    assert svg.endswith('</svg>\n')
    assert svg.count('<circle') == 3
    assert re.findall(r'data-edge="([^"]+)"', svg) == ['1-2', '2-3', '3-1']
    assert 'n=3, k=1, m=2' in svg


def test_rendering_is_deterministic(triangle_ctx):
    assert render_polygon_svg(triangle_ctx) == render_polygon_svg(triangle_ctx)


def test_layout_stays_inside_the_margins(triangle_ctx):
    renderer = PolygonRenderer(size=200, margin=20)
    layout = renderer.layout(triangle_ctx)
    assert layout['size'] == 200
    for point in layout['points'] + [layout['origin']]:
        for key in ('x', 'y'):
            assert 20 <= float(point[key]) <= 180


def test_rendering_needs_m2(segment_ctx):
    with pytest.raises(ContractError):
        render_polygon_svg(segment_ctx)

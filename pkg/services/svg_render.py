"""
SVG Render Service for the amplituhedron toolkit
Draws the projected points, the polygon P(Y, Z) and the origin of V_Y for m = 2
"""

import logging
import os
from fractions import Fraction
from typing import Dict, List, Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from errors import ContractError
from models import TwistorContext
from services.projection import project_row

logger = logging.getLogger(__name__)

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'templates')
CANVAS_SIZE = 400
MARGIN = 30
ORIGIN_ARM = 5

_environment = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    autoescape=True
)


def _fmt(value: Fraction) -> str:
    return f"{float(value):.4f}"


class PolygonRenderer:
    """Maps exact V_Y coordinates onto a square canvas, y axis pointing up"""

    def __init__(self, size: int = CANVAS_SIZE, margin: int = MARGIN):
        self.size = size
        self.margin = margin
        self.logger = logging.getLogger(__name__)

    def _mapping(self, coordinates: Sequence[Sequence[Fraction]]):
        xs = [c[0] for c in coordinates]
        ys = [c[1] for c in coordinates]
        low_x, high_x, low_y, high_y = min(xs), max(xs), min(ys), max(ys)
        span = max(high_x - low_x, high_y - low_y) or Fraction(1)
        scale = Fraction(self.size - 2 * self.margin) / span

        def to_canvas(point):
            x = self.margin + (point[0] - low_x) * scale
            y = self.size - self.margin - (point[1] - low_y) * scale
            return x, y
        return to_canvas

    def layout(self, ctx: TwistorContext) -> Dict:
        if ctx.m != 2:
            raise ContractError(f"rendering needs m = 2, got m = {ctx.m}")
        projected = [project_row(ctx, i) for i in range(1, ctx.n + 1)]
        origin = (Fraction(0), Fraction(0))
        to_canvas = self._mapping(projected + [origin])

        canvas = [to_canvas(p) for p in projected]
        points: List[Dict] = []
        for index, (x, y) in enumerate(canvas, start=1):
            points.append({'index': index, 'x': _fmt(x), 'y': _fmt(y),
                           'label_x': _fmt(x + 6), 'label_y': _fmt(y - 6)})

        edges = []
        pairs = [(i, i + 1) for i in range(1, ctx.n)] + [(ctx.n, 1)]
        for a, b in pairs:
            (x1, y1), (x2, y2) = canvas[a - 1], canvas[b - 1]
            edges.append({'label': f"{a}-{b}", 'x1': _fmt(x1), 'y1': _fmt(y1), 'x2': _fmt(x2), 'y2': _fmt(y2)})

        ox, oy = to_canvas(origin)
        return {
            'size': self.size,
            'n': ctx.n,
            'k': ctx.k,
            'points': points,
            'edges': edges,
            'origin': {'x': _fmt(ox), 'y': _fmt(oy),
                       'left': _fmt(ox - ORIGIN_ARM), 'right': _fmt(ox + ORIGIN_ARM),
                       'top': _fmt(oy - ORIGIN_ARM), 'bottom': _fmt(oy + ORIGIN_ARM)}
        }

    def render(self, ctx: TwistorContext) -> str:
        svg = _environment.get_template('polygon.svg.j2').render(**self.layout(ctx))
        self.logger.debug("rendered polygon for n=%d k=%d (%d bytes)", ctx.n, ctx.k, len(svg))
        return svg


def render_polygon_svg(ctx: TwistorContext) -> str:
    return PolygonRenderer().render(ctx)

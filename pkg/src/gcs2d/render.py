"""Static DOT and SVG renderings of graphs and solved placements."""

from __future__ import annotations

import math

from .geometry import CircleRep, LineRep, Placement, Point2
from .graph import ConstraintGraph, EntityKind

_DOT_SHAPES = {
    EntityKind.POINT: "circle",
    EntityKind.LINE: "box",
    EntityKind.CIRCLE_FIXED_RADIUS: "doublecircle",
    EntityKind.CIRCLE_FREE_RADIUS: "doublecircle",
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: ConstraintGraph) -> str:
    """Graphviz source: one node per entity (shape by kind), one labelled edge
    per constraint."""
    lines = ["graph constraints {", "  node [fontsize=10];"]
    for e in g.entities:
        label = e.id
        if e.kind.is_circle:
            label += "\\nr known" if e.kind is EntityKind.CIRCLE_FIXED_RADIUS else "\\nr free"
        lines.append(f"  {_quote(e.id)} [shape={_DOT_SHAPES[e.kind]}, label={_quote(label)}];")
    for c in g.constraints:
        label = c.kind.value if c.value is None else f"{c.kind.value}={c.value:g}"
        lines.append(
            f"  {_quote(c.between[0])} -- {_quote(c.between[1])} [label={_quote(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


_WIDTH, _HEIGHT = 800.0, 600.0
_MARGIN = 0.05


def _world_bounds(placements: dict[str, Placement]) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for p in placements.values():
        if isinstance(p, Point2):
            xs.append(p.x)
            ys.append(p.y)
        elif isinstance(p, CircleRep):
            xs += [p.center.x - p.r, p.center.x + p.r]
            ys += [p.center.y - p.r, p.center.y + p.r]
    if not xs:
        return -1.0, -1.0, 1.0, 1.0
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    if max_x - min_x < 1e-9:
        min_x, max_x = min_x - 1.0, max_x + 1.0
    if max_y - min_y < 1e-9:
        min_y, max_y = min_y - 1.0, max_y + 1.0
    return min_x, min_y, max_x, max_y


def _clip_line(l: LineRep, bounds: tuple[float, float, float, float]) -> tuple[Point2, Point2] | None:
    min_x, min_y, max_x, max_y = bounds
    anchor = l.foot_of(Point2((min_x + max_x) / 2.0, (min_y + max_y) / 2.0))
    dx, dy = l.direction
    span = math.hypot(max_x - min_x, max_y - min_y)
    lo, hi = -span, span
    for value, direction, low, high in (
        (anchor.x, dx, min_x, max_x),
        (anchor.y, dy, min_y, max_y),
    ):
        if abs(direction) < 1e-12:
            if not low <= value <= high:
                return None
            continue
        t1 = (low - value) / direction
        t2 = (high - value) / direction
        if t1 > t2:
            t1, t2 = t2, t1
        lo, hi = max(lo, t1), min(hi, t2)
    if lo >= hi:
        return None
    return (
        Point2(anchor.x + lo * dx, anchor.y + lo * dy),
        Point2(anchor.x + hi * dx, anchor.y + hi * dy),
    )


def to_svg(g: ConstraintGraph, placements: dict[str, Placement]) -> str:
    """An 800x600 SVG of solved placements, auto-scaled with a 5% margin."""
    min_x, min_y, max_x, max_y = _world_bounds(placements)
    pad_x = (max_x - min_x) * _MARGIN
    pad_y = (max_y - min_y) * _MARGIN
    bounds = (min_x - pad_x, min_y - pad_y, max_x + pad_x, max_y + pad_y)
    scale = min(
        _WIDTH / (bounds[2] - bounds[0]),
        _HEIGHT / (bounds[3] - bounds[1]),
    )

    def to_screen(p: Point2) -> tuple[float, float]:
        x = (p.x - bounds[0]) * scale + (_WIDTH - (bounds[2] - bounds[0]) * scale) / 2.0
        y = _HEIGHT - ((p.y - bounds[1]) * scale + (_HEIGHT - (bounds[3] - bounds[1]) * scale) / 2.0)
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH:g} {_HEIGHT:g}">',
        '  <rect width="100%" height="100%" fill="white"/>',
    ]
    for name, placement in placements.items():
        if isinstance(placement, LineRep):
            segment = _clip_line(placement, bounds)
            if segment is None:
                continue
            (x1, y1), (x2, y2) = to_screen(segment[0]), to_screen(segment[1])
            parts.append(
                f'  <line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                'stroke="steelblue" stroke-width="1.5"/>'
            )
            lx, ly = to_screen(segment[0])
            parts.append(f'  <text x="{lx + 4:.2f}" y="{ly - 4:.2f}" font-size="12">{name}</text>')
        elif isinstance(placement, CircleRep):
            cx, cy = to_screen(placement.center)
            parts.append(
                f'  <circle cx="{cx:.2f}" cy="{cy:.2f}" r="{placement.r * scale:.2f}" '
                'fill="none" stroke="darkseagreen" stroke-width="1.5"/>'
            )
            parts.append(f'  <text x="{cx + 4:.2f}" y="{cy - 4:.2f}" font-size="12">{name}</text>')
    for name, placement in placements.items():
        if isinstance(placement, Point2):
            x, y = to_screen(placement)
            parts.append(f'  <circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="crimson"/>')
            parts.append(f'  <text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="12">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

"""Deterministic SVG rendering of an instance, its zones and a tour."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .tsplib import Instance
from .zoning import ZonePlan

__all__ = ["render_svg", "boundary_polyline"]

WIDTH = 800
MARGIN = 40


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def boundary_polyline(inst: Instance, left: Sequence[int], right: Sequence[int],
                      pad: float) -> list[tuple[float, float]]:
    """Polyline (data coordinates) separating two consecutive zones.

    A straight vertical line midway between the zones when their x-extents
    do not overlap; otherwise a zig-zag passing right of every left-zone
    vertex and left of every right-zone vertex at that vertex's height.
    """
    ys = [y for _, y in inst.coords]
    lo, hi = min(ys), max(ys)
    max_left = max(inst.xy(v)[0] for v in left)
    min_right = min(inst.xy(v)[0] for v in right)
    if max_left < min_right:
        x = (max_left + min_right) / 2
        return [(x, lo - pad), (x, hi + pad)]
    marks = sorted([(inst.xy(v)[1], inst.xy(v)[0] + pad, v) for v in left]
                   + [(inst.xy(v)[1], inst.xy(v)[0] - pad, v) for v in right])
    pts = [(x, y) for y, x, _ in marks]
    return [(pts[0][0], lo - pad), *pts, (pts[-1][0], hi + pad)]


def render_svg(inst: Instance, plan: ZonePlan | None = None,
               tour: Sequence[int] | None = None, title: str | None = None) -> str:
    xs = [x for x, _ in inst.coords]
    ys = [y for _, y in inst.coords]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (WIDTH - 2 * MARGIN) / span
    height = int(round((y1 - y0) * scale + 2 * MARGIN))
    pad = 0.02 * span

    def px(x: float, y: float) -> tuple[str, str]:
        # svg y grows downward
        return _fmt(MARGIN + (x - x0) * scale), _fmt(height - MARGIN - (y - y0) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{height}" viewBox="0 0 {WIDTH} {height}">',
        f"<title>{escape(title or inst.name)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
    ]
    if plan is not None and len(plan) > 1:
        out.append('<g id="boundaries" fill="none" stroke="#888" stroke-width="1" '
                   'stroke-dasharray="6,4">')
        for a, b in zip(plan.zones, plan.zones[1:]):
            line = boundary_polyline(inst, sorted(a.own_vertices), sorted(b.own_vertices), pad)
            pts = " ".join(",".join(px(x, y)) for x, y in line)
            out.append(f'<polyline class="boundary" data-zones="{a.index}-{b.index}" points="{pts}"/>')
        out.append("</g>")
    if tour:
        pts = " ".join(",".join(px(*inst.xy(v))) for v in tour)
        out.append(f'<polygon id="tour" points="{pts}" fill="none" stroke="#1f5fbf" '
                   'stroke-width="1.5"/>')
    out.append('<g id="vertices" font-family="sans-serif" font-size="10">')
    for v in inst.vertices:
        cx, cy = px(*inst.xy(v))
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="black"/>')
        out.append(f'<text x="{_fmt(float(cx) + 4)}" y="{_fmt(float(cy) - 4)}">{v}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

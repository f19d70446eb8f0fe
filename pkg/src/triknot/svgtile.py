"""SVG rendering of upper half-plane tilings.

Geodesic edges are approximated by polylines with a fixed number of
samples per edge.  Every tile becomes a single <path> element carrying
its group word in a data-word attribute; a tile made of several domain
copies contributes one subpath per boundary edge.  The viewport is a
bounded window around the finite tile vertices, so edges running to the
real axis or to infinity simply leave the canvas.
"""

from __future__ import annotations

from .errors import DomainError
from .triangle import (DomainSpec, Tile, TriangleGroupData, copy_chart,
                       sample_edge, tile)
from .words import format_word

_SAMPLES_PER_EDGE = 32
_WIDTH_PX = 900.0
_PAD_FRACTION = 0.18
_STROKE = "#27496d"
_AXIS = "#b0b0b0"


def _xml_escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _edge_samples(g: TriangleGroupData, dom: DomainSpec) -> list[list[complex]]:
    out = []
    for e in dom.edges:
        pts = sample_edge(dom, e.name, _SAMPLES_PER_EDGE)
        chart = copy_chart(g, dom, e.name)
        if chart is not None:
            pts = [chart.apply(z) for z in pts]
        out.append(pts)
    return out


def _view_box(tiles: list[Tile]) -> tuple[float, float, float, float]:
    xs, ys = [], []
    for t in tiles:
        for poly in t.polygons:
            for v in poly:
                if v is not None and abs(v) < 1e6:
                    xs.append(v.real)
                    ys.append(v.imag)
    if not xs:
        raise DomainError("no finite vertices to frame")
    x0, x1 = min(xs), max(xs)
    y1 = max(max(ys), 0.2)
    pad = _PAD_FRACTION * max(x1 - x0, y1, 1.0)
    return x0 - pad, x1 + pad, 0.0, y1 + pad


def render_tiling(g: TriangleGroupData, dom: DomainSpec,
                  radius: int) -> str:
    """Complete SVG document for the tiling of the given radius."""
    tiles = tile(g, dom, radius)
    x0, x1, y0, y1 = _view_box(tiles)
    scale = _WIDTH_PX / (x1 - x0)
    height = (y1 - y0) * scale

    def to_px(z: complex) -> tuple[float, float]:
        return (z.real - x0) * scale, (y1 - z.imag) * scale

    # keep segments that touch a loosely padded box; the rest run far
    # off-canvas (edge samples toward infinity grow geometrically)
    slack = (x1 - x0) + (y1 - y0)
    lo_x, hi_x = x0 - slack, x1 + slack
    hi_y = y1 + slack

    def in_loose(z: complex) -> bool:
        return lo_x <= z.real <= hi_x and z.imag <= hi_y

    base_edges = _edge_samples(g, dom)
    paths = []
    for t in tiles:
        parts = []
        for pts in base_edges:
            mapped = [t.mat.apply(z) for z in pts]
            seg = _clip_polyline(mapped, in_loose)
            if len(seg) >= 2:
                parts.append(_subpath(seg, to_px))
        if not parts:
            continue
        paths.append('  <path d="%s" fill="none" stroke="%s" '
                     'stroke-width="1.1" data-word="%s"/>'
                     % (" ".join(parts), _STROKE,
                        _xml_escape(format_word(t.word))))

    axis_y = (y1 - 0.0) * scale
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %.2f %.2f">' % (round(_WIDTH_PX), round(height),
                                      _WIDTH_PX, height),
        '  <rect x="0" y="0" width="%.2f" height="%.2f" fill="#ffffff"/>'
        % (_WIDTH_PX, height),
        '  <line x1="0" y1="%.2f" x2="%.2f" y2="%.2f" stroke="%s" '
        'stroke-width="1"/>' % (axis_y, _WIDTH_PX, axis_y, _AXIS),
    ]
    lines.extend(paths)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _clip_polyline(pts: list[complex], keep) -> list[complex]:
    """Drop a tail of points far outside the frame but keep the crossing
    segment so strokes exit the canvas instead of stopping short."""
    out = []
    prev_in = True
    for z in pts:
        inside = keep(z)
        if inside or prev_in:
            out.append(z)
        prev_in = inside
    return out


def _subpath(pts: list[complex], to_px) -> str:
    coords = ["%.2f %.2f" % to_px(z) for z in pts]
    return "M " + " L ".join(coords)


def write_tiling(path: str, g: TriangleGroupData, dom: DomainSpec,
                 radius: int):
    text = render_tiling(g, dom, radius)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return len(text)

"""Deterministic SVG drawings of lattice polygons."""

from __future__ import annotations

from math import ceil, floor

from .lattice import Polygon, contains

SCALE = 40
MARGIN = 0.3


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def render_svg(p: Polygon, title: str = "") -> str:
    """SVG with the lattice window fitted to the polygon plus a small margin.

    Lattice points are grey dots (black when inside the polygon), the
    polygon is filled, and the origin is marked with a ring.
    """
    xs = [v[0] for v in p.vertices] + [0]
    ys = [v[1] for v in p.vertices] + [0]
    x0, x1 = min(xs) - MARGIN, max(xs) + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + MARGIN
    w, h = (x1 - x0) * SCALE, (y1 - y0) * SCALE

    def sx(x):
        return _fmt((x - x0) * SCALE)

    def sy(y):
        return _fmt((y1 - y) * SCALE)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in p.vertices)
    out.append(f'<polygon points="{pts}" fill="#cfe0f3" stroke="#1f4e79" stroke-width="2"/>')
    for y in range(ceil(y0), floor(y1) + 1):
        for x in range(ceil(x0), floor(x1) + 1):
            colour = "#000000" if contains(p, (x, y)) else "#b0b0b0"
            out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="3" fill="{colour}"/>')
    out.append(f'<circle cx="{sx(0)}" cy="{sy(0)}" r="7" fill="none" stroke="#c00000" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")

"""Deterministic SVG 1.1 drawings of lattices with optional decoration layers."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .lattice import Lattice, Matching

EDGE_COLORS = {"x": "#d62728", "y": "#2ca02c", "z": "#1f77b4"}
FACE_FILLS = {"white": "#ffffff", "black": "#bdbdbd", "x": "#f7c6c7", "y": "#c7e9c0", "z": "#c6dbef"}
_SCALE = 40.0
_PAD = 30.0


@dataclass
class Decorations:
    """Optional overlays.  Empty decorations draw the bare lattice."""

    matching: Matching | None = None
    paths: list[tuple[int, ...]] = field(default_factory=list)
    majoranas: list[int] = field(default_factory=list)
    face_fill: dict[int, str] = field(default_factory=dict)
    title: str | None = None


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _image(p, ref, periods):
    if periods is None:
        return p
    (ax, ay), (bx, by) = periods
    best = None
    for s in (-1, 0, 1):
        for t in (-1, 0, 1):
            q = (p[0] + s * ax + t * bx, p[1] + s * ay + t * by)
            d = (q[0] - ref[0]) ** 2 + (q[1] - ref[1]) ** 2
            if best is None or d < best[0] - 1e-12:
                best = (d, q)
    return best[1]


def _segments(lat: Lattice, e: int):
    """One segment for an interior edge, two half-drawn stubs for an edge that wraps."""
    edge = lat.edges[e]
    pu, pv = lat.coords[edge.u], lat.coords[edge.v]
    qv = _image(pv, pu, lat.periods)
    if qv == pv:
        return [(pu, pv)]
    qu = _image(pu, pv, lat.periods)
    return [(pu, qv), (pv, qu)]


def render_svg(lat: Lattice, decorations: Decorations | None = None) -> str:
    """SVG text; identical inputs give byte-identical output."""
    dec = decorations or Decorations()
    xs = [p[0] for p in lat.coords]
    ys = [p[1] for p in lat.coords]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    width = (x1 - x0) * _SCALE + 2 * _PAD
    height = (y1 - y0) * _SCALE + 2 * _PAD

    def tx(p):
        # y grows upwards in lattice coordinates
        return _f(_PAD + (p[0] - x0) * _SCALE), _f(_PAD + (y1 - p[1]) * _SCALE)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" '
           f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">']
    if dec.title:
        out.append(f"<title>{escape(dec.title)}</title>")
    out.append('<g id="faces" stroke="none">')
    for f in sorted(dec.face_fill):
        verts = lat.face_vertices(f)
        ref = lat.coords[verts[0]]
        pts = " ".join(",".join(tx(_image(lat.coords[v], ref, lat.periods))) for v in verts)
        fill = FACE_FILLS.get(dec.face_fill[f], dec.face_fill[f])
        out.append(f'<polygon points="{pts}" fill="{escape(fill)}"/>')
    out.append("</g>")

    out.append('<g id="edges" stroke-width="2" stroke-linecap="round">')
    for e, edge in enumerate(lat.edges):
        for a, b in _segments(lat, e):
            (ax, ay), (bx, by) = tx(a), tx(b)
            out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="{EDGE_COLORS[edge.label]}"/>')
    out.append("</g>")

    if dec.matching is not None:
        out.append('<g id="matching" stroke="#000000" stroke-width="6" stroke-opacity="0.45" stroke-linecap="round">')
        for key in sorted(dec.matching.pairs):
            for e in dec.matching.pairs[key]:
                for a, b in _segments(lat, e):
                    (ax, ay), (bx, by) = tx(a), tx(b)
                    out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
        out.append("</g>")

    if dec.paths:
        out.append('<g id="paths" stroke="#ff7f0e" stroke-width="1.5" stroke-dasharray="4,3" fill="none">')
        for path in dec.paths:
            for e in path:
                for a, b in _segments(lat, e):
                    (ax, ay), (bx, by) = tx(a), tx(b)
                    out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
        out.append("</g>")

    out.append('<g id="vertices" fill="#333333">')
    for v, p in enumerate(lat.coords):
        cx, cy = tx(p)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3"/>')
    out.append("</g>")

    if dec.majoranas:
        out.append('<g id="majoranas" fill="#ffd700" stroke="#000000" stroke-width="1.5">')
        for k, v in enumerate(dec.majoranas):
            cx, cy = tx(lat.coords[v])
            out.append(f'<circle cx="{cx}" cy="{cy}" r="7"><title>{k}</title></circle>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

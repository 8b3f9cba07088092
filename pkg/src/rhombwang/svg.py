"""Deterministic SVG rendering of patches.

Rendering is presentation only: coordinates are decimal approximations of the
exact points at 9 significant digits, and the byte output is a pure function
of (patch, style). Element order is canonical (placements sorted by key, then
edge strokes, then overlay layers), so renders are golden-testable.

Overlays:

- "chains": each chain drawn as a translucent strip through its member
  centers, one stroke color per (normal class, chain index).
- "indices": each rhombus center labeled with the pair of transversal levels
  (K_c1, K_c2) of its anchor, the coordinates that index shape occurrences.
- "arrows": for patches colored with the Penrose scheme (names like "s0+",
  "d2-"), single or double arrowheads on each edge; colors that do not parse
  as arrow names (including "!blank") draw nothing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .chains import chain_indices, extract_chains
from .geometry import GeometryError, Patch, PlacedRhombus

OVERLAY_NAMES = ("chains", "indices", "arrows")

# fixed wheels; assignment by sorted key so output is input-determined
_SHAPE_FILLS = (
    "#c6dbef", "#fdd0a2", "#c7e9c0", "#dadaeb", "#f7c6c7",
    "#e7d4b5", "#b5d4e7", "#e7b5d4", "#d4e7b5", "#cccccc",
)
_EDGE_STROKES = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)
_CHAIN_STROKES = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf",
)
_BLANK_STROKE = "#dddddd"

_ARROW_RE = re.compile(r"^([sd])([0-9]+)([+-])$")


@dataclass(frozen=True)
class RenderStyle:
    """Rendering knobs; every field has a deterministic default.

    scale is pixels per unit edge. palettes maps edge color names to stroke
    colors; unmapped names get a stable default from a fixed wheel (sorted
    color order). overlays is a set drawn from {"chains", "indices",
    "arrows"}.
    """

    scale: float = 48.0
    palettes: Mapping[str, str] = field(default_factory=dict)
    overlays: frozenset = frozenset()
    stroke: str = "#444444"
    stroke_width: float = 1.0
    margin: float = 8.0

    def __post_init__(self):
        bad = set(self.overlays) - set(OVERLAY_NAMES)
        if bad:
            raise ValueError(
                f"unknown overlays {sorted(bad)}; known: {OVERLAY_NAMES}"
            )
        if self.scale <= 0:
            raise ValueError("scale must be positive")


def _fmt(x: float) -> str:
    """9 significant digits, no negative zero; sub-nanopixel noise from the
    float embedding of exact points snaps to 0."""
    x = float(x)
    if abs(x) < 1e-9:
        x = 0.0
    s = format(x, ".9g")
    return "0" if s == "-0" else s


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


class _Canvas:
    """Collects elements and the bounding box; y is flipped so the plane's
    positive imaginary axis points up on screen."""

    def __init__(self, scale: float):
        self.scale = scale
        self.parts: list[str] = []
        self.min_x = self.min_y = math.inf
        self.max_x = self.max_y = -math.inf

    def xy(self, z: complex) -> tuple[float, float]:
        x = z.real * self.scale
        y = -z.imag * self.scale
        self.min_x = min(self.min_x, x)
        self.max_x = max(self.max_x, x)
        self.min_y = min(self.min_y, y)
        self.max_y = max(self.max_y, y)
        return x, y

    def add(self, element: str) -> None:
        self.parts.append(element)


def _polygon_points(canvas: _Canvas, rh: PlacedRhombus) -> str:
    pts = [canvas.xy(v.complex_value()) for v in rh.vertices()]
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)


def _auto_palette(patch: Patch, style: RenderStyle) -> dict:
    colors = sorted(
        {c for rh in patch if rh.colors is not None for c in rh.colors}
    )
    table = {}
    i = 0
    for c in colors:
        if c in style.palettes:
            table[c] = style.palettes[c]
        elif c.startswith("!"):
            table[c] = _BLANK_STROKE
        else:
            table[c] = _EDGE_STROKES[i % len(_EDGE_STROKES)]
            i += 1
    return table


def _component_coords(patch: Patch) -> dict:
    """Transversal-level coordinates of every patch vertex, computed per
    edge-connected component (origin at each component's lexicographically
    least vertex). Labels are well defined within a component; across
    components only for presentation."""
    basis = patch.basis
    nc = basis.n_classes
    adj: dict = {v: [] for v in patch.vertex_map}
    for ekey in patch.edge_map:
        pa, pb = patch.edge_endpoints(ekey)
        cls, sign = basis.edge_step(pb.red - pa.red)
        adj[pa.key].append((pb.key, cls, sign))
        adj[pb.key].append((pa.key, cls, -sign))
    coords: dict = {}
    for start in sorted(adj):
        if start in coords:
            continue
        coords[start] = (0,) * nc
        stack = [start]
        while stack:
            v = stack.pop()
            kv = coords[v]
            for w, cls, sign in adj[v]:
                if w not in coords:
                    nw = list(kv)
                    nw[cls] += sign
                    coords[w] = tuple(nw)
                    stack.append(w)
    return coords


def _draw_arrow(canvas: _Canvas, rh: PlacedRhombus, side: int, out: list):
    m = _ARROW_RE.match(rh.colors[side])
    if m is None:
        return
    kind, cls, sign = m.group(1), int(m.group(2)), m.group(3)
    a, b = rh.side_endpoints(side)
    za, zb = a.complex_value(), b.complex_value()
    # canonical edge direction is +e_cls; the side may traverse it either way
    unit = rh.anchor.basis.unit_point(cls).complex_value()
    forward = zb - za if abs((zb - za) - unit) < 1e-9 else za - zb
    if sign == "-":
        forward = -forward
    mid = (za + zb) / 2
    tip_ts = (0.18,) if kind == "s" else (0.10, 0.26)
    width = 0.10
    for t in tip_ts:
        tip = mid + forward * t
        base = mid + forward * (t - 0.16)
        left = base + 1j * forward * width
        right = base - 1j * forward * width
        pts = " ".join(
            f"{_fmt(x)},{_fmt(y)}"
            for x, y in (canvas.xy(tip), canvas.xy(left), canvas.xy(right))
        )
        out.append(f'<polygon points="{pts}" fill="#000000" />')


def render_svg(patch: Patch, style: Optional[RenderStyle] = None) -> str:
    """Render a patch (colored or not) to an SVG document string.

    One polygon per rhombus in canonical key order; optional overlay layers
    follow in a fixed sequence. Byte-identical across runs for equal inputs.
    """
    if style is None:
        style = RenderStyle()
    if patch.is_empty:
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1">'
            "</svg>\n"
        )

    canvas = _Canvas(style.scale)
    order = sorted(patch, key=lambda rh: rh.key)
    shape_keys = sorted({rh.shape.key for rh in order})
    fill_of = {
        k: _SHAPE_FILLS[i % len(_SHAPE_FILLS)]
        for i, k in enumerate(shape_keys)
    }
    colored = any(rh.colors is not None for rh in order)
    edge_palette = _auto_palette(patch, style) if colored else {}

    body: list[str] = []
    for rh in order:
        body.append(
            f'<polygon points="{_polygon_points(canvas, rh)}" '
            f'fill="{fill_of[rh.shape.key]}" stroke="{style.stroke}" '
            f'stroke-width="{_fmt(style.stroke_width)}" '
            'stroke-linejoin="round" />'
        )

    if colored:
        for rh in order:
            if rh.colors is None:
                continue
            for side in range(4):
                a, b = rh.side_endpoints(side)
                xa, ya = canvas.xy(a.complex_value())
                xb, yb = canvas.xy(b.complex_value())
                # inset toward the center so the two sides of a shared edge
                # stay distinguishable when colors disagree
                cx, cy = canvas.xy(rh.float_center())
                xa, ya = xa + (cx - xa) * 0.12, ya + (cy - ya) * 0.12
                xb, yb = xb + (cx - xb) * 0.12, yb + (cy - yb) * 0.12
                stroke = edge_palette[rh.colors[side]]
                body.append(
                    f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" '
                    f'x2="{_fmt(xb)}" y2="{_fmt(yb)}" '
                    f'stroke="{stroke}" '
                    f'stroke-width="{_fmt(style.stroke_width * 2.5)}" '
                    'stroke-linecap="round" />'
                )

    if "chains" in style.overlays:
        try:
            chains = chain_indices(patch)
        except GeometryError:
            # disconnected patch: level indexing is undefined, fall back to
            # the deterministic extraction order within each normal class
            chains = extract_chains(patch)
            seen: dict = {}
            for c in chains:
                c.index = seen[c.normal] = seen.get(c.normal, -1) + 1
        for c in chains:
            pts = [canvas.xy(m.float_center()) for m in c.members]
            stroke = _CHAIN_STROKES[
                (c.normal * 3 + c.index) % len(_CHAIN_STROKES)
            ]
            if len(pts) == 1:
                x, y = pts[0]
                body.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" '
                    f'r="{_fmt(style.scale * 0.18)}" fill="{stroke}" '
                    'fill-opacity="0.45" />'
                )
            else:
                d = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
                body.append(
                    f'<polyline points="{d}" fill="none" stroke="{stroke}" '
                    f'stroke-width="{_fmt(style.scale * 0.3)}" '
                    'stroke-opacity="0.45" stroke-linecap="round" '
                    'stroke-linejoin="round" />'
                )

    if "arrows" in style.overlays and colored:
        for rh in order:
            if rh.colors is None:
                continue
            for side in range(4):
                _draw_arrow(canvas, rh, side, body)

    if "indices" in style.overlays:
        coords = _component_coords(patch)
        size = style.scale * 0.22
        for rh in order:
            levels = coords[rh.anchor.key]
            label = f"{levels[rh.shape.c1]},{levels[rh.shape.c2]}"
            x, y = canvas.xy(rh.float_center())
            body.append(
                f'<text x="{_fmt(x)}" y="{_fmt(y + size * 0.35)}" '
                f'font-size="{_fmt(size)}" font-family="monospace" '
                'text-anchor="middle" fill="#000000">'
                f"{_esc(label)}</text>"
            )

    pad = style.margin
    vb = (
        canvas.min_x - pad,
        canvas.min_y - pad,
        (canvas.max_x - canvas.min_x) + 2 * pad,
        (canvas.max_y - canvas.min_y) + 2 * pad,
    )
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(vb[0])} {_fmt(vb[1])} {_fmt(vb[2])} {_fmt(vb[3])}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"

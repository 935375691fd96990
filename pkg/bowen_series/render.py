"""SVG output: tessellations, fundamental domains and graphs of interval maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .catalog import GroupPresentation
from .circle_maps import as_piecewise
from .dimension import IntervalMarkovMap, vertex_set
from .freegroup import cayley_ball
from .moebius import geodesic, to_unit

TESSELLATION_DEPTH_CAP = 6
GRAPH_SAMPLES = 512
DEFAULT_SIZE = 512
TARGETS = ("tessellation", "domain", "map-graph", "logderiv-graph", "vertex-ruler")

_SVG_NS = "http://www.w3.org/2000/svg"
_MARGIN = 16


@dataclass(frozen=True)
class RenderSpec:
    target: str
    depth: int = 3
    size: int = DEFAULT_SIZE
    stroke: str = "#1f4e79"
    accent: str = "#c0392b"

    def __post_init__(self) -> None:
        if self.target not in TARGETS:
            raise ValueError(f"unknown render target: {self.target}")
        if self.size < 64:
            raise ValueError("image size must be at least 64 px")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if self.target == "tessellation" and self.depth > TESSELLATION_DEPTH_CAP:
            raise ValueError(f"tessellation depth is capped at {TESSELLATION_DEPTH_CAP}")


def _num(x: float) -> str:
    text = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _attrs(items: dict[str, Any]) -> str:
    return " ".join(f'{k.replace("_", "-")}="{_num(v) if isinstance(v, float) else v}"' for k, v in items.items())


def _document(size: int, body: Iterable[str], title: str) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="{_SVG_NS}" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<title>{title}</title>",
        *body,
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


class _DiskCanvas:
    def __init__(self, size: int) -> None:
        self.center = size / 2
        self.radius = size / 2 - _MARGIN

    def xy(self, z: complex) -> tuple[float, float]:
        return self.center + self.radius * z.real, self.center - self.radius * z.imag

    def boundary(self, stroke: str) -> str:
        return f"<circle {_attrs({'cx': self.center, 'cy': self.center, 'r': self.radius, 'fill': 'none', 'stroke': stroke, 'stroke_width': 1.5})}/>"

    def geodesic_path(self, p: complex, q: complex, stroke: str, css: str = "edge") -> str:
        x1, y1 = self.xy(p)
        x2, y2 = self.xy(q)
        circle = geodesic(p, q).circle()
        if circle is None:
            d = f"M {_num(x1)} {_num(y1)} L {_num(x2)} {_num(y2)}"
        else:
            center, r = circle
            u, v = p - center, q - center
            sweep = 1 if u.real * v.imag - u.imag * v.real > 0 else 0
            rr = _num(r * self.radius)
            d = f"M {_num(x1)} {_num(y1)} A {rr} {rr} 0 0 {sweep} {_num(x2)} {_num(y2)}"
        return f'<path class="{css}" d="{d}" fill="none" stroke="{stroke}" stroke-width="1"/>'

    def dot(self, z: complex, fill: str) -> str:
        x, y = self.xy(z)
        return f'<circle class="vertex" {_attrs({"cx": x, "cy": y, "r": 3.0, "fill": fill})}/>'


def _edge_key(p: complex, q: complex) -> tuple[tuple[float, float], ...]:
    ends = sorted(((round(p.real, 9), round(p.imag, 9)), (round(q.real, 9), round(q.imag, 9))))
    return tuple(ends)


def tessellation_edges(gp: GroupPresentation, depth: int) -> list[tuple[complex, complex]]:
    """Images of the fundamental-domain edges under all reduced words of length <= depth."""
    if not 0 <= depth <= TESSELLATION_DEPTH_CAP:
        raise ValueError(f"depth must be between 0 and {TESSELLATION_DEPTH_CAP}")
    vertices = gp.domain.vertices
    sides = [(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))]
    ball = cayley_ball(gp.generating_set(), depth)
    seen: set[tuple[tuple[float, float], ...]] = set()
    edges = []
    for sphere in ball.spheres:
        for word in sphere:
            m = gp.evaluate(word)
            for p, q in sides:
                a, b = to_unit(m(p)), to_unit(m(q))
                if abs(a - b) < 1e-9:
                    continue
                key = _edge_key(a, b)
                if key not in seen:
                    seen.add(key)
                    edges.append((a, b))
    return edges


def render_tessellation(gp: GroupPresentation, depth: int, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec("tessellation", depth)
    canvas = _DiskCanvas(spec.size)
    body = [canvas.boundary(spec.stroke)]
    body += [canvas.geodesic_path(p, q, spec.stroke) for p, q in tessellation_edges(gp, depth)]
    return _document(spec.size, body, f"{gp.name} tessellation, depth {depth}")


def render_fundamental_domain(obj: Any, spec: RenderSpec | None = None) -> str:
    """The circle, the break points and the ideal polygon they span."""
    pm = as_piecewise(obj)
    spec = spec or RenderSpec("domain")
    canvas = _DiskCanvas(spec.size)
    points = pm.break_points
    body = [canvas.boundary(spec.stroke)]
    body += [canvas.geodesic_path(points[i], points[(i + 1) % len(points)], spec.stroke) for i in range(len(points))]
    body += [canvas.dot(z, spec.accent) for z in points]
    return _document(spec.size, body, f"{pm.name or 'map'} fundamental domain")


class _GraphCanvas:
    def __init__(self, size: int, y_max: float) -> None:
        self.size = size
        self.span = size - 2 * _MARGIN
        self.y_max = y_max

    def xy(self, x: float, y: float) -> tuple[float, float]:
        return _MARGIN + self.span * x, self.size - _MARGIN - self.span * min(y, self.y_max) / self.y_max

    def polyline(self, points: list[tuple[float, float]], stroke: str) -> str:
        coords = " ".join(f"{_num(a)},{_num(b)}" for a, b in (self.xy(x, y) for x, y in points))
        return f'<polyline class="branch" points="{coords}" fill="none" stroke="{stroke}" stroke-width="1.5"/>'

    def vertical(self, x: float, stroke: str, css: str = "break") -> str:
        x1, y1 = self.xy(x, 0.0)
        _, y2 = self.xy(x, self.y_max)
        return f'<line class="{css}" {_attrs({"x1": x1, "y1": y1, "x2": x1, "y2": y2, "stroke": stroke, "stroke_dasharray": "4 3"})}/>'

    def horizontal(self, y: float, stroke: str) -> str:
        x1, y1 = self.xy(0.0, y)
        x2, _ = self.xy(1.0, y)
        return f'<line class="guide" {_attrs({"x1": x1, "y1": y1, "x2": x2, "y2": y1, "stroke": stroke})}/>'

    def frame(self, stroke: str) -> str:
        x1, y1 = self.xy(0.0, 0.0)
        x2, y2 = self.xy(1.0, self.y_max)
        return f'<rect {_attrs({"x": x1, "y": y2, "width": x2 - x1, "height": y1 - y2, "fill": "none", "stroke": stroke})}/>'


def _samples(lo: Fraction, hi: Fraction) -> list[float]:
    a, b = float(lo), float(hi)
    return [a + (b - a) * k / (GRAPH_SAMPLES - 1) for k in range(GRAPH_SAMPLES)]


def _graph_values(imap: IntervalMarkovMap, log: bool) -> list[list[tuple[float, float]]]:
    branches = []
    for piece in imap.pieces:
        points = []
        for x in _samples(piece.lo, piece.hi):
            if log:
                y = piece.log_derivative(x)
            else:
                y = (piece.a * x + piece.b) / (piece.c * x + piece.d)
            points.append((x, y))
        branches.append(points)
    return branches


def render_interval_map(imap: IntervalMarkovMap, spec: RenderSpec) -> str:
    if spec.target == "vertex-ruler":
        return _render_vertex_ruler(imap, spec)
    if spec.target not in ("map-graph", "logderiv-graph"):
        raise ValueError(f"{spec.target} is not an interval-map target")
    log = spec.target == "logderiv-graph"
    branches = _graph_values(imap, log)
    y_max = max(y for branch in branches for _, y in branch) if log else 1.0
    y_max = max(y_max, imap.entropy * 1.1) if log else y_max
    canvas = _GraphCanvas(spec.size, y_max)
    body = [canvas.frame("#888888")]
    body += [canvas.vertical(float(b), "#888888") for b in imap.break_points]
    if log:
        body.append(canvas.horizontal(imap.entropy, spec.accent))
    body += [canvas.polyline(branch, spec.stroke) for branch in branches]
    title = f"{imap.name} {'ln|F′|' if log else 'F'}"
    return _document(spec.size, body, title)


def _render_vertex_ruler(imap: IntervalMarkovMap, spec: RenderSpec) -> str:
    vertices = vertex_set(imap, spec.depth)
    canvas = _GraphCanvas(spec.size, 1.0)
    x1, y = canvas.xy(0.0, 0.5)
    x2, _ = canvas.xy(1.0, 0.5)
    body = [f'<line class="axis" {_attrs({"x1": x1, "y1": y, "x2": x2, "y2": y, "stroke": "#888888"})}/>']
    for v in vertices:
        x, _ = canvas.xy(float(v), 0.5)
        body.append(
            f'<line class="tick" data-value="{v}" '
            f'{_attrs({"x1": x, "y1": y - 8.0, "x2": x, "y2": y + 8.0, "stroke": spec.stroke})}/>'
        )
    return _document(spec.size, body, f"{imap.name} rank-{spec.depth} vertices")

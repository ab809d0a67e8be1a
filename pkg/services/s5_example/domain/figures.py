"""Deterministic SVG figures: one panel per sheet, traces shaded."""

from dataclasses import dataclass, field
from typing import Optional

from services.gluing.domain.traces import ball_trace
from services.linf2.domain.geometry import Vec2
from services.linf2.domain.polygon import ConvexPolygon, ball_polygon, polygon_intersection
from services.s5_example.domain.example import s5_centers, s5_space
from services.s5_example.domain.models import S5Config, S5Report

PANEL_SIZE = 320
MARGIN = 24
BALL_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Panel:
    """One sheet drawn in its own coordinates."""

    title: str
    region: ConvexPolygon
    gluing_line: tuple[Vec2, Vec2]
    balls: list[tuple[int, ConvexPolygon]] = field(default_factory=list)
    traces: list[tuple[int, ConvexPolygon]] = field(default_factory=list)
    points: list[tuple[str, Vec2]] = field(default_factory=list)


@dataclass
class Scene:
    """
    Panels side by side over a shared view box [-extent, extent]^2.

    An empty scene renders as a single frame with axes.
    """

    extent: float = 3.5
    panels: list[Panel] = field(default_factory=list)
    caption: Optional[str] = None


def _fmt(value: float) -> str:
    text = f"{value:.3f}"
    return "0.000" if text == "-0.000" else text


class _Frame:
    def __init__(self, extent: float, column: int):
        self.extent = extent
        self.scale = (PANEL_SIZE - 2 * MARGIN) / (2 * extent)
        self.left = column * PANEL_SIZE + MARGIN

    def x(self, xi_1: float) -> float:
        return self.left + (xi_1 + self.extent) * self.scale

    def y(self, xi_2: float) -> float:
        return MARGIN + (self.extent - xi_2) * self.scale

    def points(self, poly: ConvexPolygon) -> str:
        return " ".join(f"{_fmt(self.x(v.x))},{_fmt(self.y(v.y))}" for v in poly.vertices)


def _view(extent: float) -> ConvexPolygon:
    return ball_polygon((0.0, 0.0), extent)


def _shape(frame: _Frame, poly: ConvexPolygon, attrs: str) -> list[str]:
    poly = polygon_intersection([_view(frame.extent), poly]) if len(poly.vertices) > 1 else poly
    if poly.is_empty:
        return []
    if len(poly.vertices) == 1:
        v = poly.vertices[0]
        return [f'  <circle cx="{_fmt(frame.x(v.x))}" cy="{_fmt(frame.y(v.y))}" r="2.5" {attrs}/>']
    if len(poly.vertices) == 2:
        p, q = poly.vertices
        return [
            f'  <line x1="{_fmt(frame.x(p.x))}" y1="{_fmt(frame.y(p.y))}" '
            f'x2="{_fmt(frame.x(q.x))}" y2="{_fmt(frame.y(q.y))}" {attrs} stroke-width="3"/>'
        ]
    return [f'  <polygon points="{frame.points(poly)}" {attrs}/>']


def _axes(frame: _Frame) -> list[str]:
    e = frame.extent
    return [
        f'  <rect x="{_fmt(frame.x(-e))}" y="{_fmt(frame.y(e))}" width="{_fmt(2 * e * frame.scale)}" '
        f'height="{_fmt(2 * e * frame.scale)}" fill="none" stroke="#999999"/>',
        f'  <line x1="{_fmt(frame.x(-e))}" y1="{_fmt(frame.y(0))}" x2="{_fmt(frame.x(e))}" '
        f'y2="{_fmt(frame.y(0))}" stroke="#cccccc"/>',
        f'  <line x1="{_fmt(frame.x(0))}" y1="{_fmt(frame.y(-e))}" x2="{_fmt(frame.x(0))}" '
        f'y2="{_fmt(frame.y(e))}" stroke="#cccccc"/>',
    ]


def emit_svg(scene: Scene) -> str:
    """Render a scene; identical scenes give byte-identical documents."""
    columns = max(1, len(scene.panels))
    width = columns * PANEL_SIZE
    height = PANEL_SIZE + (MARGIN if scene.caption else 0)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'  <rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]

    if not scene.panels:
        lines += _axes(_Frame(scene.extent, 0))

    for column, panel in enumerate(scene.panels):
        frame = _Frame(scene.extent, column)
        lines += _shape(frame, panel.region, 'fill="#f2f2f2" stroke="none"')
        lines += _axes(frame)
        for index, poly in panel.balls:
            color = BALL_COLORS[index % len(BALL_COLORS)]
            lines += _shape(frame, poly, f'fill="{color}" fill-opacity="0.25" stroke="{color}"')
        for index, poly in panel.traces:
            color = BALL_COLORS[index % len(BALL_COLORS)]
            lines += _shape(frame, poly, f'fill="{color}" fill-opacity="0.45" stroke="{color}" stroke-dasharray="4 2"')
        p, q = panel.gluing_line
        lines.append(
            f'  <line x1="{_fmt(frame.x(p.x))}" y1="{_fmt(frame.y(p.y))}" x2="{_fmt(frame.x(q.x))}" '
            f'y2="{_fmt(frame.y(q.y))}" stroke="#000000" stroke-width="2"/>'
        )
        for label, v in panel.points:
            lines.append(f'  <circle cx="{_fmt(frame.x(v.x))}" cy="{_fmt(frame.y(v.y))}" r="3" fill="#000000"/>')
            lines.append(
                f'  <text x="{_fmt(frame.x(v.x) + 5)}" y="{_fmt(frame.y(v.y) - 5)}" '
                f'font-family="sans-serif" font-size="11">{label}</text>'
            )
        lines.append(
            f'  <text x="{_fmt(frame.left)}" y="{_fmt(MARGIN - 8)}" font-family="sans-serif" '
            f'font-size="12">{panel.title}</text>'
        )

    if scene.caption:
        lines.append(
            f'  <text x="{MARGIN}" y="{_fmt(height - 8)}" font-family="sans-serif" font-size="12">{scene.caption}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def s5_scene(cfg: S5Config, report: Optional[S5Report] = None, extent: float = 3.5) -> Scene:
    """
    The three unit balls: native squares on their own sheet, traces on
    the other, and the gluing line in each panel.
    """
    X = s5_space(cfg)
    centers = s5_centers(cfg)
    panels = []
    for sheet in range(X.sheet_count):
        chart = X.chart(sheet)
        name = "H1" if sheet == 0 else "H2"
        panel = Panel(
            title=f"{name} (slope {chart.spec.boundary_slope:g})",
            region=X.sheet_polygon(sheet),
            gluing_line=(chart.point(-extent), chart.point(extent)),
        )
        for index, center in enumerate(centers):
            if center.sheet == sheet:
                panel.balls.append((index, polygon_intersection([X.sheet_polygon(sheet), ball_polygon(center.coords, 1.0)])))
                panel.points.append((f"x{index + 1}", center.coords))
            else:
                panel.traces.append((index, ball_trace(X, center, 1.0, sheet)))
        if report is not None and report.triple_witness is not None and report.triple_witness["sheet"] == sheet:
            panel.points.append(("w", Vec2(report.triple_witness["x"], report.triple_witness["y"])))
        panels.append(panel)

    caption = f"a={cfg.a:g} b={cfg.b:g} {cfg.orientation}"
    if report is not None:
        caption += " triple " + ("empty" if report.triple_empty else "nonempty")
    return Scene(extent=extent, panels=panels, caption=caption)

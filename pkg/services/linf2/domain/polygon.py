"""
Convex polygons in the l-infinity plane.

Balls of the plane are axis-parallel squares, so every region the toolkit
handles (balls, half-planes, ball traces and their intersections) is a convex
polygon. Polygons with one vertex are points and with two vertices are
segments; both are legal and appear in tangent configurations.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from services.linf2.domain.geometry import HalfPlane, Vec2, Window, as_vec, linf_dist
from services.linf2.domain.piecewise import PiecewiseLinear, pl_minimize
from shared.config import settings
from shared.errors import DomainError, FormatError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise vertex list; empty tuple means the empty region."""

    vertices: tuple[Vec2, ...] = ()
    window_clipped: bool = False

    @classmethod
    def from_points(
        cls,
        points: Iterable,
        window_clipped: bool = False,
        eps: Optional[float] = None,
    ) -> "ConvexPolygon":
        """Build from vertices already in convex order, normalizing them."""
        vertices = normalize([as_vec(p) for p in points], eps)
        return cls(tuple(vertices), window_clipped)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_degenerate(self) -> bool:
        """Point or segment."""
        return 0 < len(self.vertices) < 3

    def area(self) -> float:
        if len(self.vertices) < 3:
            return 0.0
        xs = np.array([v.x for v in self.vertices])
        ys = np.array([v.y for v in self.vertices])
        return 0.5 * float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1)))

    def edges(self) -> list[tuple[Vec2, Vec2]]:
        n = len(self.vertices)
        if n < 2:
            return []
        if n == 2:
            return [(self.vertices[0], self.vertices[1])]
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def support(self, direction) -> float:
        """max over the polygon of direction . p"""
        if self.is_empty:
            raise DomainError("Support function of an empty polygon")
        return max(v.dot(direction) for v in self.vertices)

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax)"""
        if self.is_empty:
            raise DomainError("Bounding box of an empty polygon")
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, p, tol: float = 0.0) -> bool:
        """
        Membership test relaxed by `tol` in l-infinity distance. For n >= 3
        each edge line moves out by `tol`, measured with the dual l-1 norm
        of its normal.

        A negative `tol` asks for a point at least |tol| inside; points and
        segments contain nothing in that sense.
        """
        n = len(self.vertices)
        if n == 0:
            return False
        if n == 1:
            return tol >= 0 and linf_dist(self.vertices[0], p) <= tol
        if n == 2:
            return tol >= 0 and _segment_distance(self.vertices[0], self.vertices[1], p) <= tol

        for start, end in self.edges():
            edge = end - start
            if edge.cross(Vec2(p[0] - start.x, p[1] - start.y)) < -tol * (abs(edge.x) + abs(edge.y)):
                return False
        return True

    def half_planes(self) -> list[HalfPlane]:
        """Half-planes whose intersection is the polygon (n >= 2)."""
        planes = []
        if len(self.vertices) == 2:
            start, end = self.vertices
            d = end - start
            normal = Vec2(d.y, -d.x)
            planes.append(HalfPlane(normal, normal.dot(start)))
            planes.append(HalfPlane(normal.scale(-1.0), -normal.dot(start)))
            planes.append(HalfPlane(d, d.dot(end)))
            planes.append(HalfPlane(d.scale(-1.0), -d.dot(start)))
            return planes
        for start, end in self.edges():
            d = end - start
            normal = Vec2(d.y, -d.x)
            planes.append(HalfPlane(normal, normal.dot(start)))
        return planes

    def to_vertex_text(self) -> str:
        """One "x y" pair per line, full float precision."""
        return "".join(f"{v.x!r} {v.y!r}\n" for v in self.vertices)

    @classmethod
    def from_vertex_text(cls, text: str) -> "ConvexPolygon":
        points = []
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"Line {number}: expected 'x y', got {line!r}")
            try:
                points.append(Vec2(float(parts[0]), float(parts[1])))
            except ValueError as e:
                raise FormatError(f"Line {number}: {e}") from e
        return cls.from_points(points)


EMPTY = ConvexPolygon()


def normalize(vertices: Sequence[Vec2], eps: Optional[float] = None) -> list[Vec2]:
    """
    Merge vertices closer than eps (l-infinity), drop collinear pass-through
    vertices and orient counterclockwise.

    Reversal vertices (collinear with a turn back) are kept so that a
    degenerate segment survives as two vertices.
    """
    eps = settings.eps_eq if eps is None else eps
    merged: list[Vec2] = []
    for v in vertices:
        if not merged or linf_dist(merged[-1], v) > eps:
            merged.append(v)
    while len(merged) > 1 and linf_dist(merged[0], merged[-1]) <= eps:
        merged.pop()

    changed = True
    while changed and len(merged) > 2:
        changed = False
        for i in range(len(merged)):
            prev, cur, nxt = merged[i - 1], merged[i], merged[(i + 1) % len(merged)]
            incoming, outgoing = cur - prev, nxt - cur
            scale = incoming.norm() * outgoing.norm()
            if abs(incoming.cross(outgoing)) <= 1e-12 * scale and incoming.dot(outgoing) > 0:
                del merged[i]
                changed = True
                break

    if len(merged) >= 3:
        signed = sum(merged[i - 1].cross(merged[i]) for i in range(len(merged)))
        if signed < 0:
            merged.reverse()
    if len(merged) > 2:
        merged = _collapse_flat(merged, eps)
    return merged


def _collapse_flat(vertices: list[Vec2], eps: float) -> list[Vec2]:
    """Turn a zero-width polygon into its two extreme vertices."""
    origin = vertices[0]
    far = max(vertices, key=lambda v: (v - origin).norm())
    axis = far - origin
    length = axis.norm()
    if length == 0.0:
        return [origin]
    if all(abs(axis.cross(v - origin)) <= eps * length for v in vertices):
        along = sorted(vertices, key=lambda v: axis.dot(v - origin))
        return [along[0], along[-1]]
    return vertices


def _segment_distance(start: Vec2, end: Vec2, p) -> float:
    """l-infinity distance from p to the segment [start, end]."""
    return pl_minimize(PiecewiseLinear.linf_to_line(p, start, end - start), 0.0, 1.0)[1]


def ball_polygon(center, r: float) -> ConvexPolygon:
    """The l-infinity ball B(center, r): an axis-parallel square."""
    if r < 0:
        raise DomainError(f"Radius must be nonnegative, got {r}")
    c = as_vec(center)
    if r == 0:
        return ConvexPolygon((c,))
    return ConvexPolygon((
        Vec2(c.x - r, c.y - r),
        Vec2(c.x + r, c.y - r),
        Vec2(c.x + r, c.y + r),
        Vec2(c.x - r, c.y + r),
    ))


def window_polygon(window: Window) -> ConvexPolygon:
    square = ball_polygon((0.0, 0.0), window.radius)
    return ConvexPolygon(square.vertices, window_clipped=True)


def clip(poly: ConvexPolygon, h: HalfPlane, slack: float = 0.0) -> ConvexPolygon:
    """
    Sutherland-Hodgman clip of a convex polygon by one half-plane.

    Args:
        poly: Polygon to clip
        h: Half-plane u . p <= c
        slack: Relaxes the half-plane outward by this Euclidean distance

    Returns:
        poly intersected with the relaxed half-plane (possibly empty)
    """
    if poly.is_empty:
        return poly

    boundary = slack * h.normal_length
    guard = settings.eps_eq * h.normal_length * max(1.0, _magnitude(poly))
    values = [h.value(v) - boundary for v in poly.vertices]
    inside = [value <= guard for value in values]

    if all(inside):
        return poly
    if not any(inside):
        return EMPTY

    n = len(poly.vertices)
    if n == 1:
        return EMPTY

    out: list[Vec2] = []
    for i in range(n):
        j = (i + 1) % n
        cur, nxt = poly.vertices[i], poly.vertices[j]
        if inside[i]:
            out.append(cur)
        if inside[i] != inside[j]:
            out.append(_boundary_point(cur, nxt, values[i], values[j], h, boundary))

    vertices = normalize(out)
    return ConvexPolygon(tuple(vertices), poly.window_clipped)


def _magnitude(poly: ConvexPolygon) -> float:
    return max(max(abs(v.x), abs(v.y)) for v in poly.vertices)


def _boundary_point(cur: Vec2, nxt: Vec2, v_cur: float, v_nxt: float, h: HalfPlane, boundary: float) -> Vec2:
    s = min(1.0, max(0.0, -v_cur / (v_nxt - v_cur)))
    point = cur + (nxt - cur).scale(s)
    level = h.c + boundary
    if h.u.y == 0.0:
        return Vec2(level / h.u.x, point.y)
    if h.u.x == 0.0:
        return Vec2(point.x, level / h.u.y)
    return point


def clip_all(poly: ConvexPolygon, planes: Iterable[HalfPlane], slack: float = 0.0) -> ConvexPolygon:
    for h in planes:
        poly = clip(poly, h, slack)
        if poly.is_empty:
            break
    return poly


def polygon_intersection(polys: Sequence[ConvexPolygon], slack: float = 0.0) -> ConvexPolygon:
    """
    Common intersection of convex polygons by successive clipping.

    Point-shaped inputs are tested for membership instead of clipped.
    With slack > 0 every constraint is relaxed outward by `slack`, which
    keeps tangent configurations (a single common corner) nonempty.
    """
    if not polys:
        raise DomainError("polygon_intersection needs at least one polygon")

    result = polys[0]
    for other in polys[1:]:
        if result.is_empty:
            break
        if other.is_empty:
            return EMPTY
        if len(other.vertices) == 1:
            point = other.vertices[0]
            tol = slack + settings.eps_eq * max(1.0, _magnitude(result))
            result = ConvexPolygon((point,), result.window_clipped) if result.contains(point, tol) else EMPTY
            continue
        result = clip_all(result, other.half_planes(), slack)
        if other.window_clipped:
            result = ConvexPolygon(result.vertices, True)

    return result


def convex_hull(points: Iterable) -> ConvexPolygon:
    """Convex hull, with point and segment results for degenerate input."""
    pts = np.unique(np.array([as_vec(p) for p in points], dtype=float), axis=0)
    if len(pts) == 0:
        return EMPTY
    if len(pts) == 1:
        return ConvexPolygon((Vec2(*pts[0]),))

    offsets = pts - pts[0]
    far = offsets[np.argmax(np.hypot(offsets[:, 0], offsets[:, 1]))]
    spread = np.abs(offsets[:, 0] * far[1] - offsets[:, 1] * far[0])
    if spread.max() <= settings.eps_eq * float(np.dot(far, far)):
        return _extremes(pts, far)

    try:
        hull = ConvexHull(pts)
    except QhullError:
        logger.debug(f"Qhull rejected {len(pts)} points, treating them as collinear")
        return _extremes(pts, far)

    return ConvexPolygon.from_points(pts[hull.vertices])


def _extremes(pts: np.ndarray, axis: np.ndarray) -> ConvexPolygon:
    projection = pts @ axis
    low, high = pts[np.argmin(projection)], pts[np.argmax(projection)]
    return ConvexPolygon.from_points([low, high])


def segment_neighborhood(p, q, r: float) -> ConvexPolygon:
    """Minkowski sum of the segment [p, q] with the square of radius r."""
    if r < 0:
        raise DomainError(f"Radius must be nonnegative, got {r}")
    p, q = as_vec(p), as_vec(q)
    if p == q:
        return ball_polygon(p, r)
    if r == 0:
        return ConvexPolygon.from_points([p, q])
    corners = [c for end in (p, q) for c in ball_polygon(end, r).vertices]
    return convex_hull(corners)


def polygon_neighborhood(poly: ConvexPolygon, r: float) -> ConvexPolygon:
    """B(P, r) = P plus the square of radius r."""
    if r < 0:
        raise DomainError(f"Radius must be nonnegative, got {r}")
    if poly.is_empty or r == 0:
        return poly
    corners = [c for v in poly.vertices for c in ball_polygon(v, r).vertices]
    return ConvexPolygon(convex_hull(corners).vertices, poly.window_clipped)


def polygon_nearest(poly: ConvexPolygon, p) -> tuple[Vec2, float]:
    """
    Nearest point of a convex polygon to p in the l-infinity metric.

    Returns:
        (nearest point, distance); the point itself at distance 0 when inside
    """
    if poly.is_empty:
        raise DomainError("Nearest point in an empty polygon")
    p = as_vec(p)
    if len(poly.vertices) == 1:
        return poly.vertices[0], linf_dist(poly.vertices[0], p)
    if poly.contains(p):
        return p, 0.0

    best_point, best_value = None, math.inf
    for start, end in poly.edges():
        f = PiecewiseLinear.linf_to_line(p, start, end - start)
        lam, value = pl_minimize(f, 0.0, 1.0)
        if value < best_value:
            best_point, best_value = start + (end - start).scale(lam), value
    return best_point, best_value


def polygon_witness(poly: ConvexPolygon) -> Optional[Vec2]:
    """A point of the polygon: the mean of its vertices, None when empty."""
    if poly.is_empty:
        return None
    xs = math.fsum(v.x for v in poly.vertices) / len(poly.vertices)
    ys = math.fsum(v.y for v in poly.vertices) / len(poly.vertices)
    return Vec2(xs, ys)


def hausdorff_estimate(first: ConvexPolygon, second: ConvexPolygon, directions: int = 720) -> float:
    """
    Hausdorff distance estimate from support functions over evenly spaced
    directions. Exact for convex sets in the limit of many directions.
    """
    if first.is_empty and second.is_empty:
        return 0.0
    if first.is_empty or second.is_empty:
        return math.inf
    angles = np.arange(directions) * (2.0 * math.pi / directions)
    units = np.column_stack([np.cos(angles), np.sin(angles)])
    a = np.array(first.vertices) @ units.T
    b = np.array(second.vertices) @ units.T
    return float(np.max(np.abs(a.max(axis=0) - b.max(axis=0))))

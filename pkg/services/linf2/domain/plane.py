"""The l-infinity plane (or a closed half-plane of it) and polygon-backed convex sets."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from services.linf2.domain.geometry import HalfPlane, Vec2, Window, as_vec, linf_dist
from services.linf2.domain.polygon import (
    ConvexPolygon,
    ball_polygon,
    clip,
    polygon_intersection,
    polygon_nearest,
    polygon_neighborhood,
    polygon_witness,
    segment_neighborhood,
    window_polygon,
)
from services.metric_core.domain.spaces import BallFamily, MetricSpace
from shared.config import settings
from shared.errors import DomainError
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)


class LinfPlane(MetricSpace):
    """
    l-infinity plane, optionally restricted to a closed half-plane.

    Both are hyperconvex, so a ball family has a common point iff the
    window-clipped polygon intersection is nonempty.
    """

    name = "linf2"

    def __init__(
        self,
        region: Optional[HalfPlane] = None,
        window: Optional[Window] = None,
        tolerance: Optional[Tolerance] = None,
    ):
        super().__init__(tolerance)
        self.region = region
        self.window = window or Window()

    @cached_property
    def region_polygon(self) -> ConvexPolygon:
        square = window_polygon(self.window)
        return square if self.region is None else clip(square, self.region)

    def validate_point(self, p) -> Vec2:
        v = as_vec(p)
        if self.region is not None and not self.region.contains(v, self.tolerance.eps_feas):
            raise DomainError(f"Point {tuple(v)} lies outside the half-plane {self.region}")
        if not self.window.contains(v, self.tolerance.eps_feas):
            raise DomainError(f"Point {tuple(v)} lies outside the window [-{self.window.radius}, {self.window.radius}]^2")
        return v

    def distance(self, p, q) -> float:
        return linf_dist(p, q)

    def ball(self, center, r: float) -> ConvexPolygon:
        """B(center, r) within the plane, clipped to the region."""
        return polygon_intersection([self.region_polygon, ball_polygon(center, r)])

    def family_region(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> ConvexPolygon:
        tol = tolerance or self.tolerance
        polys = [self.region_polygon] + [ball_polygon(b.center, b.radius) for b in family]
        return polygon_intersection(polys, slack=tol.solver_slack)

    def family_witness(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> Optional[Vec2]:
        tol = tolerance or self.tolerance
        witness = polygon_witness(self.family_region(family, tol))
        if witness is None:
            return None
        excess = max(linf_dist(witness, b.center) - b.radius for b in family)
        if excess > tol.eps_feas:
            logger.warning(f"Plane witness misses a ball by {excess:.3e}")
            return None
        return witness

    def sample_point(self, rng: np.random.Generator, half_width: float) -> Vec2:
        """Uniform point of the box [-w, w]^2 within the region."""
        for _ in range(settings.rejection_budget):
            p = Vec2(*rng.uniform(-half_width, half_width, size=2))
            if self.region is None or self.region.contains(p):
                return p
        raise DomainError(f"No point of the region found in the box of half-width {half_width}")

    def sample_points(self, rng: np.random.Generator, count: int, half_width: float) -> np.ndarray:
        """Vectorized variant; returns only the proposals inside the region."""
        pts = rng.uniform(-half_width, half_width, size=(count, 2))
        if self.region is None:
            return pts
        inside = pts @ np.array(self.region.u) <= self.region.c
        return pts[inside]

    def encode_point(self, p) -> list[float]:
        v = as_vec(p)
        return [v.x, v.y]

    def decode_point(self, data) -> Vec2:
        return self.validate_point(data)

    def describe(self) -> dict:
        info = {"name": self.name, "window": self.window.radius}
        if self.region is not None:
            info["region"] = {"u": list(self.region.u), "c": self.region.c}
        return info


@dataclass(frozen=True)
class ConvexSet:
    """
    A convex subset of the plane backed by a window-clipped polygon.

    Open sets (closed=False) exclude their boundary; they are used as
    non-proximinal fixtures.
    """

    label: str
    polygon: ConvexPolygon
    closed: bool = True
    params: dict = field(default_factory=dict, compare=False)

    @classmethod
    def whole(cls, plane: LinfPlane) -> "ConvexSet":
        return cls("whole", plane.region_polygon)

    @classmethod
    def half_plane(cls, h: HalfPlane, window: Optional[Window] = None) -> "ConvexSet":
        poly = clip(window_polygon(window or Window()), h)
        return cls("half_plane", poly, params={"u": list(h.u), "c": h.c})

    @classmethod
    def ball(cls, center, r: float, plane: Optional[LinfPlane] = None, closed: bool = True) -> "ConvexSet":
        poly = ball_polygon(center, r) if plane is None else plane.ball(center, r)
        return cls("ball", poly, closed, params={"center": list(as_vec(center)), "radius": r})

    @classmethod
    def point(cls, p) -> "ConvexSet":
        return cls("point", ConvexPolygon((as_vec(p),)), params={"point": list(as_vec(p))})

    @classmethod
    def boundary_line(cls, slope: float, window: Optional[Window] = None) -> "ConvexSet":
        """The line xi_2 = slope * xi_1 for |slope| <= 1, as a window-long segment."""
        if abs(slope) > 1:
            raise DomainError(f"Boundary slope must lie in [-1, 1], got {slope}")
        radius = (window or Window()).radius
        poly = ConvexPolygon((Vec2(-radius, -slope * radius), Vec2(radius, slope * radius)), window_clipped=True)
        return cls("boundary_line", poly, params={"slope": slope})

    @classmethod
    def segment_neighborhood(cls, p, q, r: float, plane: Optional[LinfPlane] = None) -> "ConvexSet":
        poly = segment_neighborhood(p, q, r)
        if plane is not None:
            poly = polygon_intersection([poly, plane.region_polygon])
        return cls("segment_neighborhood", poly, params={"p": list(as_vec(p)), "q": list(as_vec(q)), "radius": r})

    @classmethod
    def neighborhood(cls, base: "ConvexSet", r: float, plane: Optional[LinfPlane] = None) -> "ConvexSet":
        """B(A, r), clipped to the plane's region when given."""
        poly = polygon_neighborhood(base.polygon, r)
        if plane is not None:
            poly = polygon_intersection([poly, plane.region_polygon])
        return cls("neighborhood", poly, params={"base": base.label, "radius": r})

    @classmethod
    def intersection(cls, *sets: "ConvexSet", tolerance: Optional[Tolerance] = None) -> "ConvexSet":
        if not sets:
            raise DomainError("Intersection of no sets")
        slack = (tolerance or Tolerance()).solver_slack
        poly = polygon_intersection([s.polygon for s in sets], slack=slack)
        return cls("intersection", poly, all(s.closed for s in sets), params={"parts": [s.label for s in sets]})

    @classmethod
    def from_descriptor(cls, data: dict) -> "ConvexSet":
        poly = ConvexPolygon(tuple(as_vec(v) for v in data["vertices"]), bool(data.get("window_clipped", False)))
        return cls(data.get("kind", "polygon"), poly, bool(data.get("closed", True)), dict(data.get("params", {})))

    @property
    def is_empty(self) -> bool:
        return self.polygon.is_empty or (not self.closed and self.polygon.is_degenerate)

    def contains(self, p, tol: Optional[float] = None) -> bool:
        tol = settings.eps_feas if tol is None else tol
        if self.closed:
            return self.polygon.contains(p, tol)
        return self.polygon.contains(p, -tol)

    def distance(self, p) -> float:
        return polygon_nearest(self.polygon, p)[1]

    def nearest(self, p) -> Vec2:
        return polygon_nearest(self.polygon, p)[0]

    def sample(self, rng: np.random.Generator, half_width: Optional[float] = None) -> Vec2:
        """Random point of the set, preferring the part inside the sampling box."""
        if self.polygon.is_empty:
            raise DomainError(f"Cannot sample from the empty set {self.label}")
        poly = self.polygon
        if half_width is not None:
            boxed = polygon_intersection([poly, ball_polygon((0.0, 0.0), half_width)])
            if not boxed.is_empty:
                poly = boxed
        weights = rng.dirichlet(np.ones(len(poly.vertices)))
        coords = weights @ np.array(poly.vertices)
        return Vec2(float(coords[0]), float(coords[1]))

    def family_point(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> Optional[Vec2]:
        """A point of the set common to every ball of the family."""
        tol = tolerance or Tolerance()
        polys = [self.polygon] + [ball_polygon(b.center, b.radius) for b in family]
        return polygon_witness(polygon_intersection(polys, slack=tol.solver_slack))

    def restricted(self, *constraints: ConvexPolygon, tolerance: Optional[Tolerance] = None) -> ConvexPolygon:
        tol = tolerance or Tolerance()
        return polygon_intersection([self.polygon, *constraints], slack=tol.solver_slack)

    def descriptor(self) -> dict:
        return {
            "kind": self.label,
            "closed": self.closed,
            "params": self.params,
            "window_clipped": self.polygon.window_clipped,
            "vertices": [[v.x, v.y] for v in self.polygon.vertices],
        }


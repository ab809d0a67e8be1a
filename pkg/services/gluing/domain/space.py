"""The glued space of half-plane sheets."""

import logging
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from services.gluing.domain.glued_metric import (
    dist_to_gluing_set,
    glued_dist,
    gluing_set_family_feasible,
    nearest_parameter,
)
from services.gluing.domain.model import GluedPoint, GluingChart, SheetSpec
from services.gluing.domain.traces import glued_family_feasible
from services.linf2.domain.geometry import Vec2, Window
from services.linf2.domain.plane import LinfPlane
from services.linf2.domain.polygon import ConvexPolygon, clip, window_polygon
from services.metric_core.domain.spaces import BallFamily, MetricSpace
from shared.config import settings
from shared.errors import DomainError
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)


class GluedSpace2(MetricSpace):
    """
    Half-plane sheets of the l-infinity plane glued along their boundary lines.

    Boundary points with the same chart parameter are the same point of
    the glued space, whichever sheet they are written on.
    """

    name = "glued"

    def __init__(
        self,
        sheets: Sequence[SheetSpec],
        window: Optional[Window] = None,
        tolerance: Optional[Tolerance] = None,
    ):
        super().__init__(tolerance)
        if len(sheets) < 2:
            raise DomainError(f"A gluing needs at least two sheets, got {len(sheets)}")
        self.sheets = tuple(sheets)
        self.charts = tuple(GluingChart.for_sheet(spec) for spec in self.sheets)
        self.window = window or Window()

    @property
    def sheet_count(self) -> int:
        return len(self.sheets)

    def chart(self, sheet: int) -> GluingChart:
        if not 0 <= sheet < len(self.charts):
            raise DomainError(f"Sheet {sheet} outside 0..{len(self.charts) - 1}")
        return self.charts[sheet]

    @cached_property
    def _sheet_polygons(self) -> tuple[ConvexPolygon, ...]:
        square = window_polygon(self.window)
        return tuple(clip(square, chart.region) for chart in self.charts)

    def sheet_polygon(self, sheet: int) -> ConvexPolygon:
        self.chart(sheet)
        return self._sheet_polygons[sheet]

    def sheet_plane(self, sheet: int) -> LinfPlane:
        return LinfPlane(self.chart(sheet).region, self.window, self.tolerance)

    def point(self, sheet: int, x: float, y: float) -> GluedPoint:
        return self.validate_point(GluedPoint(sheet, Vec2(x, y)))

    def gluing_point(self, t: float, sheet: int = 0) -> GluedPoint:
        """The point of A with chart parameter t, written on `sheet`."""
        return GluedPoint(sheet, self.chart(sheet).point(t))

    def validate_point(self, p) -> GluedPoint:
        if isinstance(p, str):
            p = GluedPoint.parse(p)
        elif isinstance(p, dict):
            p = self.decode_point(p)
        if not isinstance(p, GluedPoint):
            raise DomainError(f"Expected a glued point, got {p!r}")
        chart = self.chart(p.sheet)
        if not chart.region.contains(p.coords, self.tolerance.eps_feas):
            raise DomainError(f"Point {p} lies outside sheet {p.sheet}")
        if not self.window.contains(p.coords, self.tolerance.eps_feas):
            raise DomainError(f"Point {p} lies outside the window [-{self.window.radius}, {self.window.radius}]^2")
        return p

    def on_gluing_set(self, p: GluedPoint, tol: Optional[float] = None) -> bool:
        tol = self.tolerance.eps_feas if tol is None else tol
        return self.chart(p.sheet).on_boundary(p.coords, tol)

    def distance(self, p, q) -> float:
        return glued_dist(self, p, q)

    def family_witness(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> Optional[GluedPoint]:
        return glued_family_feasible(self, family, tolerance)

    def sample_point(self, rng: np.random.Generator, half_width: float) -> GluedPoint:
        """Random sheet, then a uniform point of the box within that sheet."""
        sheet = int(rng.integers(self.sheet_count))
        region = self.charts[sheet].region
        for _ in range(settings.rejection_budget):
            p = Vec2(*rng.uniform(-half_width, half_width, size=2))
            if region.contains(p):
                return GluedPoint(sheet, p)
        raise DomainError(f"No point of sheet {sheet} in the box of half-width {half_width}")

    def encode_point(self, p) -> dict:
        return self.validate_point(p).encode()

    def decode_point(self, data) -> GluedPoint:
        try:
            p = GluedPoint(int(data["sheet"]), Vec2(float(data["x"]), float(data["y"])))
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed glued point {data!r}") from e
        return self.validate_point(p)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "window": self.window.radius,
            "sheets": [spec.model_dump(mode="json") for spec in self.sheets],
        }

    def gluing_set(self) -> "GluingSet":
        return GluingSet(self)


class GluingSet:
    """The gluing set A as a subset of the glued space."""

    label = "gluing_set"

    def __init__(self, space: GluedSpace2):
        self.space = space

    def contains(self, p, tol: Optional[float] = None) -> bool:
        return self.space.on_gluing_set(self.space.validate_point(p), tol)

    def distance(self, p) -> float:
        return dist_to_gluing_set(self.space, p)

    def nearest(self, p) -> GluedPoint:
        p = self.space.validate_point(p)
        t, _ = nearest_parameter(self.space, p)
        return self.space.gluing_point(t, p.sheet)

    def sample(self, rng: np.random.Generator, half_width: Optional[float] = None) -> GluedPoint:
        width = settings.sampling_half_width if half_width is None else half_width
        return self.space.gluing_point(float(rng.uniform(-width, width)))

    def family_point(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> Optional[GluedPoint]:
        t = gluing_set_family_feasible(self.space, family, tolerance)
        return None if t is None else self.space.gluing_point(t)

    def descriptor(self) -> dict:
        return {"kind": self.label}

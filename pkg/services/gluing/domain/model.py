"""Sheets, charts and points of a glued space of half-planes."""

import enum
from dataclasses import dataclass
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from services.linf2.domain.geometry import HalfPlane, Vec2, as_vec
from services.linf2.domain.piecewise import MaxTerm, linf_line_term
from shared.errors import DomainError


class Side(str, enum.Enum):
    """Which side of the boundary line the sheet occupies."""
    ABOVE = "above"
    BELOW = "below"


class SheetSpec(BaseModel):
    """
    One half-plane sheet: {xi_2 >= sigma xi_1} (above) or {xi_2 <= sigma xi_1}
    (below), where sigma = -slope for a reflected sheet and slope otherwise.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    slope: float = Field(ge=0.0, le=1.0)
    side: Side = Side.ABOVE
    reflected: bool = False

    @property
    def boundary_slope(self) -> float:
        return -self.slope if self.reflected else self.slope

    def half_plane(self) -> HalfPlane:
        if self.side == Side.ABOVE:
            return HalfPlane.above_line(self.boundary_slope)
        return HalfPlane.below_line(self.boundary_slope)


@dataclass(frozen=True)
class GluingChart:
    """
    phi(t) = (t, sigma t): an isometry from the parameter line onto the
    sheet's boundary line, since |sigma| <= 1. All sheets share the
    parameter, which is what identifies their boundary points.
    """

    spec: SheetSpec
    region: HalfPlane

    @classmethod
    def for_sheet(cls, spec: SheetSpec) -> "GluingChart":
        return cls(spec, spec.half_plane())

    @property
    def direction(self) -> Vec2:
        return Vec2(1.0, self.spec.boundary_slope)

    def point(self, t: float) -> Vec2:
        return Vec2(t, self.spec.boundary_slope * t)

    def parameter(self, p) -> float:
        return float(p[0])

    def on_boundary(self, p, tol: float) -> bool:
        return abs(p[1] - self.spec.boundary_slope * p[0]) <= tol

    def distance_term(self, p) -> MaxTerm:
        """t -> d(p, phi(t)) as a max term."""
        return linf_line_term(p, Vec2(0.0, 0.0), self.direction)


@dataclass(frozen=True)
class GluedPoint:
    """A point of one sheet."""

    sheet: int
    coords: Vec2

    def __post_init__(self):
        if isinstance(self.sheet, bool) or not isinstance(self.sheet, int):
            raise DomainError(f"Sheet index must be an int, got {self.sheet!r}")
        object.__setattr__(self, "coords", as_vec(self.coords))

    @classmethod
    def parse(cls, text: str) -> "GluedPoint":
        """Parse "SHEET:X,Y"."""
        try:
            sheet, coords = text.split(":", 1)
            x, y = coords.split(",")
            return cls(int(sheet), Vec2(float(x), float(y)))
        except ValueError as e:
            raise DomainError(f"Expected SHEET:X,Y, got {text!r}") from e

    def encode(self) -> dict:
        return {"sheet": self.sheet, "x": self.coords.x, "y": self.coords.y}

    def __str__(self) -> str:
        return f"{self.sheet}:{self.coords.x!r},{self.coords.y!r}"


@dataclass(frozen=True)
class GateInfo:
    """
    Gate of a point in the gluing set.

    residual_radius is r - d(x, gate) when a radius was supplied and the
    ball reaches the gluing set, otherwise None.
    """

    point: GluedPoint
    gate: GluedPoint
    parameter: float
    dist_to_gate: float
    residual_radius: Optional[float] = None
    samples: int = 0
    max_residual: float = 0.0


@dataclass(frozen=True)
class ExactDistanceWitness:
    """A point a of the gluing set with d(x, a) = d(x, A) and d(x, y) = d(x, a) + d(a, y)."""

    a: GluedPoint
    parameter: float
    s: float
    total: float

"""Points, half-planes and the bounding window of the l-infinity plane."""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from shared.config import settings
from shared.errors import DomainError


class Vec2(NamedTuple):
    """A point (xi_1, xi_2) of the plane."""
    x: float
    y: float

    def __add__(self, other):
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def scale(self, factor: float) -> "Vec2":
        return Vec2(self.x * factor, self.y * factor)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> float:
        return self.x * other[1] - self.y * other[0]

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


ORIGIN = Vec2(0.0, 0.0)


def as_vec(value) -> Vec2:
    """Coerce a 2-sequence into a finite Vec2."""
    try:
        x, y = float(value[0]), float(value[1])
    except (TypeError, ValueError, IndexError) as e:
        raise DomainError(f"Not a 2D point: {value!r}") from e
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"Point coordinates must be finite: {value!r}")
    return Vec2(x, y)


def linf_dist(p, q) -> float:
    """max(|p1 - q1|, |p2 - q2|)."""
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def to_rotated(p) -> Vec2:
    """
    (u, v) = ((xi_1 + xi_2) / 2, (xi_1 - xi_2) / 2). The l-infinity distance
    becomes the l-1 distance, so metric intervals are axis boxes in (u, v).
    """
    return Vec2((p[0] + p[1]) / 2.0, (p[0] - p[1]) / 2.0)


def from_rotated(q) -> Vec2:
    return Vec2(q[0] + q[1], q[0] - q[1])


@dataclass(frozen=True)
class HalfPlane:
    """The closed region {p : u . p <= c}."""

    u: Vec2
    c: float

    def __post_init__(self):
        if self.u[0] == 0.0 and self.u[1] == 0.0:
            raise DomainError("Half-plane normal must be nonzero")
        object.__setattr__(self, "u", as_vec(self.u))
        object.__setattr__(self, "c", float(self.c))

    @classmethod
    def above_line(cls, slope: float, intercept: float = 0.0) -> "HalfPlane":
        """{xi_2 >= slope * xi_1 + intercept}"""
        return cls(Vec2(slope, -1.0), -intercept)

    @classmethod
    def below_line(cls, slope: float, intercept: float = 0.0) -> "HalfPlane":
        """{xi_2 <= slope * xi_1 + intercept}"""
        return cls(Vec2(-slope, 1.0), intercept)

    @classmethod
    def x_at_most(cls, value: float) -> "HalfPlane":
        return cls(Vec2(1.0, 0.0), value)

    @classmethod
    def x_at_least(cls, value: float) -> "HalfPlane":
        return cls(Vec2(-1.0, 0.0), -value)

    @property
    def normal_length(self) -> float:
        return self.u.norm()

    def value(self, p) -> float:
        """Signed residual u . p - c (<= 0 inside)."""
        return self.u[0] * p[0] + self.u[1] * p[1] - self.c

    def contains(self, p, tol: float = 0.0) -> bool:
        """Membership, relaxed by `tol` in Euclidean distance."""
        return self.value(p) <= tol * self.normal_length

    def project(self, p) -> Vec2:
        """Euclidean projection onto the boundary line."""
        excess = self.value(p) / (self.u[0] ** 2 + self.u[1] ** 2)
        return Vec2(p[0] - excess * self.u[0], p[1] - excess * self.u[1])


@dataclass(frozen=True)
class Window:
    """Bounding square [-R, R]^2 that finitizes unbounded regions."""

    radius: float = field(default_factory=lambda: settings.window_radius)

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"Window radius must be positive, got {self.radius}")

    def contains(self, p, tol: float = 0.0) -> bool:
        return max(abs(p[0]), abs(p[1])) <= self.radius + tol

    def check_data(self, *points, radii=()) -> None:
        """Require R >= 10 x the extent of the data (|coordinates| + radii)."""
        extent = 0.0
        for p in points:
            extent = max(extent, abs(p[0]), abs(p[1]))
        for r in radii:
            extent = max(extent, 2.0 * r)
        if self.radius < 10.0 * extent:
            raise DomainError(
                f"Window radius {self.radius} is below 10x the data extent {extent}"
            )

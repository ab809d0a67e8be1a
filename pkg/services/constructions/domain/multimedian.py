"""Multimedian points: a common point of the three pairwise metric intervals."""

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict

from services.linf2.domain.geometry import Vec2, from_rotated, to_rotated
from services.linf2.domain.plane import LinfPlane
from services.metric_core.domain.predicates import interval_contains
from services.metric_core.domain.spaces import BallFamily, MetricSpace
from shared.errors import DomainError, PropertyViolation
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)


class MultimedianCoeffs(BaseModel):
    """alpha + beta = d(x, y), alpha + gamma = d(x, z), beta + gamma = d(y, z)."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    gamma: float

    @property
    def total(self) -> float:
        return self.alpha + self.beta + self.gamma


def multimedian_coefficients(space: MetricSpace, x, y, z, tol: Optional[Tolerance] = None) -> MultimedianCoeffs:
    """
    Raises:
        DomainError: If a coefficient is negative beyond eps_eq, i.e. the
            three distances violate the triangle inequality
    """
    eps = (tol or space.tolerance).eps_eq
    dxy, dxz, dyz = space.distance(x, y), space.distance(x, z), space.distance(y, z)
    raw = (
        (dxy + dxz - dyz) / 2.0,
        (dxy + dyz - dxz) / 2.0,
        (dxz + dyz - dxy) / 2.0,
    )
    if min(raw) < -eps:
        raise DomainError(f"Distances {dxy}, {dxz}, {dyz} violate the triangle inequality")
    alpha, beta, gamma = (max(0.0, c) for c in raw)
    return MultimedianCoeffs(alpha=alpha, beta=beta, gamma=gamma)


def multimedian(space: MetricSpace, x, y, z, tol: Optional[Tolerance] = None):
    """
    A point of I(x, y), I(y, z) and I(z, x).

    It is any common point of B(x, alpha), B(y, beta) and B(z, gamma). The
    plane uses the exact rotated median and falls back to the feasibility
    solver like every other space. Plane results are checked to eps_eq,
    glued ones to eps_feas.

    Raises:
        DomainError: On a triangle inequality violation
        PropertyViolation: If the balls have no common point (the space is
            not hyperconvex) or the result fails the interval checks
    """
    tol = tol or space.tolerance
    x, y, z = space.validate_point(x), space.validate_point(y), space.validate_point(z)
    coeffs = multimedian_coefficients(space, x, y, z, tol)
    family = BallFamily.of([x, y, z], [coeffs.alpha, coeffs.beta, coeffs.gamma])

    point = _plane_median(space, x, y, z) if isinstance(space, LinfPlane) else None
    if point is None:
        point = space.family_witness(family, tol)
    if point is None:
        raise PropertyViolation(
            "The multimedian balls have no common point",
            certificate={
                "points": [space.encode_point(p) for p in (x, y, z)],
                "coefficients": coeffs.model_dump(),
            },
        )

    check = tol if isinstance(space, LinfPlane) else Tolerance(eps_feas=tol.eps_feas, eps_eq=tol.eps_feas)
    for first, second in ((x, y), (y, z), (z, x)):
        if not interval_contains(space, first, second, point, check):
            raise PropertyViolation(
                f"Multimedian candidate {point} is not in the interval of {first} and {second}",
                certificate={"point": space.encode_point(point), "coefficients": coeffs.model_dump()},
            )

    logger.debug(f"Multimedian of {x}, {y}, {z} is {point}")
    return point


def _plane_median(plane: LinfPlane, x: Vec2, y: Vec2, z: Vec2) -> Optional[Vec2]:
    """
    Coordinatewise median in the rotated frame, where the l-infinity norm
    becomes the l-1 norm.

    None when the median leaves the plane's half-plane.
    """
    rotated = [to_rotated(p) for p in (x, y, z)]
    u = sorted(q.x for q in rotated)[1]
    v = sorted(q.y for q in rotated)[1]
    point = from_rotated((u, v))
    if plane.region is not None and not plane.region.contains(point, plane.tolerance.eps_eq):
        return None
    return point

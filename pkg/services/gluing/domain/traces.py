"""Ball traces on foreign sheets and family feasibility in a glued space."""

import enum
import logging
from typing import TYPE_CHECKING, Optional

from services.gluing.domain.glued_metric import distance_function, parameter_bounds
from services.gluing.domain.model import GluedPoint
from services.linf2.domain.piecewise import pl_minimize, pl_sublevel
from services.linf2.domain.polygon import (
    EMPTY,
    ConvexPolygon,
    ball_polygon,
    convex_hull,
    polygon_intersection,
    polygon_witness,
    segment_neighborhood,
)
from services.metric_core.domain.spaces import BallFamily
from shared.errors import DomainError
from shared.schemas import Tolerance

if TYPE_CHECKING:
    from services.gluing.domain.space import GluedSpace2

logger = logging.getLogger(__name__)


class TraceMethod(str, enum.Enum):
    """
    UNION: union of B(phi(t), r - d(x, phi(t))) over the parameter line.
    Exact for every chart.

    NEIGHBORHOOD: B(B(x, s) with A, r - s) with s = d(x, A). Exact when the
    gluing set is externally hyperconvex in the centre's sheet (slope 0).
    """
    UNION = "union"
    NEIGHBORHOOD = "neighborhood"


def ball_trace(
    X: "GluedSpace2",
    center: GluedPoint,
    r: float,
    target: int,
    method: TraceMethod = TraceMethod.UNION,
    slack: float = 0.0,
) -> ConvexPolygon:
    """
    B(center, r) seen on another sheet, clipped to that sheet and the window.

    Args:
        X: Glued space
        center: Ball centre
        r: Ball radius
        target: Sheet index other than center.sheet
        method: Trace construction, see TraceMethod
        slack: Outward relaxation used by the feasibility solver

    Returns:
        Convex polygon, empty when r < d(center, A)

    Raises:
        DomainError: On a negative radius or an invalid target sheet
    """
    if r < 0:
        raise DomainError(f"Radius must be nonnegative, got {r}")
    center = X.validate_point(center)
    X.chart(target)
    if target == center.sheet:
        raise DomainError("A ball trace needs a sheet other than the centre's")

    g = distance_function(X, center)
    lo, hi = parameter_bounds(X)
    _, s = pl_minimize(g, lo, hi)
    if r + slack < s:
        return EMPTY

    chart = X.chart(target)
    level = r + slack

    if TraceMethod(method) == TraceMethod.UNION:
        t_lo, t_hi = pl_sublevel(g, level, lo, hi)
        corners = []
        for t in g.candidates(t_lo, t_hi):
            radius = max(0.0, level - g(float(t)))
            corners.extend(ball_polygon(chart.point(float(t)), radius).vertices)
        region = convex_hull(corners)
    else:
        t_lo, t_hi = pl_sublevel(g, s, lo, hi, slack=X.tolerance.eps_eq)
        region = segment_neighborhood(chart.point(t_lo), chart.point(t_hi), max(0.0, level - s))

    return polygon_intersection([X.sheet_polygon(target), region], slack=slack)


def sheet_regions(
    X: "GluedSpace2",
    family: BallFamily,
    sheet: int,
    tolerance: Optional[Tolerance] = None,
    method: TraceMethod = TraceMethod.UNION,
) -> Optional[list[ConvexPolygon]]:
    """Per-ball regions on one sheet; None as soon as one ball misses the sheet."""
    tol = tolerance or X.tolerance
    regions = [X.sheet_polygon(sheet)]
    for ball in family:
        center = X.validate_point(ball.center)
        if center.sheet == sheet:
            regions.append(ball_polygon(center.coords, ball.radius))
            continue
        trace = ball_trace(X, center, ball.radius, sheet, method=method, slack=tol.solver_slack)
        if trace.is_empty:
            return None
        regions.append(trace)
    return regions


def glued_family_feasible(
    X: "GluedSpace2",
    family: BallFamily,
    tolerance: Optional[Tolerance] = None,
    method: TraceMethod = TraceMethod.UNION,
) -> Optional[GluedPoint]:
    """
    A common point of the family, or None when the intersection is empty.

    Every common point lies on some sheet, so the family is feasible iff
    the per-sheet intersection of native squares and traces is nonempty
    for some sheet.
    """
    tol = tolerance or X.tolerance

    for sheet in range(X.sheet_count):
        regions = sheet_regions(X, family, sheet, tol, method)
        if regions is None:
            continue
        witness = polygon_witness(polygon_intersection(regions, slack=tol.solver_slack))
        if witness is None:
            continue

        point = GluedPoint(sheet, witness)
        excess = max(X.distance(point, b.center) - b.radius for b in family)
        if excess <= tol.eps_feas:
            return point
        logger.debug(f"Sheet {sheet} witness {point} misses a ball by {excess:.3e}", extra={"sheet": sheet})

    return None

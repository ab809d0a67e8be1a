"""Ball family intersections in glued spaces, case by case."""

import enum
import logging
from dataclasses import dataclass
from typing import Optional

from services.constructions.domain.iterations import finite_intersection
from services.gluing.domain.glued_metric import dist_to_gluing_set, gate
from services.gluing.domain.model import GateInfo, GluedPoint
from services.gluing.domain.space import GluedSpace2
from services.gluing.domain.traces import TraceMethod, ball_trace
from services.linf2.domain.geometry import Vec2
from services.linf2.domain.plane import ConvexSet, LinfPlane
from services.linf2.domain.polygon import ball_polygon, polygon_intersection, polygon_witness
from services.metric_core.domain.predicates import first_inadmissible_pair
from services.metric_core.domain.spaces import BallFamily
from shared.errors import DomainError, PropertyViolation
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)


class IntersectionCase(int, enum.Enum):
    """Which branch of the strongly convex gluing argument applies."""
    INSIDE_GLUING_SET = 1
    VIOLATING_PAIRS = 2
    SHORT_RADIUS = 3


@dataclass(frozen=True)
class CasePlan:
    case: IntersectionCase
    sheet: Optional[int]
    gates: tuple[GateInfo, ...]
    violating_pairs: tuple[tuple[int, int], ...] = ()


def _certificate(X: GluedSpace2, family: BallFamily, **extra) -> dict:
    return {
        "centers": [X.encode_point(c) for c in family.centers],
        "radii": list(family.radii),
        **extra,
    }


def intersection_case(X: GluedSpace2, family: BallFamily, tolerance: Optional[Tolerance] = None) -> CasePlan:
    """
    Gates every center and picks the case.

    A center whose ball misses the gluing set fixes the sheet (short
    radius), and takes precedence over violating pairs of gate balls.

    Raises:
        NoGateError: If some center has no gate
        PropertyViolation: If short-radius centers or violating pairs
            sit on two different sheets
    """
    tol = tolerance or X.tolerance
    gates = tuple(gate(X, ball.center, radius=ball.radius) for ball in family)

    short = sorted({g.point.sheet for g in gates if g.residual_radius is None})
    if len(short) > 1:
        raise PropertyViolation(
            f"Balls missing the gluing set sit on sheets {short}",
            certificate=_certificate(X, family, sheets=short),
        )
    if short:
        return CasePlan(IntersectionCase.SHORT_RADIUS, short[0], gates)

    pairs = []
    for i in range(len(gates)):
        for j in range(i + 1, len(gates)):
            gap = abs(gates[i].parameter - gates[j].parameter)
            if gap > gates[i].residual_radius + gates[j].residual_radius + tol.eps_eq:
                pairs.append((i, j))
    if not pairs:
        return CasePlan(IntersectionCase.INSIDE_GLUING_SET, None, gates)

    sheets = sorted({gates[k].point.sheet for pair in pairs for k in pair})
    if len(sheets) > 1:
        raise PropertyViolation(
            f"Violating pairs of gate balls sit on sheets {sheets}",
            certificate=_certificate(X, family, sheets=sheets, pairs=[list(p) for p in pairs]),
        )
    return CasePlan(IntersectionCase.VIOLATING_PAIRS, sheets[0], gates, tuple(pairs))


def strongly_convex_glued_intersection(
    X: GluedSpace2,
    family: BallFamily,
    tolerance: Optional[Tolerance] = None,
) -> GluedPoint:
    """
    A common point of a pairwise admissible family when the gluing set is
    gated in every sheet.

    With every ball reaching the gluing set and all gate balls
    B(gate_i, r_i - d(x_i, gate_i)) pairwise meeting, the point lies on the
    gluing set. Otherwise one sheet hosts all trouble, and the point is
    found there from the native balls of that sheet and the gate balls of
    the other centers.

    Raises:
        DomainError: If the family is not pairwise admissible
        NoGateError: If the gluing set is not gated for some center
        PropertyViolation: If the case analysis meets a contradiction or
            the output fails verification
    """
    tol = tolerance or X.tolerance
    family = X.validate_family(family)
    bad = first_inadmissible_pair(X, family, tol)
    if bad is not None:
        raise DomainError(f"Balls {bad[0]} and {bad[1]} are not admissible")

    plan = intersection_case(X, family, tol)
    logger.debug(f"Strongly convex intersection uses case {plan.case.value} on sheet {plan.sheet}")

    if plan.case == IntersectionCase.INSIDE_GLUING_SET:
        lo = max(g.parameter - g.residual_radius for g in plan.gates)
        hi = min(g.parameter + g.residual_radius for g in plan.gates)
        if lo > hi + tol.eps_eq:
            raise PropertyViolation(
                f"Gate intervals do not meet: [{lo}, {hi}]",
                certificate=_certificate(X, family, case=plan.case.value),
            )
        point = X.gluing_point(0.5 * (lo + hi))
    else:
        point = _solve_on_sheet(X, family, plan, tol)

    for index, ball in enumerate(family):
        excess = X.distance(point, ball.center) - ball.radius
        if excess > tol.eps_feas:
            raise PropertyViolation(
                f"Output {point} misses ball {index} by {excess}",
                certificate=_certificate(X, family, case=plan.case.value, point=point.encode()),
            )
    return point


def _solve_on_sheet(X: GluedSpace2, family: BallFamily, plan: CasePlan, tol: Tolerance) -> GluedPoint:
    sheet = plan.sheet
    chart = X.chart(sheet)
    regions = [X.sheet_polygon(sheet)]
    for ball, info in zip(family, plan.gates):
        if ball.center.sheet == sheet:
            regions.append(ball_polygon(ball.center.coords, ball.radius))
        else:
            regions.append(ball_polygon(chart.point(info.parameter), info.residual_radius))

    witness = polygon_witness(polygon_intersection(regions, slack=tol.solver_slack))
    if witness is None:
        raise PropertyViolation(
            f"Mixed family on sheet {sheet} has no common point",
            certificate=_certificate(X, family, case=plan.case.value, sheet=sheet),
        )
    return GluedPoint(sheet, witness)


def gated_subset_witness(
    plane: LinfPlane,
    subset: ConvexSet,
    family: BallFamily,
    tolerance: Optional[Tolerance] = None,
) -> Vec2:
    """
    A common point inside a gated subset of balls centred in that subset.

    Any common point of the balls in the plane moves to its gate without
    leaving a ball.

    Raises:
        DomainError: If a center lies outside the subset
        PropertyViolation: If the balls have no common point or the
            nearest point is not a gate
    """
    tol = tolerance or plane.tolerance
    family = plane.validate_family(family)
    for center in family.centers:
        if subset.distance(center) > tol.eps_feas:
            raise DomainError(f"Center {tuple(center)} lies outside {subset.label}")

    point = plane.family_witness(family, tol)
    if point is None:
        raise PropertyViolation("The balls have no common point in the plane")

    moved = subset.nearest(point)
    for index, ball in enumerate(family):
        excess = plane.distance(moved, ball.center) - ball.radius
        if excess > tol.eps_feas:
            raise PropertyViolation(
                f"Nearest point {tuple(moved)} of {subset.label} leaves ball {index} by {excess}",
                certificate={"point": list(point), "moved": list(moved), "subset": subset.descriptor()},
            )
    return moved


def externally_glued_intersection(
    X: GluedSpace2,
    family: BallFamily,
    tolerance: Optional[Tolerance] = None,
) -> GluedPoint:
    """
    A common point of a pairwise admissible family when the gluing set is
    externally hyperconvex in every sheet.

    Balls that miss the gluing set all sit on one sheet; on that sheet
    every ball becomes a convex set (its own square, or the neighborhood
    trace of a foreign ball), the sets meet pairwise, and the iterative
    finite intersection yields the point.

    Raises:
        DomainError: If a sheet's boundary is not axis parallel, so the
            neighborhood traces are not exact, or the family is not
            pairwise admissible
        PropertyViolation: If the sets on the chosen sheet fail to meet
    """
    tol = tolerance or X.tolerance
    if any(chart.spec.boundary_slope != 0 for chart in X.charts):
        raise DomainError("External gluing needs horizontal boundary lines on every sheet")
    family = X.validate_family(family)
    bad = first_inadmissible_pair(X, family, tol)
    if bad is not None:
        raise DomainError(f"Balls {bad[0]} and {bad[1]} are not admissible")

    short = sorted({b.center.sheet for b in family if dist_to_gluing_set(X, b.center) > b.radius})
    if len(short) > 1:
        raise PropertyViolation(
            f"Balls missing the gluing set sit on sheets {short}",
            certificate=_certificate(X, family, sheets=short),
        )
    sheet = short[0] if short else 0
    plane = X.sheet_plane(sheet)

    sets = []
    for index, ball in enumerate(family):
        if ball.center.sheet == sheet:
            poly = polygon_intersection([X.sheet_polygon(sheet), ball_polygon(ball.center.coords, ball.radius)])
        else:
            poly = ball_trace(X, ball.center, ball.radius, sheet, method=TraceMethod.NEIGHBORHOOD)
        if poly.is_empty:
            raise PropertyViolation(
                f"Ball {index} does not reach sheet {sheet}",
                certificate=_certificate(X, family, sheet=sheet),
            )
        sets.append(ConvexSet(f"ball {index}", poly))

    try:
        coords = finite_intersection(plane, sets, tol)
    except DomainError as e:
        raise PropertyViolation(str(e), certificate=_certificate(X, family, sheet=sheet)) from e
    point = GluedPoint(sheet, coords)

    for index, ball in enumerate(family):
        excess = X.distance(point, ball.center) - ball.radius
        if excess > tol.eps_feas:
            raise PropertyViolation(
                f"Output {point} misses ball {index} by {excess}",
                certificate=_certificate(X, family, sheet=sheet, point=point.encode()),
            )
    return point

"""
Constructive intersection of externally hyperconvex sets of the plane.

The iterations follow the proofs that pairwise intersecting externally
hyperconvex subsets have a common point. Every intermediate point comes
from the polygon feasibility solver, and every claimed bound is checked;
a failed step raises PropertyViolation with the constraints that failed.
"""

import logging
import math
from typing import Optional, Sequence

from pydantic import BaseModel, Field

from services.linf2.domain.geometry import Vec2, linf_dist
from services.linf2.domain.plane import ConvexSet, LinfPlane
from services.linf2.domain.polygon import (
    ConvexPolygon,
    ball_polygon,
    polygon_intersection,
    polygon_nearest,
    polygon_neighborhood,
    polygon_witness,
)
from shared.config import settings
from shared.errors import DomainError, PropertyViolation
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)


class IterationTrace(BaseModel):
    """Recorded sequence of an iteration, for certificates and plots."""

    kind: str
    points: list[list[float]] = Field(default_factory=list)
    partners: list[list[float]] = Field(default_factory=list)
    gaps: list[float] = Field(default_factory=list)
    steps: list[float] = Field(default_factory=list)
    bounds: list[float] = Field(default_factory=list)
    chain: list[list[list[float]]] = Field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.points)

    def record(self, point: Vec2, gap: float, bound: float, partner: Optional[Vec2] = None) -> None:
        if self.points:
            self.steps.append(linf_dist(self.points[-1], point))
        self.points.append([point.x, point.y])
        if partner is not None:
            self.partners.append([partner.x, partner.y])
        self.gaps.append(gap)
        self.bounds.append(bound)

    def to_text(self) -> str:
        lines = [f"# {self.kind} converged={self.converged} chain={len(self.chain)}"]
        for n, (p, gap, bound) in enumerate(zip(self.points, self.gaps, self.bounds)):
            row = [str(n), repr(p[0]), repr(p[1])]
            if n < len(self.partners):
                row += [repr(self.partners[n][0]), repr(self.partners[n][1])]
            row += [repr(gap), repr(bound)]
            lines.append(" ".join(row))
        return "\n".join(lines) + "\n"


def _pick(step: str, parts: Sequence[ConvexPolygon], tol: Tolerance, **context) -> Vec2:
    """Witness of the relaxed intersection, or PropertyViolation naming the step."""
    point = polygon_witness(polygon_intersection(parts, slack=tol.solver_slack))
    if point is None:
        raise PropertyViolation(
            f"Empty intersection at {step}",
            certificate={"step": step, **{k: _plain(v) for k, v in context.items()}},
        )
    return point


def _plain(value):
    if isinstance(value, Vec2):
        return [value.x, value.y]
    if isinstance(value, ConvexSet):
        return value.descriptor()
    return value


def _partner(step: str, parts: Sequence[ConvexPolygon], a: Vec2, reach: float, tol: Tolerance, /, **context) -> Vec2:
    """Nearest point to a of the relaxed intersection, required within `reach`."""
    region = polygon_intersection(parts, slack=tol.solver_slack)
    if region.is_empty:
        raise PropertyViolation(
            f"Empty intersection at {step}",
            certificate={"step": step, **{k: _plain(v) for k, v in context.items()}},
        )
    point, gap = polygon_nearest(region, a)
    if gap > reach + tol.eps_feas:
        raise PropertyViolation(
            f"Partner at {step} is {gap} away, more than {reach}",
            certificate={"step": step, "a": [a.x, a.y], "gap": gap, "reach": reach},
        )
    return point


def _require_within(label: str, sets: Sequence[ConvexSet], point: Vec2, tol: Tolerance, trace: IterationTrace):
    for s in sets:
        excess = s.distance(point)
        if excess > tol.eps_feas:
            raise PropertyViolation(
                f"{label} result {point} is {excess} away from {s.label}",
                certificate={"set": s.descriptor(), "point": [point.x, point.y], "trace": trace.model_dump()},
            )


def key_lemma_iterate(
    plane: LinfPlane,
    first: ConvexSet,
    second: ConvexSet,
    x,
    y,
    r: float,
    chain_fraction: Optional[float] = None,
    tolerance: Optional[Tolerance] = None,
) -> tuple[Vec2, IterationTrace]:
    """
    A point of A, A', B(x, r) and B(y, d(x, y) - r).

    A and A' are externally hyperconvex and y lies in both; x is within r
    of each. With s = d(x, y) - r, the claim chain walks from y towards x
    in steps of l = min(s * chain_fraction, u / 2) with u = min(1, r),
    keeping the points a_n in A and a'_n in A' within l of each other.
    Later stages halve the gap: x_n is a common point of B(a_{n-1}, rho),
    B(a'_{n-1}, rho) and B(x, r - rho) with rho = u * 2^-(n+1), a_n a point of
    A, B(y, s), B(x_n, rho) within rho of A', B(y, s), B(x_n, rho), and
    a'_n its nearest point there. The limit of a_n is the result.

    Returns:
        (point, trace) with y itself and an empty trace when s <= 0

    Raises:
        DomainError: If y is outside A or A', d(x, A) or d(x, A') exceeds
            r, or the chain would need more than settings.max_chain_steps
        PropertyViolation: If a step finds an empty intersection or the
            result fails verification
    """
    tol = tolerance or plane.tolerance
    fraction = settings.chain_fraction if chain_fraction is None else chain_fraction
    x, y = plane.validate_point(x), plane.validate_point(y)
    trace = IterationTrace(kind="key_lemma")

    if r < 0:
        raise DomainError(f"Radius must be nonnegative, got {r}")
    if first.distance(y) > tol.eps_feas or second.distance(y) > tol.eps_feas:
        raise DomainError(f"Point {y} must lie in both {first.label} and {second.label}")
    for s_ in (first, second):
        if s_.distance(x) > r + tol.eps_feas:
            raise DomainError(f"Point {x} is farther than {r} from {s_.label}")

    d = linf_dist(x, y)
    s = d - r
    if s <= 0:
        trace.converged = True
        return y, trace
    if r == 0:
        trace.converged = True
        return x, trace

    region = plane.region_polygon
    unit = min(1.0, r)
    step = min(s * fraction, unit / 2)
    n0 = math.floor(s / step)
    if n0 > settings.max_chain_steps:
        raise DomainError(f"Claim chain needs {n0} steps, more than {settings.max_chain_steps}")

    partner: Optional[Vec2] = None
    for n in range(1, n0 + 1):
        shell = [region, ball_polygon(y, n * step), ball_polygon(x, d - n * step)]
        near = [] if partner is None else [ball_polygon(partner, step)]
        a = _pick(f"chain {n}", [*shell, first.polygon, *near], tol, x=x, y=y, r=r, previous=partner)
        partner = _partner(f"chain {n} partner", [*shell, second.polygon], a, step, tol, a=a)
        trace.chain.append([[a.x, a.y], [partner.x, partner.y]])

    final = [region, ball_polygon(y, s), ball_polygon(x, r)]
    near = [] if partner is None else [ball_polygon(partner, step)]
    a = _pick("chain end", [*final, first.polygon, *near], tol, x=x, y=y, r=r, previous=partner)
    a_prime = _partner("chain end partner", [*final, second.polygon], a, step, tol, a=a)
    gap = linf_dist(a, a_prime)
    trace.record(a, gap, step, a_prime)
    logger.debug(f"Claim chain of {n0} steps of {step:.6g} ends with gap {gap:.3e}")

    target = ball_polygon(y, s)
    for n in range(1, settings.max_iterations + 1):
        if gap <= 2 * tol.solver_slack:
            trace.converged = True
            break
        rho = unit * 2.0 ** -(n + 1)
        x_n = _pick(
            f"stage {n} center",
            [region, ball_polygon(a, rho), ball_polygon(a_prime, rho), ball_polygon(x, max(0.0, r - rho) + tol.solver_slack)],
            tol,
            a=a,
            a_prime=a_prime,
            x=x,
            rho=rho,
        )
        near_x = ball_polygon(x_n, rho)
        other = polygon_intersection([region, second.polygon, target, near_x], slack=tol.solver_slack)
        if other.is_empty:
            raise PropertyViolation(
                f"Empty intersection at stage {n} partner set",
                certificate={"step": f"stage {n}", "center": [x_n.x, x_n.y], "rho": rho},
            )
        a_next = _pick(
            f"stage {n}",
            [region, first.polygon, target, near_x, polygon_neighborhood(other, rho)],
            tol,
            center=x_n,
            rho=rho,
        )
        a_prime = _partner(f"stage {n} partner", [other], a_next, rho, tol, a=a_next)
        a = a_next
        gap = linf_dist(a, a_prime)
        trace.record(a, gap, rho, a_prime)
    else:
        trace.converged = gap <= 2 * tol.solver_slack

    if not trace.converged:
        raise PropertyViolation(
            f"Key lemma iteration did not converge in {settings.max_iterations} stages",
            certificate={"trace": trace.model_dump()},
        )

    _require_within(
        "Key lemma",
        [first, second, ConvexSet.ball(x, r), ConvexSet.ball(y, s)],
        a,
        tol,
        trace,
    )
    logger.debug(f"Key lemma converged after {trace.iterations} points at {a}")
    return a, trace


def _common_point(step: str, sets: Sequence[ConvexSet], plane: LinfPlane, tol: Tolerance) -> Vec2:
    return _pick(step, [plane.region_polygon, *(s.polygon for s in sets)], tol, sets=[s.label for s in sets])


def _nearest_common_point(step: str, sets: Sequence[ConvexSet], p: Vec2, plane: LinfPlane, tol: Tolerance) -> Vec2:
    common = polygon_intersection([plane.region_polygon, *(s.polygon for s in sets)], slack=tol.solver_slack)
    if common.is_empty:
        raise PropertyViolation(f"Empty intersection at {step}", certificate={"step": step, "point": [p.x, p.y]})
    return polygon_nearest(common, p)[0]


def _require_pairwise(sets: Sequence[ConvexSet], tol: Tolerance) -> None:
    for i in range(len(sets)):
        if sets[i].is_empty:
            raise DomainError(f"Set {i} ({sets[i].label}) is empty")
        for j in range(i + 1, len(sets)):
            if polygon_intersection([sets[i].polygon, sets[j].polygon], slack=tol.solver_slack).is_empty:
                raise DomainError(f"Sets {i} ({sets[i].label}) and {j} ({sets[j].label}) do not intersect")


def triple_intersection_iterate(
    plane: LinfPlane,
    sets: Sequence[ConvexSet],
    tolerance: Optional[Tolerance] = None,
) -> tuple[Vec2, IterationTrace]:
    """
    A common point of three pairwise intersecting externally hyperconvex sets.

    Starting from x_0 in A_1 and A_2 with r = d(x_0, A_0), each round finds
    y in A_0, A_1, B(x_n, r) and z in A_0, A_2, B(x_n, r), B(y, r) by the
    key lemma, a point of A_0 within r of x_n and r/2 of y and z, and then
    x_{n+1} in A_1 and A_2 within r/2 of both. The distance to A_0 halves
    every round.

    Raises:
        DomainError: If there are not exactly three sets or two of them
            do not intersect
        PropertyViolation: If a round breaks its bound or the result
            fails verification
    """
    if len(sets) != 3:
        raise DomainError(f"Triple intersection takes three sets, got {len(sets)}")
    tol = tolerance or plane.tolerance
    _require_pairwise(sets, tol)
    a0, a1, a2 = sets
    trace = IterationTrace(kind="triple_intersection")

    x = _common_point("start", [a1, a2], plane, tol)
    r = a0.distance(x)
    trace.record(x, r, r)
    y = _nearest_common_point("A0 and A1", [a0, a1], x, plane, tol)

    for n in range(settings.max_iterations):
        if r <= tol.eps_feas / 2:
            trace.converged = True
            break
        radius = trace.bounds[0] / 2.0**n

        y, _ = key_lemma_iterate(plane, a0, a1, x, y, radius, tolerance=tol)
        restricted = ConvexSet.intersection(a0, ConvexSet.ball(y, radius), tolerance=tol)
        hint = _nearest_common_point(f"round {n} restricted", [restricted, a2], x, plane, tol)
        z, _ = key_lemma_iterate(plane, restricted, a2, x, hint, radius, tolerance=tol)

        middle = _pick(
            f"round {n} middle",
            [
                plane.region_polygon,
                a0.polygon,
                ball_polygon(x, radius),
                ball_polygon(y, radius / 2),
                ball_polygon(z, radius / 2),
            ],
            tol,
            x=x,
            y=y,
            z=z,
            radius=radius,
        )
        x, _ = key_lemma_iterate(plane, a1, a2, middle, x, radius / 2, tolerance=tol)
        r = a0.distance(x)
        if r > radius / 2 + tol.eps_feas:
            raise PropertyViolation(
                f"Round {n} left distance {r} to A0, more than {radius / 2}",
                certificate={"trace": trace.model_dump(), "point": [x.x, x.y]},
            )
        trace.record(x, r, radius / 2)
        logger.debug(f"Triple intersection round {n}: distance to A0 is {r:.3e}")
    else:
        trace.converged = r <= tol.eps_feas / 2

    if not trace.converged:
        raise PropertyViolation(
            f"Triple intersection did not converge in {settings.max_iterations} rounds",
            certificate={"trace": trace.model_dump()},
        )
    _require_within("Triple intersection", sets, x, tol, trace)
    return x, trace


def finite_intersection(
    plane: LinfPlane,
    sets: Sequence[ConvexSet],
    tolerance: Optional[Tolerance] = None,
) -> Vec2:
    """
    A common point of finitely many pairwise intersecting externally
    hyperconvex sets.

    The first two sets are merged while more than three remain; each
    merge is justified by triple intersections with every other set,
    which show the merged set still meets each of them.

    Raises:
        DomainError: If the collection is empty or not pairwise intersecting
    """
    if not sets:
        raise DomainError("Intersection of no sets")
    tol = tolerance or plane.tolerance
    current = list(sets)
    _require_pairwise(current, tol)

    if len(current) == 1:
        return _common_point("single set", current, plane, tol)
    if len(current) == 2:
        return _common_point("pair", current, plane, tol)

    while len(current) > 3:
        first, second, rest = current[0], current[1], current[2:]
        for other in rest:
            triple_intersection_iterate(plane, [other, first, second], tol)
        merged = ConvexSet.intersection(first, second, tolerance=tol)
        logger.debug(f"Merged two sets, {len(rest) + 1} remain")
        current = [merged, *rest]

    point, _ = triple_intersection_iterate(plane, current, tol)
    _require_within("Finite intersection", sets, point, tol, IterationTrace(kind="finite_intersection"))
    return point

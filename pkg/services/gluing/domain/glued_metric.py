"""
Distances in a glued space.

Two points on different sheets are joined through the gluing set A:

    d(x, y) = min_t  d_lambda(x, phi_lambda(t)) + d_mu(phi_mu(t), y)

Both summands are convex piecewise-linear in t, so the minimum is found
exactly by breakpoint enumeration and is always attained.
"""

import logging
from typing import TYPE_CHECKING, Optional

import numpy as np

from services.gluing.domain.model import ExactDistanceWitness, GateInfo, GluedPoint
from services.linf2.domain.geometry import linf_dist
from services.linf2.domain.piecewise import PiecewiseLinear, pl_minimize, pl_sublevel
from services.metric_core.domain.spaces import BallFamily
from shared.config import settings
from shared.errors import DomainError, NoGateError, PropertyViolation
from shared.schemas import Tolerance
from shared.seeding import trial_rng

if TYPE_CHECKING:
    from services.gluing.domain.space import GluedSpace2

logger = logging.getLogger(__name__)


def parameter_bounds(X: "GluedSpace2") -> tuple[float, float]:
    return -X.window.radius, X.window.radius


def distance_function(X: "GluedSpace2", p: GluedPoint) -> PiecewiseLinear:
    """t -> d(p, phi(t)) on p's own sheet."""
    return PiecewiseLinear.of(X.chart(p.sheet).distance_term(p.coords))


def glued_dist_with_parameter(X: "GluedSpace2", x: GluedPoint, y: GluedPoint) -> tuple[float, Optional[float]]:
    """
    Glued distance and the chart parameter where it is attained.

    Returns:
        (distance, t_star); t_star is None for points on the same sheet
    """
    x, y = X.validate_point(x), X.validate_point(y)
    if x.sheet == y.sheet:
        return linf_dist(x.coords, y.coords), None
    f = distance_function(X, x) + distance_function(X, y)
    t_star, value = pl_minimize(f, *parameter_bounds(X), tie_tol=X.tolerance.eps_eq)
    return value, t_star


def glued_dist(X: "GluedSpace2", x: GluedPoint, y: GluedPoint) -> float:
    return glued_dist_with_parameter(X, x, y)[0]


def nearest_parameter(X: "GluedSpace2", x: GluedPoint) -> tuple[float, float]:
    """(t, d(x, A)) with t the smallest parameter attaining the distance."""
    x = X.validate_point(x)
    return pl_minimize(distance_function(X, x), *parameter_bounds(X), tie_tol=X.tolerance.eps_eq)


def dist_to_gluing_set(X: "GluedSpace2", x: GluedPoint) -> float:
    return nearest_parameter(X, x)[1]


def gluing_set_distance_interval(
    X: "GluedSpace2",
    x: GluedPoint,
    r: float,
    slack: float = 0.0,
) -> Optional[tuple[float, float]]:
    """Parameter interval of B(x, r) intersected with A, or None if the ball misses A."""
    if r < 0:
        raise DomainError(f"Radius must be nonnegative, got {r}")
    x = X.validate_point(x)
    return pl_sublevel(distance_function(X, x), r, *parameter_bounds(X), slack=slack)


def gate(
    X: "GluedSpace2",
    x: GluedPoint,
    radius: Optional[float] = None,
    seed: Optional[int] = None,
) -> GateInfo:
    """
    Gate of x in the gluing set, verified on sampled points of A.

    The candidate is the nearest point of A (smallest parameter on ties).
    It is accepted when d(x, a) = d(x, gate) + d(gate, a) holds within
    eps_eq for every sample; borderline residuals double the sample count
    up to settings.gate_samples_max.

    Raises:
        NoGateError: With the failing sample as witness
    """
    x = X.validate_point(x)
    chart = X.chart(x.sheet)
    g = distance_function(X, x)
    t_gate, s = nearest_parameter(X, x)
    gate_point = GluedPoint(x.sheet, chart.point(t_gate))
    eps = X.tolerance.eps_eq

    lo, hi = parameter_bounds(X)
    reach = settings.sampling_half_width + s
    lo, hi = max(lo, t_gate - reach), min(hi, t_gate + reach)

    rng = trial_rng(settings.gate_seed if seed is None else seed, "gate", x.sheet, x.coords.x, x.coords.y)
    count = settings.gate_samples
    worst = 0.0
    while True:
        ts = rng.uniform(lo, hi, size=count)
        residuals = np.abs(g.values(ts) - s - np.abs(ts - t_gate))
        index = int(np.argmax(residuals))
        worst = max(worst, float(residuals[index]))
        if residuals[index] > eps:
            sample = GluedPoint(x.sheet, chart.point(float(ts[index])))
            logger.debug(f"No gate for {x}: residual {residuals[index]:.3e} at {sample}")
            raise NoGateError(
                f"Point {x} has no gate in the gluing set",
                witness={
                    "point": x.encode(),
                    "candidate": gate_point.encode(),
                    "sample": sample.encode(),
                    "residual": float(residuals[index]),
                },
            )
        if worst <= eps / 2 or count >= settings.gate_samples_max:
            break
        count = min(2 * count, settings.gate_samples_max)

    residual_radius = None
    if radius is not None and radius >= s:
        residual_radius = radius - s

    return GateInfo(
        point=x,
        gate=gate_point,
        parameter=t_gate,
        dist_to_gate=s,
        residual_radius=residual_radius,
        samples=count,
        max_residual=worst,
    )


def gated_dist_shortcut(X: "GluedSpace2", x: GluedPoint, y: GluedPoint) -> float:
    """d(x, gate_x) + d(gate_x, gate_y) + d(gate_y, y); NoGateError propagates."""
    x, y = X.validate_point(x), X.validate_point(y)
    if x.sheet == y.sheet:
        raise DomainError("The gated shortcut joins points on different sheets")
    gx, gy = gate(X, x), gate(X, y)
    return gx.dist_to_gate + abs(gx.parameter - gy.parameter) + gy.dist_to_gate


def exact_distance_witness(X: "GluedSpace2", x: GluedPoint, y: GluedPoint) -> ExactDistanceWitness:
    """
    A point a of A with d(x, a) = d(x, A) and d(x, y) = d(x, a) + d(a, y).

    The objective is minimized over the parameter interval where
    d(x, phi(t)) = d(x, A); if its minimum there exceeds d(x, y) no such
    point exists.

    Raises:
        DomainError: If x and y share a sheet
        PropertyViolation: If no witness exists (the source sheet's gluing
            set is not externally hyperconvex)
    """
    x, y = X.validate_point(x), X.validate_point(y)
    if x.sheet == y.sheet:
        raise DomainError("Exact distance witnesses join points on different sheets")

    eps = X.tolerance.eps_eq
    lo, hi = parameter_bounds(X)
    g, h = distance_function(X, x), distance_function(X, y)
    _, s = pl_minimize(g, lo, hi)
    total, _ = glued_dist_with_parameter(X, x, y)

    interval = pl_sublevel(g, s, lo, hi, slack=eps)
    t_star, best = pl_minimize(g + h, *interval, tie_tol=eps)

    if best > total + eps:
        raise PropertyViolation(
            f"No point of B({x}, {s}) in A realizes d(x, y) = {total}",
            certificate={
                "x": x.encode(),
                "y": y.encode(),
                "s": s,
                "distance": total,
                "best_through_ball": best,
                "interval": list(interval),
            },
        )

    a = GluedPoint(x.sheet, X.chart(x.sheet).point(t_star))
    return ExactDistanceWitness(a=a, parameter=t_star, s=s, total=g(t_star) + h(t_star))


def gluing_set_family_feasible(
    X: "GluedSpace2",
    family: BallFamily,
    tolerance: Optional[Tolerance] = None,
) -> Optional[float]:
    """Parameter of a point of A common to every ball, or None."""
    tol = tolerance or X.tolerance
    lo, hi = parameter_bounds(X)
    for ball in family:
        interval = gluing_set_distance_interval(X, ball.center, ball.radius, slack=tol.solver_slack)
        if interval is None:
            return None
        lo, hi = max(lo, interval[0]), min(hi, interval[1])
        if lo > hi:
            return None
    return 0.5 * (lo + hi)

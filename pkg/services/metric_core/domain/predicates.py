"""Predicates every module builds on: intervals, admissibility, metric axioms."""

import logging
from typing import Iterable, Optional

import numpy as np

from services.metric_core.domain.spaces import BallFamily, FiniteMetricSpace, MetricSpace
from shared.errors import DomainError, FormatError
from shared.schemas import PropertyReport, Tolerance, Verdict

logger = logging.getLogger(__name__)


def interval_contains(space: MetricSpace, x, y, z, tol: Optional[Tolerance] = None) -> bool:
    """True iff z lies in the metric interval I(x, y) up to eps_eq."""
    eps = (tol or space.tolerance).eps_eq
    x, y, z = space.validate_point(x), space.validate_point(y), space.validate_point(z)
    return abs(space.distance(x, z) + space.distance(z, y) - space.distance(x, y)) <= eps


def pairwise_admissible(space: MetricSpace, family: BallFamily, tol: Optional[Tolerance] = None) -> bool:
    """True iff d(x_i, x_j) <= r_i + r_j + eps_eq for every pair."""
    return first_inadmissible_pair(space, family, tol) is None


def first_inadmissible_pair(
    space: MetricSpace,
    family: BallFamily,
    tol: Optional[Tolerance] = None,
) -> Optional[tuple[int, int]]:
    eps = (tol or space.tolerance).eps_eq
    centers = [space.validate_point(c) for c in family.centers]
    radii = family.radii
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if space.distance(centers[i], centers[j]) > radii[i] + radii[j] + eps:
                return i, j
    return None


def admissibility_scale(space: MetricSpace, family: BallFamily) -> float:
    """Smallest s such that scaling every radius by s keeps the family admissible."""
    scale = 0.0
    centers, radii = family.centers, family.radii
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            d = space.distance(centers[i], centers[j])
            total = radii[i] + radii[j]
            if total == 0.0:
                if d > 0.0:
                    return float("inf")
                continue
            scale = max(scale, d / total)
    return scale


def gate_residual(space: MetricSpace, x, gate, a) -> float:
    """d(x, a) - d(x, gate) - d(gate, a); zero for every a iff gate is a gate of x."""
    return space.distance(x, a) - space.distance(x, gate) - space.distance(gate, a)


def check_metric_axioms(space: FiniteMetricSpace, tol: Optional[Tolerance] = None) -> PropertyReport:
    """
    Verify zero diagonal, nonnegativity, symmetry and the triangle
    inequality of a distance matrix.

    Returns:
        PropertyReport naming the first violating pair or triple

    Raises:
        FormatError: If the matrix is not square
    """
    eps = (tol or space.tolerance).eps_eq
    dist = np.asarray(space.dist, dtype=float)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise FormatError(f"Distance matrix must be square, got shape {dist.shape}")
    n = dist.shape[0]

    def falsified(kind: str, **details) -> PropertyReport:
        logger.info(f"Metric axiom violated: {kind}", extra={"violation": kind})
        return PropertyReport(
            property_name="metric_axioms",
            verdict=Verdict.FALSIFIED,
            trials_run=1,
            counterexample={"kind": kind, **details},
        )

    diagonal = np.flatnonzero(np.abs(np.diag(dist)) > eps)
    if diagonal.size:
        i = int(diagonal[0])
        return falsified("diagonal", index=i, value=float(dist[i, i]))

    negative = np.argwhere(dist < -eps)
    if negative.size:
        i, j = (int(v) for v in negative[0])
        return falsified("negative", pair=[i, j], value=float(dist[i, j]))

    asymmetric = np.argwhere(np.abs(dist - dist.T) > eps)
    if asymmetric.size:
        i, j = (int(v) for v in asymmetric[0])
        return falsified("symmetry", pair=[i, j], values=[float(dist[i, j]), float(dist[j, i])])

    # excess[i, j, k] = d(i, k) - d(i, j) - d(j, k)
    excess = dist[:, None, :] - dist[:, :, None] - dist[None, :, :]
    violations = np.argwhere(excess > eps)
    if violations.size:
        i, j, k = (int(v) for v in violations[0])
        return falsified(
            "triangle",
            triple=[i, j, k],
            d_ik=float(dist[i, k]),
            d_ij=float(dist[i, j]),
            d_jk=float(dist[j, k]),
        )

    return PropertyReport(
        property_name="metric_axioms",
        verdict=Verdict.PASS,
        trials_run=1,
        statistics={"points": float(n), "max_distance": float(dist.max()) if n else 0.0},
    )


def finite_dist_to_set(space: MetricSpace, x, points: Iterable) -> float:
    """
    Exact distance from x to a finite set.

    Raises:
        DomainError: If the set is empty
    """
    x = space.validate_point(x)
    best = None
    for p in points:
        d = space.distance(x, p)
        if best is None or d < best:
            best = d
    if best is None:
        raise DomainError("Distance to an empty set is undefined")
    return best

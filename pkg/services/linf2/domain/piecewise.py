"""Convex piecewise-linear functions of one variable.

A function is a sum of terms, each term the maximum of affine pieces. This
covers every objective the gluing metric needs: |alpha t + beta| is the
maximum of two pieces, an l-infinity distance to a parameterized line is the
maximum of four, and constants are single pieces. The minimum of such a
function over an interval is attained at a breakpoint or an endpoint, so
enumerating breakpoints gives exact answers.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from shared.errors import DomainError


@dataclass(frozen=True)
class AffinePiece:
    slope: float
    intercept: float

    def __call__(self, t: float) -> float:
        return self.slope * t + self.intercept


@dataclass(frozen=True)
class MaxTerm:
    """max_k (slope_k * t + intercept_k)"""

    pieces: tuple[AffinePiece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise DomainError("A max term needs at least one affine piece")

    @classmethod
    def constant(cls, value: float) -> "MaxTerm":
        return cls((AffinePiece(0.0, float(value)),))

    @classmethod
    def absolute(cls, slope: float, intercept: float, weight: float = 1.0) -> "MaxTerm":
        """weight * |slope * t + intercept|"""
        if weight < 0:
            raise DomainError(f"Weight must be nonnegative, got {weight}")
        return cls((
            AffinePiece(weight * slope, weight * intercept),
            AffinePiece(-weight * slope, -weight * intercept),
        ))

    @classmethod
    def maximum(cls, *terms: "MaxTerm") -> "MaxTerm":
        return cls(tuple(piece for term in terms for piece in term.pieces))

    def __call__(self, t: float) -> float:
        return max(piece(t) for piece in self.pieces)

    def values(self, ts: np.ndarray) -> np.ndarray:
        slopes = np.array([p.slope for p in self.pieces])
        intercepts = np.array([p.intercept for p in self.pieces])
        return np.max(np.outer(ts, slopes) + intercepts, axis=1)

    def kinks(self) -> list[float]:
        """Parameters where two pieces cross (a superset of the breakpoints)."""
        points = []
        for first, second in combinations(self.pieces, 2):
            if first.slope != second.slope:
                points.append((second.intercept - first.intercept) / (first.slope - second.slope))
        return points


@dataclass(frozen=True)
class PiecewiseLinear:
    """Sum of max terms; convex by construction."""

    terms: tuple[MaxTerm, ...]

    @classmethod
    def of(cls, *terms: MaxTerm) -> "PiecewiseLinear":
        return cls(tuple(terms))

    @classmethod
    def linf_to_line(cls, point, origin, direction) -> "PiecewiseLinear":
        """t -> ||origin + t * direction - point||_inf"""
        return cls.of(linf_line_term(point, origin, direction))

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return PiecewiseLinear(self.terms + other.terms)

    def __call__(self, t: float) -> float:
        return float(sum(term(t) for term in self.terms))

    def values(self, ts: np.ndarray) -> np.ndarray:
        total = np.zeros(len(ts))
        for term in self.terms:
            total += term.values(ts)
        return total

    def candidates(self, lo: float, hi: float) -> np.ndarray:
        """Sorted endpoints plus every kink strictly inside (lo, hi)."""
        points = [lo, hi]
        for term in self.terms:
            points.extend(k for k in term.kinks() if lo < k < hi)
        return np.unique(np.array(points, dtype=float))


def linf_line_term(point, origin, direction) -> MaxTerm:
    """Max term for the l-infinity distance from `point` to origin + t * direction."""
    return MaxTerm.maximum(
        MaxTerm.absolute(direction[0], origin[0] - point[0]),
        MaxTerm.absolute(direction[1], origin[1] - point[1]),
    )


def pl_minimize(
    f: PiecewiseLinear,
    lo: float,
    hi: float,
    tie_tol: float = 0.0,
) -> tuple[float, float]:
    """
    Exact minimizer of a convex piecewise-linear function on [lo, hi].

    Args:
        f: Function descriptor
        lo: Left end of the search interval
        hi: Right end of the search interval
        tie_tol: Values within tie_tol of the minimum count as ties

    Returns:
        (t_star, f_star); ties resolve to the smallest t_star

    Raises:
        DomainError: If lo > hi
    """
    if lo > hi:
        raise DomainError(f"Empty search interval [{lo}, {hi}]")

    ts = f.candidates(lo, hi)
    values = f.values(ts)
    best = values.min()
    index = int(np.flatnonzero(values <= best + tie_tol)[0])

    return float(ts[index]), float(best)


def pl_sublevel(
    f: PiecewiseLinear,
    level: float,
    lo: float,
    hi: float,
    slack: float = 0.0,
) -> Optional[tuple[float, float]]:
    """
    The interval {t in [lo, hi] : f(t) <= level + slack}, or None when empty.

    f is linear between consecutive candidates, so the end points are found
    by linear interpolation on the bracketing segment.
    """
    if lo > hi:
        raise DomainError(f"Empty search interval [{lo}, {hi}]")

    ts = f.candidates(lo, hi)
    values = f.values(ts)
    threshold = level + slack
    inside = np.flatnonzero(values <= threshold)

    if inside.size == 0:
        return None

    first, last = int(inside[0]), int(inside[-1])
    t_lo = ts[first] if first == 0 else _crossing(ts[first - 1], values[first - 1], ts[first], values[first], threshold)
    t_hi = ts[last] if last == len(ts) - 1 else _crossing(ts[last], values[last], ts[last + 1], values[last + 1], threshold)

    return float(t_lo), float(t_hi)


def _crossing(t0: float, v0: float, t1: float, v1: float, level: float) -> float:
    return t0 + (level - v0) * (t1 - t0) / (v1 - v0)

"""Metric space backends and ball families."""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from shared.errors import DomainError, FormatError
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ball:
    """Closed ball B(center, radius)."""

    center: Any
    radius: float

    def __post_init__(self):
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise DomainError(f"Ball radius must be finite and nonnegative, got {self.radius}")


@dataclass(frozen=True)
class BallFamily:
    """A nonempty finite collection of balls in one space."""

    balls: tuple[Ball, ...]

    def __post_init__(self):
        if not self.balls:
            raise DomainError("A ball family must contain at least one ball")

    @classmethod
    def of(cls, centers: Sequence, radii: Sequence[float]) -> "BallFamily":
        if len(centers) != len(radii):
            raise DomainError(f"{len(centers)} centers but {len(radii)} radii")
        return cls(tuple(Ball(c, float(r)) for c, r in zip(centers, radii)))

    def __len__(self) -> int:
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)

    @property
    def centers(self) -> list:
        return [b.center for b in self.balls]

    @property
    def radii(self) -> list[float]:
        return [b.radius for b in self.balls]

    def with_radii(self, radii: Sequence[float]) -> "BallFamily":
        return BallFamily.of(self.centers, radii)

    def scaled(self, factor: float) -> "BallFamily":
        return self.with_radii([r * factor for r in self.radii])


class MetricSpace(ABC):
    """
    A metric space the checkers and constructions can work with.

    Points are backend specific: matrix indices, plane vectors or
    sheet-tagged glued points. Certificates store them through
    encode_point / decode_point.
    """

    name: str = "metric space"

    def __init__(self, tolerance: Optional[Tolerance] = None):
        self.tolerance = tolerance or Tolerance()

    @abstractmethod
    def distance(self, p, q) -> float:
        ...

    @abstractmethod
    def validate_point(self, p):
        """Return the canonical form of p, or raise DomainError."""

    @abstractmethod
    def family_witness(self, family: BallFamily, tolerance: Optional[Tolerance] = None):
        """A common point of all balls of the family, or None when empty."""

    @abstractmethod
    def sample_point(self, rng: np.random.Generator, half_width: float):
        ...

    @abstractmethod
    def encode_point(self, p) -> Any:
        """JSON-serializable form of a point."""

    @abstractmethod
    def decode_point(self, data: Any):
        ...

    def describe(self) -> dict:
        return {"name": self.name}

    def family_scale(self, half_width: float) -> float:
        """Upper bound for provisional radii of sampled families."""
        return half_width

    def validate_family(self, family: BallFamily) -> BallFamily:
        return BallFamily.of([self.validate_point(c) for c in family.centers], family.radii)


class FiniteMetricSpace(MetricSpace):
    """
    Brute-force backend: labelled points with a distance matrix.

    Points are indices into `labels`.
    """

    name = "finite"

    def __init__(
        self,
        dist: np.ndarray,
        labels: Optional[Sequence] = None,
        tolerance: Optional[Tolerance] = None,
    ):
        super().__init__(tolerance)
        matrix = np.asarray(dist, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise FormatError(f"Distance matrix must be square, got shape {matrix.shape}")
        if matrix.shape[0] == 0:
            raise FormatError("Distance matrix must have at least one point")
        self.dist = matrix
        self.labels = list(labels) if labels is not None else list(range(matrix.shape[0]))
        if len(self.labels) != matrix.shape[0]:
            raise FormatError(f"{len(self.labels)} labels for {matrix.shape[0]} points")

    @classmethod
    def from_text(cls, text: str, tolerance: Optional[Tolerance] = None) -> "FiniteMetricSpace":
        """
        Parse "n" followed by n lines of n decimals.

        Raises:
            FormatError: On a malformed header, row count or row width
        """
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise FormatError("Empty distance matrix file")
        try:
            n = int(lines[0].strip())
        except ValueError as e:
            raise FormatError(f"First line must be the point count, got {lines[0]!r}") from e
        if n < 1:
            raise FormatError(f"Point count must be positive, got {n}")
        if len(lines) - 1 != n:
            raise FormatError(f"Expected {n} matrix rows, got {len(lines) - 1}")

        rows = []
        for index, line in enumerate(lines[1:], start=1):
            try:
                row = [float(v) for v in line.split()]
            except ValueError as e:
                raise FormatError(f"Row {index}: {e}") from e
            if len(row) != n:
                raise FormatError(f"Row {index} has {len(row)} entries, expected {n}")
            rows.append(row)

        return cls(np.array(rows), tolerance=tolerance)

    @classmethod
    def from_file(cls, path: Path, tolerance: Optional[Tolerance] = None) -> "FiniteMetricSpace":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise FormatError(f"Cannot read distance matrix {path}: {e}") from e
        return cls.from_text(text, tolerance)

    @classmethod
    def from_points(
        cls,
        points: Sequence,
        metric: Callable[[Any, Any], float],
        tolerance: Optional[Tolerance] = None,
    ) -> "FiniteMetricSpace":
        """Distance matrix of a finite sample of another metric."""
        n = len(points)
        matrix = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                matrix[i, j] = matrix[j, i] = metric(points[i], points[j])
        return cls(matrix, labels=points, tolerance=tolerance)

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def validate_point(self, p) -> int:
        if isinstance(p, (bool, np.bool_)) or not isinstance(p, (int, np.integer)):
            raise DomainError(f"Finite space points are indices, got {p!r}")
        if not 0 <= int(p) < self.size:
            raise DomainError(f"Point index {p} outside 0..{self.size - 1}")
        return int(p)

    def distance(self, p, q) -> float:
        return float(self.dist[self.validate_point(p), self.validate_point(q)])

    def family_witness(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> Optional[int]:
        tol = (tolerance or self.tolerance).eps_feas
        centers = [self.validate_point(c) for c in family.centers]
        radii = np.array(family.radii)
        inside = np.all(self.dist[:, centers] <= radii + tol, axis=1)
        hits = np.flatnonzero(inside)
        return int(hits[0]) if hits.size else None

    def sample_point(self, rng: np.random.Generator, half_width: float = 0.0) -> int:
        return int(rng.integers(self.size))

    def family_scale(self, half_width: float) -> float:
        return float(self.dist.max()) / 2.0 if self.size > 1 else 1.0

    def encode_point(self, p) -> int:
        return self.validate_point(p)

    def decode_point(self, data) -> int:
        return self.validate_point(data)

    def describe(self) -> dict:
        return {"name": self.name, "size": self.size}


class FiniteSubset:
    """
    A subset of a finite space.

    `closure_extra` lists points that count for distances but are not
    members, which models a set whose infimum distance is not attained.
    """

    def __init__(self, space: FiniteMetricSpace, members: Sequence[int], closure_extra: Sequence[int] = ()):
        if not members:
            raise DomainError("A subset needs at least one member")
        self.space = space
        self.members = sorted({space.validate_point(m) for m in members})
        self.closure_extra = sorted({space.validate_point(m) for m in closure_extra} - set(self.members))

    @property
    def label(self) -> str:
        return "finite-subset" if not self.closure_extra else "finite-subset-open"

    def contains(self, p, tol: float = 0.0) -> bool:
        return self.space.validate_point(p) in self.members

    def distance(self, p) -> float:
        candidates = self.members + self.closure_extra
        return float(self.space.dist[self.space.validate_point(p), candidates].min())

    def nearest(self, p) -> int:
        candidates = self.members + self.closure_extra
        row = self.space.dist[self.space.validate_point(p), candidates]
        return candidates[int(np.argmin(row))]

    def sample(self, rng: np.random.Generator, half_width: float = 0.0) -> int:
        return self.members[int(rng.integers(len(self.members)))]

    def family_point(self, family: BallFamily, tolerance: Optional[Tolerance] = None) -> Optional[int]:
        tol = (tolerance or self.space.tolerance).eps_feas
        for m in self.members:
            if all(self.space.dist[m, c] <= r + tol for c, r in zip(family.centers, family.radii)):
                return m
        return None

    def descriptor(self) -> dict:
        return {"kind": self.label, "members": self.members, "closure_extra": self.closure_extra}

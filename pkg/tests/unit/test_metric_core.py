"""Unit tests for metric spaces, ball families and predicates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.linf2.domain.geometry import linf_dist
from services.linf2.domain.plane import LinfPlane
from services.metric_core.domain.predicates import (
    admissibility_scale,
    check_metric_axioms,
    finite_dist_to_set,
    first_inadmissible_pair,
    gate_residual,
    interval_contains,
    pairwise_admissible,
)
from services.metric_core.domain.spaces import Ball, BallFamily, FiniteMetricSpace, FiniteSubset
from shared.errors import DomainError, FormatError
from shared.schemas import Verdict

EQUILATERAL = np.array([[0.0, 2.0, 2.0], [2.0, 0.0, 2.0], [2.0, 2.0, 0.0]])
PATH = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])


class TestBallFamily:
    """Test ball and family validation."""

    def test_negative_radius(self):
        """Test that a negative radius is rejected."""
        with pytest.raises(DomainError):
            Ball((0.0, 0.0), -0.5)

    def test_empty_family(self):
        """Test that a family needs at least one ball."""
        with pytest.raises(DomainError):
            BallFamily.of([], [])

    def test_length_mismatch(self):
        """Test that centers and radii must pair up."""
        with pytest.raises(DomainError):
            BallFamily.of([(0.0, 0.0)], [1.0, 2.0])

    def test_scaled(self):
        """Test radius scaling."""
        family = BallFamily.of([(0.0, 0.0), (1.0, 1.0)], [1.0, 2.0]).scaled(0.5)
        assert family.radii == [0.5, 1.0]


class TestFiniteMetricSpace:
    """Test the distance-matrix backend."""

    def test_from_text(self):
        """Test parsing the n-then-rows format."""
        space = FiniteMetricSpace.from_text("3\n0 1 2\n1 0 1\n2 1 0\n")
        assert space.size == 3
        assert space.distance(0, 2) == 2.0

    @pytest.mark.parametrize(
        "text",
        ["", "x\n0\n", "2\n0 1\n", "2\n0 1\n1\n", "2\n0 a\n1 0\n"],
    )
    def test_from_text_rejects(self, text):
        """Test malformed matrix files."""
        with pytest.raises(FormatError):
            FiniteMetricSpace.from_text(text)

    def test_from_file(self, tmp_path):
        """Test reading a matrix file."""
        path = tmp_path / "m.txt"
        path.write_text("2\n0 3\n3 0\n", encoding="utf-8")
        assert FiniteMetricSpace.from_file(path).distance(1, 0) == 3.0

    def test_from_file_missing(self, tmp_path):
        """Test that unreadable matrix files are format errors."""
        with pytest.raises(FormatError):
            FiniteMetricSpace.from_file(tmp_path / "none.txt")
        with pytest.raises(FormatError):
            FiniteMetricSpace.from_file(tmp_path)

    def test_non_square(self):
        """Test that the matrix must be square."""
        with pytest.raises(FormatError):
            FiniteMetricSpace(np.zeros((2, 3)))

    def test_point_validation(self):
        """Test that points are in-range indices."""
        space = FiniteMetricSpace(PATH)
        with pytest.raises(DomainError):
            space.validate_point(3)
        with pytest.raises(DomainError):
            space.validate_point(True)

    def test_family_witness(self):
        """Test the brute-force witness search."""
        space = FiniteMetricSpace(PATH)
        assert space.family_witness(BallFamily.of([0, 2], [1.0, 1.0])) == 1
        assert space.family_witness(BallFamily.of([0, 2], [0.5, 0.5])) is None

    def test_equilateral_has_no_midpoint(self):
        """Test that an admissible family can miss every point."""
        space = FiniteMetricSpace(EQUILATERAL)
        family = BallFamily.of([0, 1, 2], [1.0, 1.0, 1.0])
        assert pairwise_admissible(space, family)
        assert space.family_witness(family) is None

    def test_from_points(self):
        """Test sampling a plane metric into a matrix."""
        space = FiniteMetricSpace.from_points([(0.0, 0.0), (2.0, 1.0)], linf_dist)
        assert space.distance(0, 1) == 2.0
        assert space.labels == [(0.0, 0.0), (2.0, 1.0)]


class TestFiniteSubset:
    """Test subsets of a finite space."""

    def test_distance_and_nearest(self):
        """Test distance to a one-point subset."""
        subset = FiniteSubset(FiniteMetricSpace(PATH), [2])
        assert subset.distance(0) == 2.0
        assert subset.nearest(0) == 2

    def test_closure_extra_counts_for_distance(self):
        """Test a subset whose infimum is attained outside it."""
        subset = FiniteSubset(FiniteMetricSpace(PATH), [2], closure_extra=[1])
        assert subset.distance(0) == 1.0
        assert subset.nearest(0) == 1
        assert not subset.contains(1)
        assert subset.label == "finite-subset-open"

    def test_empty_subset(self):
        """Test that a subset needs members."""
        with pytest.raises(DomainError):
            FiniteSubset(FiniteMetricSpace(PATH), [])


class TestPredicates:
    """Test the shared predicates."""

    def test_interval_contains(self, plane):
        """Test membership in a metric interval of the plane."""
        assert interval_contains(plane, (0.0, 0.0), (4.0, 0.0), (2.0, 2.0))
        assert not interval_contains(plane, (0.0, 0.0), (4.0, 0.0), (2.0, 3.0))

    def test_pairwise_admissible(self, plane):
        """Test the pairwise condition."""
        assert pairwise_admissible(plane, BallFamily.of([(0.0, 0.0), (2.0, 0.0)], [1.0, 1.0]))
        family = BallFamily.of([(0.0, 0.0), (3.0, 0.0)], [1.0, 1.0])
        assert not pairwise_admissible(plane, family)
        assert first_inadmissible_pair(plane, family) == (0, 1)

    def test_admissibility_scale(self, plane):
        """Test the smallest admissible radius scale."""
        family = BallFamily.of([(0.0, 0.0), (3.0, 0.0)], [1.0, 1.0])
        assert admissibility_scale(plane, family) == pytest.approx(1.5)

    def test_gate_residual(self, plane):
        """Test that a point on a geodesic has zero residual."""
        assert gate_residual(plane, (0.0, 0.0), (1.0, 0.0), (2.0, 0.0)) == 0.0
        assert gate_residual(plane, (0.0, 0.0), (1.0, 3.0), (2.0, 0.0)) < 0.0

    def test_metric_axioms_pass(self):
        """Test a valid matrix."""
        report = check_metric_axioms(FiniteMetricSpace(PATH))
        assert report.verdict == Verdict.PASS

    def test_metric_axioms_triangle(self):
        """Test that a triangle violation names the triple."""
        bad = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        report = check_metric_axioms(FiniteMetricSpace(bad))
        assert report.verdict == Verdict.FALSIFIED
        assert report.counterexample["kind"] == "triangle"
        assert report.counterexample["triple"] == [0, 1, 2]

    def test_metric_axioms_symmetry(self):
        """Test that asymmetry is reported before the triangle inequality."""
        bad = np.array([[0.0, 1.0], [2.0, 0.0]])
        report = check_metric_axioms(FiniteMetricSpace(bad))
        assert report.counterexample["kind"] == "symmetry"

    def test_finite_dist_to_set(self, plane):
        """Test the exact distance to a finite set."""
        assert finite_dist_to_set(plane, (3.0, 3.0), [(0.0, 0.0)]) == 3.0
        with pytest.raises(DomainError):
            finite_dist_to_set(plane, (3.0, 3.0), [])

    @settings(max_examples=50)
    @given(
        st.lists(
            st.tuples(st.floats(-5, 5), st.floats(-5, 5)),
            min_size=2,
            max_size=6,
        )
    )
    def test_sampled_plane_metric_passes(self, pts):
        """Test that sampled plane distances satisfy the axioms."""
        space = FiniteMetricSpace.from_points(pts, linf_dist)
        assert check_metric_axioms(space).verdict == Verdict.PASS


class TestLinfPlaneAsMetricSpace:
    """Test the plane through the generic interface."""

    def test_encode_decode(self, upper_plane):
        """Test that decoding validates."""
        assert upper_plane.decode_point(upper_plane.encode_point((1.0, 2.0))) == (1.0, 2.0)
        with pytest.raises(DomainError):
            upper_plane.decode_point([0.0, -3.0])

    def test_sample_points_stay_in_region(self, upper_plane):
        """Test the vectorized sampler."""
        pts = upper_plane.sample_points(np.random.default_rng(0), 200, 5.0)
        assert len(pts) > 0
        assert (pts[:, 1] >= 0).all()

    def test_describe(self):
        """Test the space descriptor."""
        assert LinfPlane().describe() == {"name": "linf2", "window": 100.0}

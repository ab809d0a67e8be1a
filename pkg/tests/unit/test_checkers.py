"""Unit tests for the randomized property checkers."""

import numpy as np
import pytest

from services.checkers.domain.property_checks import (
    check_externally_hyperconvex,
    check_gated,
    check_hyperconvex,
    check_proximinal,
    check_strongly_convex,
    recheck_counterexample,
)
from services.checkers.domain.sampling import (
    decode_family,
    family_certificate,
    repair_for_set,
    sample_admissible_family,
)
from services.linf2.domain.plane import ConvexSet
from services.metric_core.domain.predicates import admissibility_scale, pairwise_admissible
from services.metric_core.domain.spaces import BallFamily, FiniteMetricSpace, FiniteSubset
from services.s5_example.domain.example import s5_family
from services.s5_example.domain.models import S5Config
from shared.errors import DomainError
from shared.schemas import TrialConfig, Verdict

EQUILATERAL = np.array([[0.0, 2.0, 2.0], [2.0, 0.0, 2.0], [2.0, 2.0, 0.0]])
PATH = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])


class TestSampling:
    """Test random admissible families."""

    def test_sampled_family_is_tight(self, plane, quick_trials):
        """Test that sampled families are admissible with scale 1."""
        rng = np.random.default_rng(7)
        for _ in range(10):
            family = sample_admissible_family(plane, quick_trials, rng)
            assert 2 <= len(family) <= quick_trials.max_family_size
            assert pairwise_admissible(plane, family)
            assert admissibility_scale(plane, family) == pytest.approx(1.0)

    def test_same_seed_same_family(self, plane, quick_trials):
        """Test determinism of the sampler."""
        first = sample_admissible_family(plane, quick_trials, np.random.default_rng(3))
        second = sample_admissible_family(plane, quick_trials, np.random.default_rng(3))
        assert first == second

    def test_repair_reaches_set(self, upper_plane):
        """Test that repaired radii reach the set."""
        line = ConvexSet.boundary_line(0.0, upper_plane.window)
        family = BallFamily.of([(0.0, 1.0), (4.0, 1.0)], [3.0, 0.5])
        repaired = repair_for_set(upper_plane, line, family)
        assert repaired is not None
        assert repaired.radii == [3.0, 1.0]
        assert all(r >= line.distance(c) for c, r in zip(repaired.centers, repaired.radii))

    def test_repair_gives_up(self, upper_plane):
        """Test that inflating and shrinking without a fixpoint returns None."""
        line = ConvexSet.boundary_line(0.0, upper_plane.window)
        family = BallFamily.of([(0.0, 1.0), (1.0, 1.0)], [0.5, 0.5])
        assert repair_for_set(upper_plane, line, family, rounds=3) is None

    def test_certificate_round_trip(self, split_space):
        """Test that family certificates decode to the same family."""
        family = s5_family(S5Config(a=0.0, b=1.0))
        assert decode_family(split_space, family_certificate(split_space, family)) == family


class TestHyperconvexChecker:
    """Test check_hyperconvex."""

    def test_plane_passes(self, plane, quick_trials):
        """Test that the plane is hyperconvex on sampled families."""
        report = check_hyperconvex(plane, quick_trials)
        assert report.verdict == Verdict.PASS
        assert report.trials_run == quick_trials.trials
        assert report.seed == quick_trials.seed

    def test_candidate_counterexample(self, quick_trials):
        """Test that the equilateral space fails on the three unit balls."""
        space = FiniteMetricSpace(EQUILATERAL)
        report = check_hyperconvex(space, quick_trials, candidates=[BallFamily.of([0, 1, 2], [1.0, 1.0, 1.0])])
        assert report.verdict == Verdict.FALSIFIED
        assert report.counterexample["source"] == "candidate"
        assert recheck_counterexample(space, report)

    def test_s5_counterexample(self, split_space, quick_trials):
        """Test that the split gluing fails on the three unit balls."""
        report = check_hyperconvex(split_space, quick_trials, candidates=[s5_family(S5Config(a=0.0, b=1.0))])
        assert report.verdict == Verdict.FALSIFIED
        assert recheck_counterexample(split_space, report)

    def test_deterministic(self, plane):
        """Test that equal seeds give equal reports."""
        cfg = TrialConfig(trials=10, seed=5)
        assert check_hyperconvex(plane, cfg) == check_hyperconvex(plane, cfg)


class TestSetCheckers:
    """Test the set property checkers on the plane."""

    def test_diagonal_line_is_strongly_convex(self, diagonal_plane, quick_trials):
        """Test the boundary of {xi_2 >= xi_1}."""
        line = ConvexSet.boundary_line(1.0, diagonal_plane.window)
        strong = check_strongly_convex(diagonal_plane, line, quick_trials)
        assert strong.passed
        assert strong.statistics["skip_rate"] == 0.0
        report = check_gated(diagonal_plane, line, quick_trials)
        assert report.passed
        assert report.statistics["consistent_with_strong_convexity"] == 1.0

    def test_horizontal_line_is_not_strongly_convex(self, upper_plane, quick_trials):
        """Test the boundary of {xi_2 >= 0}."""
        line = ConvexSet.boundary_line(0.0, upper_plane.window)
        report = check_strongly_convex(upper_plane, line, quick_trials)
        assert report.verdict == Verdict.FALSIFIED
        assert recheck_counterexample(upper_plane, report, line)

    def test_horizontal_line_is_not_gated(self, upper_plane, quick_trials):
        """Test that the gated checker agrees with strong convexity."""
        line = ConvexSet.boundary_line(0.0, upper_plane.window)
        report = check_gated(upper_plane, line, quick_trials)
        assert report.verdict == Verdict.FALSIFIED
        assert report.statistics["consistent_with_strong_convexity"] == 1.0
        assert recheck_counterexample(upper_plane, report, line)

    def test_diagonal_gluing_set_is_gated(self, reflected_diagonal_space, quick_trials):
        """Test that the gluing set of the reflected diagonal gluing passes through gate()."""
        X = reflected_diagonal_space
        assert check_gated(X, X.gluing_set(), quick_trials, cross_check=False).passed

    def test_horizontal_gluing_set_is_not_gated(self, split_space, quick_trials):
        """Test that gate() failures become rechecked certificates."""
        A = split_space.gluing_set()
        report = check_gated(split_space, A, quick_trials, cross_check=False)
        assert report.verdict == Verdict.FALSIFIED
        certificate = report.counterexample
        assert certificate["x"]["sheet"] == 0
        assert set(certificate) >= {"x", "candidate", "a", "residual"}
        assert recheck_counterexample(split_space, report, A)

    def test_horizontal_line_is_externally_hyperconvex(self, upper_plane, quick_trials):
        """Test external hyperconvexity of the horizontal boundary."""
        line = ConvexSet.boundary_line(0.0, upper_plane.window)
        assert check_externally_hyperconvex(upper_plane, line, quick_trials).passed

    def test_closed_ball_is_proximinal(self, plane, quick_trials):
        """Test a closed ball."""
        assert check_proximinal(plane, ConvexSet.ball((0.0, 0.0), 1.0), quick_trials).passed

    def test_open_ball_is_not_proximinal(self, plane, quick_trials):
        """Test an open ball."""
        ball = ConvexSet.ball((0.0, 0.0), 1.0, closed=False)
        report = check_proximinal(plane, ball, quick_trials)
        assert report.verdict == Verdict.FALSIFIED
        assert recheck_counterexample(plane, report, ball)

    def test_finite_subset_without_attained_distance(self, quick_trials):
        """Test a finite subset whose infimum is attained outside it."""
        space = FiniteMetricSpace(PATH)
        subset = FiniteSubset(space, [2], closure_extra=[1])
        report = check_proximinal(space, subset, quick_trials)
        assert report.verdict == Verdict.FALSIFIED
        assert recheck_counterexample(space, report, subset)


class TestRecheck:
    """Test certificate re-verification."""

    def test_passed_report(self, plane, quick_trials):
        """Test that passed reports have nothing to recheck."""
        with pytest.raises(DomainError):
            recheck_counterexample(plane, check_hyperconvex(plane, quick_trials))

    def test_set_certificate_needs_set(self, upper_plane, quick_trials):
        """Test that set certificates need their set."""
        line = ConvexSet.boundary_line(0.0, upper_plane.window)
        report = check_strongly_convex(upper_plane, line, quick_trials)
        with pytest.raises(DomainError):
            recheck_counterexample(upper_plane, report)

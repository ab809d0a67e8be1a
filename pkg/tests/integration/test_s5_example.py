"""Integration tests for the half-plane example: reports and phase sweep."""

import pytest

from services.checkers.domain.property_checks import check_hyperconvex, recheck_counterexample
from services.constructions.domain.strongly_convex import externally_glued_intersection
from services.s5_example.domain.example import (
    s5_counterexample,
    s5_family,
    s5_phase_sweep,
    s5_space,
    sweep_grid,
)
from services.s5_example.domain.models import S5Config
from shared.errors import DomainError
from shared.schemas import TrialConfig, Verdict


class TestSweepGrid:
    """Test the slope grid."""

    def test_quarter_step(self):
        """Test a step of 0.25."""
        assert sweep_grid(0.25) == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_default_step_ends_at_one(self):
        """Test that rounding keeps the last value at 1."""
        grid = sweep_grid(0.05)
        assert len(grid) == 21
        assert grid[-1] == 1.0

    def test_nonpositive_step(self):
        """Test that the step must be positive."""
        with pytest.raises(DomainError):
            sweep_grid(0.0)


class TestPhaseSweep:
    """Test the phase sweep over both orientations."""

    def test_coarse_sweep(self):
        """Test a 3 x 3 grid in both orientations."""
        rows = s5_phase_sweep(step=0.5, trials=3, seed=1)
        assert len(rows) == 12
        assert all(row.consistent for row in rows)
        assert all(row.a <= row.b for row in rows)
        assert [row.orientation for row in rows[:6]] == ["same"] * 6
        assert [row.orientation for row in rows[6:]] == ["reflected"] * 6

    def test_seed_reproducible(self):
        """Test that equal seeds give equal rows."""
        first = s5_phase_sweep(step=0.5, trials=2, seed=3, orientations=(False,))
        second = s5_phase_sweep(step=0.5, trials=2, seed=3, orientations=(False,))
        assert first == second

    def test_same_orientation_phase(self):
        """Test that triple emptiness follows a != b in the same orientation."""
        rows = s5_phase_sweep(step=0.5, trials=1, seed=0, orientations=(False,))
        for row in rows:
            assert row.triple_empty == (row.a != row.b)


class TestCounterexampleEndToEnd:
    """Test the counterexample through the checker and the constructions."""

    def test_checker_finds_three_balls(self):
        """Test that the injected family falsifies hyperconvexity and rechecks."""
        cfg = S5Config(a=0.0, b=1.0)
        X = s5_space(cfg)
        report = check_hyperconvex(X, TrialConfig(trials=5, seed=11), candidates=[s5_family(cfg)])
        assert report.verdict == Verdict.FALSIFIED
        assert report.counterexample["source"] == "candidate"
        assert recheck_counterexample(X, report)

    def test_equal_horizontal_slopes_construct_the_point(self):
        """Test that the construction agrees with the solver for a = b = 0."""
        cfg = S5Config(a=0.0, b=0.0)
        X = s5_space(cfg)
        report = s5_counterexample(cfg)
        point = externally_glued_intersection(X, s5_family(cfg))
        assert not report.triple_empty
        assert all(X.distance(point, c) <= 1.0 + 1e-9 for c in s5_family(cfg).centers)

    def test_report_json(self):
        """Test that reports serialize with encoded centers."""
        data = s5_counterexample(S5Config(a=0.0, b=1.0)).model_dump(mode="json")
        assert data["centers"][0] == {"sheet": 0, "x": 0.0, "y": 1.0}
        assert data["triple_empty"] is True
        assert [p["point"] is not None for p in data["pairwise"]] == [True, True, True]

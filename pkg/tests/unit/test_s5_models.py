"""Unit tests for the half-plane example models and figures."""

import pytest
from pydantic import ValidationError

from services.s5_example.domain.example import s5_centers, s5_counterexample, s5_trace_formula
from services.s5_example.domain.figures import Scene, _fmt, emit_svg, s5_scene
from services.s5_example.domain.models import SWEEP_HEADER, S5Config, S5TraceFormula, SweepRow
from shared.errors import DomainError


class TestS5Config:
    """Test configuration validation and the predicted phase."""

    def test_slope_order(self):
        """Test that a <= b is required."""
        with pytest.raises(ValidationError):
            S5Config(a=0.75, b=0.25)

    def test_slope_range(self):
        """Test that slopes lie in [0, 1]."""
        with pytest.raises(ValidationError):
            S5Config(a=0.0, b=1.5)

    @pytest.mark.parametrize(
        "a, b, reflected, expected",
        [
            (0.5, 0.5, False, True),
            (0.0, 1.0, False, False),
            (0.0, 0.0, True, True),
            (1.0, 1.0, True, True),
            (0.5, 0.5, True, False),
        ],
    )
    def test_predicted_phase(self, a, b, reflected, expected):
        """Test the predicted hyperconvexity."""
        assert S5Config(a=a, b=b, reflected=reflected).predicted_hyperconvex is expected

    def test_orientation(self):
        """Test the orientation label."""
        assert S5Config(a=0.0, b=0.0).orientation == "same"
        assert S5Config(a=0.0, b=0.0, reflected=True).orientation == "reflected"


class TestTraceFormula:
    """Test the closed-form trace of B(x1, 1)."""

    def test_same_orientation(self):
        """Test slope and intercept for a = 0, b = 1."""
        formula = S5TraceFormula.for_config(S5Config(a=0.0, b=1.0))
        assert formula.slope == 1.0
        assert formula.intercept == 0.0
        assert formula.lower_bound(0.5) == 0.5

    def test_reflected(self):
        """Test l, m and q for a = b = 0.5."""
        formula = S5TraceFormula.for_config(S5Config(a=0.5, b=0.5, reflected=True))
        assert formula.l == pytest.approx(-5.0 / 6.0)
        assert formula.m == pytest.approx(2.0)
        assert formula.q == pytest.approx(1.5)
        assert formula.lower_bound(1.0) == pytest.approx(0.5)

    def test_singular(self):
        """Test that a = 1 has no reflected formula."""
        formula = S5TraceFormula.for_config(S5Config(a=1.0, b=1.0, reflected=True))
        assert formula.singular
        with pytest.raises(DomainError):
            formula.lower_bound(0.0)

    def test_formula_matches_engine(self):
        """Test the closed form against the engine trace."""
        report = s5_counterexample(S5Config(a=0.25, b=0.75))
        assert report.trace_discrepancy <= 1e-9
        assert not s5_trace_formula(S5Config(a=0.25, b=0.75)).is_empty


class TestS5Report:
    """Test the three-ball experiment."""

    def test_centers(self):
        """Test the ball centers for both orientations."""
        first, second, third = s5_centers(S5Config(a=0.0, b=1.0))
        assert (first.sheet, tuple(first.coords)) == (0, (0.0, 1.0))
        assert (second.sheet, tuple(second.coords)) == (1, (0.0, -2.0))
        assert (third.sheet, tuple(third.coords)) == (1, (2.0, 0.0))
        assert tuple(s5_centers(S5Config(a=0.0, b=0.0, reflected=True))[1].coords) == (0.0, -1.0)

    def test_mismatched_slopes(self):
        """Test that a < b gives pairwise meeting balls without a common point."""
        report = s5_counterexample(S5Config(a=0.25, b=0.75))
        assert report.pairwise_ok
        assert report.triple_empty
        assert report.consistent
        assert not report.notes

    def test_equal_slopes(self):
        """Test that a = b gives a common point."""
        report = s5_counterexample(S5Config(a=0.5, b=0.5))
        assert not report.triple_empty
        assert report.triple_witness is not None
        assert report.consistent

    def test_reflected_interior(self):
        """Test the reflected orientation away from 0 and 1."""
        report = s5_counterexample(S5Config(a=0.5, b=0.5, reflected=True))
        assert report.triple_empty
        assert report.consistent

    def test_reflected_fallback(self):
        """Test the engine fallback at a = 1."""
        report = s5_counterexample(S5Config(a=1.0, b=1.0, reflected=True))
        assert report.formula_fallback
        assert report.consistent
        assert any("singular" in note for note in report.notes)

    def test_to_text(self):
        """Test the text rendering."""
        text = s5_counterexample(S5Config(a=0.0, b=1.0)).to_text()
        assert text.startswith("configuration: a=0.0 b=1.0 orientation=same\n")
        assert "triple: empty\n" in text
        assert "consistent: True\n" in text


class TestSweepRow:
    """Test sweep rows."""

    def test_csv_line(self):
        """Test the CSV rendering."""
        row = SweepRow(
            a=0.5, b=1.0, orientation="same", pairwise_ok=True, triple_empty=False, predicted=False, consistent=True
        )
        assert row.csv_line() == "0.50,1.00,same,true,false,false,true"
        assert len(row.csv_line().split(",")) == len(SWEEP_HEADER.split(","))


class TestFigures:
    """Test the SVG emitter."""

    def test_fmt(self):
        """Test fixed precision without negative zero."""
        assert _fmt(1.23456) == "1.235"
        assert _fmt(-0.0001) == "0.000"

    def test_empty_scene(self):
        """Test that an empty scene renders a single frame."""
        svg = emit_svg(Scene())
        assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>\n<svg')
        assert svg.endswith("</svg>\n")
        assert "<polygon" not in svg

    def test_s5_scene(self):
        """Test panels, titles and caption."""
        cfg = S5Config(a=0.0, b=1.0)
        scene = s5_scene(cfg, s5_counterexample(cfg))
        assert [panel.title for panel in scene.panels] == ["H1 (slope 0)", "H2 (slope 1)"]
        assert scene.caption == "a=0 b=1 same triple empty"
        assert len(scene.panels[0].balls) == 1
        assert len(scene.panels[1].traces) == 1

    def test_deterministic(self):
        """Test that equal scenes give byte-identical documents."""
        cfg = S5Config(a=0.5, b=0.5)
        first = emit_svg(s5_scene(cfg, s5_counterexample(cfg)))
        second = emit_svg(s5_scene(cfg, s5_counterexample(cfg)))
        assert first == second
        assert ">w</text>" in first

"""Unit tests for shared configuration, schemas, seeding and logging."""

import json
import logging

import pytest
from pydantic import ValidationError
from pythonjsonlogger import jsonlogger

from shared.config import Settings
from shared.errors import DomainError, HyperGlueError, NoGateError, PropertyViolation
from shared.logging_config import configure_logging
from shared.schemas import PropertyReport, Tolerance, TrialConfig, Verdict
from shared.seeding import derive_seed, trial_rng


class TestSettings:
    """Test environment-driven settings."""

    def test_defaults(self, monkeypatch):
        """Test the default tolerances and window."""
        monkeypatch.delenv("HYPERGLUE_EPS_FEAS", raising=False)
        settings = Settings()
        assert settings.eps_feas == 1e-9
        assert settings.eps_eq == 1e-12
        assert settings.window_radius == 100.0
        assert settings.max_chain_steps == 1024

    def test_env_prefix(self, monkeypatch):
        """Test HYPERGLUE_ overrides."""
        monkeypatch.setenv("HYPERGLUE_SWEEP_STEP", "0.25")
        monkeypatch.setenv("HYPERGLUE_DEFAULT_TRIALS", "7")
        settings = Settings()
        assert settings.sweep_step == 0.25
        assert settings.default_trials == 7


class TestTolerance:
    """Test the two-tier tolerance."""

    def test_solver_slack(self):
        """Test that the solver relaxes by a quarter of eps_feas."""
        assert Tolerance(eps_feas=1e-8, eps_eq=1e-12).solver_slack == pytest.approx(2.5e-9)

    def test_order(self):
        """Test that eps_eq may not exceed eps_feas."""
        with pytest.raises(ValidationError):
            Tolerance(eps_feas=1e-12, eps_eq=1e-9)

    def test_positive(self):
        """Test that tolerances are positive."""
        with pytest.raises(ValidationError):
            Tolerance(eps_feas=0.0)


class TestTrialConfig:
    """Test the checker budget model."""

    def test_rejects_unknown_keys(self):
        """Test that unknown keys are rejected."""
        with pytest.raises(ValidationError):
            TrialConfig(trials=5, budget=3)

    def test_family_size(self):
        """Test that families have at least two balls."""
        with pytest.raises(ValidationError):
            TrialConfig(max_family_size=1)


class TestPropertyReport:
    """Test reports and their text rendering."""

    def test_falsified_needs_counterexample(self):
        """Test the certificate requirement."""
        with pytest.raises(ValidationError):
            PropertyReport(property_name="gated", verdict=Verdict.FALSIFIED)

    def test_to_text(self):
        """Test the key=value rendering."""
        report = PropertyReport(
            property_name="proximinal",
            verdict=Verdict.FALSIFIED,
            trials_run=3,
            seed=9,
            counterexample={"x": [1.0, 2.0], "distance": 0.5},
            statistics={"b": 2.0, "a": 1.0},
        )
        lines = report.to_text().splitlines()
        assert lines[:5] == ["property=proximinal", "verdict=falsified", "trials_run=3", "trials_skipped=0", "seed=9"]
        assert lines[5:7] == ["stat.a=1.0", "stat.b=2.0"]
        assert json.loads(lines[7].split("=", 1)[1]) == {"distance": 0.5, "x": [1.0, 2.0]}

    def test_json_round_trip(self):
        """Test that a dumped report validates again."""
        report = PropertyReport(property_name="hyperconvex", verdict=Verdict.PASS, trials_run=10, notes=["n"])
        assert PropertyReport.model_validate(report.model_dump(mode="json")) == report


class TestSeeding:
    """Test derived random streams."""

    def test_derive_seed_is_stable(self):
        """Test determinism and label sensitivity."""
        assert derive_seed(42, "hyperconvex", 0) == derive_seed(42, "hyperconvex", 0)
        assert derive_seed(42, "hyperconvex", 0) != derive_seed(42, "hyperconvex", 1)
        assert derive_seed(42, "a") != derive_seed(43, "a")
        assert 0 <= derive_seed(0) < 2**64

    def test_trial_rng(self):
        """Test that equal labels draw equal numbers."""
        assert trial_rng(1, "x").random() == trial_rng(1, "x").random()


class TestErrors:
    """Test the exception hierarchy."""

    def test_hierarchy(self):
        """Test base classes."""
        assert issubclass(DomainError, HyperGlueError)
        assert issubclass(DomainError, ValueError)
        assert issubclass(PropertyViolation, HyperGlueError)

    def test_payloads(self):
        """Test witness and certificate payloads."""
        assert NoGateError("no gate", witness={"sample": 1}).witness == {"sample": 1}
        assert PropertyViolation("broken").certificate == {}


class TestLogging:
    """Test logging configuration."""

    def test_plain(self):
        """Test level and a single handler."""
        configure_logging("DEBUG")
        configure_logging("WARNING")
        root = logging.getLogger()
        assert root.level == logging.WARNING
        assert len(root.handlers) == 1

    def test_json(self):
        """Test the JSON formatter."""
        configure_logging("INFO", json_output=True)
        assert isinstance(logging.getLogger().handlers[0].formatter, jsonlogger.JsonFormatter)
        configure_logging("INFO")

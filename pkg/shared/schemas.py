"""Report and configuration models shared by every module."""

import enum
import json
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from shared.config import settings


class Tolerance(BaseModel):
    """Two-tier comparison slack: eps_eq for equalities, eps_feas for feasibility."""

    model_config = ConfigDict(frozen=True)

    eps_feas: float = Field(default_factory=lambda: settings.eps_feas, gt=0)
    eps_eq: float = Field(default_factory=lambda: settings.eps_eq, gt=0)

    @model_validator(mode="after")
    def check_order(self):
        if self.eps_eq > self.eps_feas:
            raise ValueError(
                f"eps_eq ({self.eps_eq}) must not exceed eps_feas ({self.eps_feas})"
            )
        return self

    @property
    def solver_slack(self) -> float:
        """Half-plane relaxation used by the polygon solver."""
        return self.eps_feas / 4.0


class TrialConfig(BaseModel):
    """Budget and sampling window of a randomized checker."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    trials: int = Field(default_factory=lambda: settings.default_trials, ge=1)
    max_family_size: int = Field(default_factory=lambda: settings.max_family_size, ge=2)
    seed: int = 0
    box_half_width: float = Field(
        default_factory=lambda: settings.sampling_half_width, gt=0
    )


class Verdict(str, enum.Enum):
    """Outcome of a property check."""
    PASS = "pass"
    FALSIFIED = "falsified"


class PropertyReport(BaseModel):
    """
    Verdict of a checker together with its certificate.

    A PASS verdict means "no counterexample in `trials_run` trials", never
    a proof. A FALSIFIED verdict always carries a counterexample that can be
    re-checked from the serialized data alone.
    """

    model_config = ConfigDict(extra="forbid")

    property_name: str
    verdict: Verdict
    trials_run: int = 0
    trials_skipped: int = 0
    seed: Optional[int] = None
    counterexample: Optional[dict[str, Any]] = None
    statistics: dict[str, float] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_certificate(self):
        if self.verdict == Verdict.FALSIFIED and self.counterexample is None:
            raise ValueError("a falsified report needs a counterexample")
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_text(self) -> str:
        """Line-oriented key=value rendering (stable key order)."""
        lines = [
            f"property={self.property_name}",
            f"verdict={self.verdict.value}",
            f"trials_run={self.trials_run}",
            f"trials_skipped={self.trials_skipped}",
            f"seed={self.seed if self.seed is not None else ''}",
        ]
        for key in sorted(self.statistics):
            lines.append(f"stat.{key}={self.statistics[key]!r}")
        for index, note in enumerate(self.notes):
            lines.append(f"note.{index}={note}")
        if self.counterexample is not None:
            payload = json.dumps(self.counterexample, sort_keys=True, separators=(",", ":"))
            lines.append(f"counterexample={payload}")
        return "\n".join(lines) + "\n"

"""RunConfig document schema for the command line."""

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from services.gluing.domain.model import SheetSpec
from services.gluing.domain.space import GluedSpace2
from services.linf2.domain.geometry import HalfPlane, Window
from services.linf2.domain.plane import ConvexSet, LinfPlane
from services.linf2.domain.polygon import convex_hull
from services.metric_core.domain.spaces import FiniteMetricSpace, FiniteSubset, MetricSpace
from services.s5_example.domain.example import s5_space
from services.s5_example.domain.models import S5Config
from shared.errors import ConfigError
from shared.schemas import Tolerance, TrialConfig

SCHEMA_VERSION = 1

Command = Literal["glue-dist", "check", "repro-s5", "sweep", "plot"]
PropertyName = Literal["hyperconvex", "strongly_convex", "externally_hyperconvex", "gated", "proximinal"]

RANDOMIZED_COMMANDS = ("check", "repro-s5", "sweep")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelDescriptor(_Strict):
    """
    The space a command works in.

    glued: explicit sheets. s5: the two-half-plane example. plane: the
    l-infinity plane, or the half-plane above a line of slope
    `region_slope`. finite: a distance matrix file.
    """

    kind: Literal["glued", "s5", "plane", "finite"] = "s5"
    sheets: Optional[list[SheetSpec]] = None
    s5: Optional[S5Config] = None
    region_slope: Optional[float] = Field(default=None, ge=-1.0, le=1.0)
    matrix_path: Optional[str] = None
    window_radius: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "glued" and not self.sheets:
            raise ValueError("a glued model needs sheets")
        if self.kind == "finite" and not self.matrix_path:
            raise ValueError("a finite model needs matrix_path")
        return self

    @property
    def s5_config(self) -> S5Config:
        return self.s5 or S5Config(a=0.0, b=1.0)

    def build(self, tolerance: Optional[Tolerance] = None) -> MetricSpace:
        window = Window(self.window_radius) if self.window_radius else None
        if self.kind == "glued":
            return GluedSpace2(self.sheets, window, tolerance)
        if self.kind == "s5":
            return s5_space(self.s5_config, window, tolerance)
        if self.kind == "plane":
            region = None if self.region_slope is None else HalfPlane.above_line(self.region_slope)
            return LinfPlane(region, window, tolerance)
        return FiniteMetricSpace.from_file(Path(self.matrix_path), tolerance)


class SetDescriptor(_Strict):
    """The subset A a set property is checked on."""

    kind: Literal["gluing_set", "boundary_line", "ball", "polygon", "finite_subset"]
    slope: Optional[float] = Field(default=None, ge=-1.0, le=1.0)
    center: Optional[list[float]] = None
    radius: Optional[float] = Field(default=None, ge=0)
    vertices: Optional[list[list[float]]] = None
    members: Optional[list[int]] = None
    closure_extra: list[int] = Field(default_factory=list)
    closed: bool = True

    def build(self, space: MetricSpace):
        if self.kind == "gluing_set":
            if not isinstance(space, GluedSpace2):
                raise ConfigError("gluing_set needs a glued or s5 model")
            return space.gluing_set()
        if self.kind == "finite_subset":
            if not isinstance(space, FiniteMetricSpace) or not self.members:
                raise ConfigError("finite_subset needs a finite model and members")
            return FiniteSubset(space, self.members, self.closure_extra)
        if not isinstance(space, LinfPlane):
            raise ConfigError(f"{self.kind} sets live in a plane model")
        if self.kind == "boundary_line":
            return ConvexSet.boundary_line(self.slope or 0.0, space.window)
        if self.kind == "ball":
            if self.center is None or self.radius is None:
                raise ConfigError("ball sets need center and radius")
            return ConvexSet.ball(self.center, self.radius, space, self.closed)
        if not self.vertices:
            raise ConfigError("polygon sets need vertices")
        poly = convex_hull(self.vertices)
        return ConvexSet("polygon", poly, self.closed)


class PointsBlock(_Strict):
    x: str
    y: str


class SweepOptions(_Strict):
    step: Optional[float] = Field(default=None, gt=0, le=1)
    trials: Optional[int] = Field(default=None, ge=1)


class RunConfig(_Strict):
    """
    One run of the command line. Flags override the document, the
    document overrides settings.
    """

    schema_version: Literal[1] = SCHEMA_VERSION
    command: Optional[Command] = None
    model: ModelDescriptor = Field(default_factory=ModelDescriptor)
    property: Optional[PropertyName] = None
    set: Optional[SetDescriptor] = None
    checker: Optional[TrialConfig] = None
    tolerance: Optional[Tolerance] = None
    seed: Optional[int] = None
    out: Optional[str] = None
    points: Optional[PointsBlock] = None
    sweep: SweepOptions = Field(default_factory=SweepOptions)

    @classmethod
    def load(cls, path: Path) -> "RunConfig":
        """
        Raises:
            ConfigError: On unreadable files, bad JSON or schema errors
        """
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        return cls.parse(data)

    @classmethod
    def parse(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("The config document must be a JSON object")
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid config: {e.errors(include_url=False)}") from e

    def require_seed(self, command: str) -> int:
        if command in RANDOMIZED_COMMANDS and self.seed is None:
            raise ConfigError(f"Command {command} needs an explicit seed")
        return 0 if self.seed is None else self.seed

    def trial_config(self, seed: int, trials: Optional[int] = None) -> TrialConfig:
        base = self.checker.model_dump() if self.checker else {}
        base["seed"] = seed
        if trials is not None:
            base["trials"] = trials
        return TrialConfig(**base)

"""Configuration and report models for the two-half-plane example."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from shared.errors import DomainError


class S5Config(BaseModel):
    """
    H1 = {xi_2 >= a xi_1} (or {xi_2 >= -a xi_1} when reflected) glued to
    H2 = {xi_2 <= b xi_1} along their boundary lines.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(ge=0.0, le=1.0)
    b: float = Field(ge=0.0, le=1.0)
    reflected: bool = False

    @model_validator(mode="after")
    def check_order(self):
        if self.a > self.b:
            raise ValueError(f"Slopes must satisfy a <= b, got a={self.a}, b={self.b}")
        return self

    @property
    def orientation(self) -> str:
        return "reflected" if self.reflected else "same"

    @property
    def predicted_hyperconvex(self) -> bool:
        if self.reflected:
            return self.a == self.b and self.a in (0.0, 1.0)
        return self.a == self.b


class S5TraceFormula(BaseModel):
    """
    Closed-form description of B(x1, 1) on H2.

    Same orientation: -1 <= xi_1 <= 1 and xi_2 >= slope xi_1 + intercept.
    Reflected: -1 <= xi_1 <= 1 and xi_2 >= max(l, m xi_1 - q); m and q
    are undefined for a = 1.
    """

    model_config = ConfigDict(frozen=True)

    reflected: bool
    slope: Optional[float] = None
    intercept: Optional[float] = None
    l: Optional[float] = None
    m: Optional[float] = None
    q: Optional[float] = None

    @classmethod
    def for_config(cls, cfg: S5Config) -> "S5TraceFormula":
        a, b = cfg.a, cfg.b
        if not cfg.reflected:
            return cls(reflected=False, slope=(b - a) / (1 + a), intercept=-a * (1 + b) / (1 + a))
        l = -1 + (1 - b) * (1 - a) / (1 + a)
        if a == 1.0:
            return cls(reflected=True, l=l)
        return cls(reflected=True, l=l, m=(a + b) / (1 - a), q=a * (1 + b) / (1 - a))

    @property
    def singular(self) -> bool:
        return self.reflected and self.m is None

    def lower_bound(self, xi_1: float) -> float:
        """Lower edge of the trace at xi_1 (before clipping to H2)."""
        if not self.reflected:
            return self.slope * xi_1 + self.intercept
        if self.singular:
            raise DomainError("The reflected trace formula is singular at a = 1")
        return max(self.l, self.m * xi_1 - self.q)


class PairWitness(BaseModel):
    first: int
    second: int
    point: Optional[dict] = None


class S5Report(BaseModel):
    """Outcome of the three-ball experiment for one configuration."""

    config: S5Config
    centers: list[dict]
    pairwise: list[PairWitness]
    triple_empty: bool
    triple_witness: Optional[dict] = None
    predicted_hyperconvex: bool
    observed_hyperconvex: bool
    trace_discrepancy: float
    formula_fallback: bool = False
    notes: list[str] = Field(default_factory=list)

    @property
    def pairwise_ok(self) -> bool:
        return all(p.point is not None for p in self.pairwise)

    @property
    def consistent(self) -> bool:
        return self.pairwise_ok and self.predicted_hyperconvex == self.observed_hyperconvex

    def to_text(self) -> str:
        cfg = self.config
        lines = [
            f"configuration: a={cfg.a!r} b={cfg.b!r} orientation={cfg.orientation}",
            "centers: " + " ".join(f"{c['sheet']}:{c['x']!r},{c['y']!r}" for c in self.centers),
        ]
        for p in self.pairwise:
            witness = "none" if p.point is None else f"{p.point['sheet']}:{p.point['x']!r},{p.point['y']!r}"
            lines.append(f"pair {p.first}{p.second}: {witness}")
        lines += [
            f"triple: {'empty' if self.triple_empty else 'nonempty'}",
            f"predicted hyperconvex: {self.predicted_hyperconvex}",
            f"observed hyperconvex: {self.observed_hyperconvex}",
            f"trace discrepancy: {self.trace_discrepancy!r}",
            f"consistent: {self.consistent}",
        ]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


class SweepRow(BaseModel):
    a: float
    b: float
    orientation: str
    pairwise_ok: bool
    triple_empty: bool
    predicted: bool
    consistent: bool

    def csv_line(self) -> str:
        flags = (self.pairwise_ok, self.triple_empty, self.predicted, self.consistent)
        return ",".join([f"{self.a:.2f}", f"{self.b:.2f}", self.orientation, *(str(f).lower() for f in flags)])


SWEEP_HEADER = "a,b,orientation,pairwise_ok,triple_empty,predicted,consistent"

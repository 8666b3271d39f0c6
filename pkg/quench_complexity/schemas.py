"""
schemas.py — Pydantic models for scenario documents, curve files and validation reports.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import DEFAULT_SAMPLES
from quench_complexity.complexity_logic import LambdaPolicy

OutputKind = Literal["total", "zero-mode", "bounds", "modes"]


# ─── Scenario document ────────────────────────────────────────

class ChainModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1, description="number of oscillators")
    omega0: float = Field(gt=0, description="pre-quench frequency")
    k0: float = Field(ge=0, description="pre-quench coupling")


class SegmentModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    omega: float = Field(ge=0)
    k: float = Field(ge=0)
    duration: Optional[float] = Field(default=None, gt=0, description="null = held forever")


class GridModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: float = Field(ge=0)
    end: float
    samples: int = Field(default=DEFAULT_SAMPLES, ge=2)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.start < self.end:
            raise ValueError(f"grid start {self.start} must be below end {self.end}")
        return self


class SuccessiveModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t0: float = Field(ge=0, description="reference time of the successive complexity")


class ScenarioDocument(BaseModel):
    """The YAML run configuration."""
    model_config = ConfigDict(extra="forbid")

    chain: ChainModel
    segments: list[SegmentModel] = Field(min_length=1)
    grid: GridModel
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL
    outputs: list[OutputKind] = Field(default_factory=lambda: ["total", "zero-mode"])
    successive: Optional[SuccessiveModel] = None

    @model_validator(mode="after")
    def _only_last_open(self):
        for i, seg in enumerate(self.segments[:-1]):
            if seg.duration is None:
                raise ValueError(f"segments[{i}].duration: only the last segment may be open-ended")
        return self


# ─── Curve file (JSON) ────────────────────────────────────────

class CurveMetadata(BaseModel):
    parameters: ScenarioDocument
    policy: LambdaPolicy
    grid: GridModel
    version: str
    figure: Optional[str] = None
    nonpositive_denominators: int = 0


class CurveRecord(BaseModel):
    t: float
    c_total: float
    c_zero: float
    c_rest: float
    c_lower: Optional[float] = None
    c_upper: Optional[float] = None
    a: Optional[list[float]] = None
    b: Optional[list[float]] = None


class CurveDocument(BaseModel):
    metadata: CurveMetadata
    columns: list[str]
    samples: list[CurveRecord]


# ─── Validation report ────────────────────────────────────────

class CheckResult(BaseModel):
    name: str
    passed: bool
    margin: float = Field(description="measured error or slack; compare with tolerance")
    tolerance: float
    detail: str = ""


class ValidationReport(BaseModel):
    profile: str
    passed: bool
    n_checks: int
    n_failed: int
    checks: list[CheckResult]

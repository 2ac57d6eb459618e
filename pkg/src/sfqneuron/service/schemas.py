"""Request and response models for the simulation API."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class SimulateRequest(BaseModel):
    scenario: dict | None = Field(default=None, description="Inline scenario document.")
    bundled: str | None = Field(default=None, description="Name of a bundled scenario.")
    include_trace: bool = False

    @model_validator(mode="after")
    def _exactly_one_source(self) -> "SimulateRequest":
        if (self.scenario is None) == (self.bundled is None):
            raise ValueError("provide exactly one of 'scenario' or 'bundled'")
        return self


class TraceEvent(BaseModel):
    time_fs: int
    wire: str


class SimulateResponse(BaseModel):
    name: str
    event_count: int
    fires_per_cycle: list[int] | None = None
    expect_ok: bool | None = None
    golden_ok: bool | None = None
    passed: bool
    trace: list[TraceEvent] | None = None


class ValidateRequest(BaseModel):
    scenario: dict | None = None
    bundled: str | None = None

    @model_validator(mode="after")
    def _exactly_one_source(self) -> "ValidateRequest":
        if (self.scenario is None) == (self.bundled is None):
            raise ValueError("provide exactly one of 'scenario' or 'bundled'")
        return self


class DiagnosticModel(BaseModel):
    code: str
    subject: str
    message: str


class ValidateResponse(BaseModel):
    name: str
    ok: bool
    diagnostics: list[DiagnosticModel]


class SweepRequest(BaseModel):
    scenarios: list[str]
    parameters: list[str] | None = None
    range_pct: int = 30
    step_pct: int = 5


class ExperimentRequest(BaseModel):
    config: dict

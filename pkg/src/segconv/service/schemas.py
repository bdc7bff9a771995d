"""Pydantic request/response models for the benchmark service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class LayerConfigIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    input_h: int = Field(ge=1)
    input_w: int = Field(ge=1)
    c_in: int = Field(ge=1)
    kernel_n: int = Field(ge=2)
    c_out: int = Field(ge=1)
    pad: int = Field(default=2, ge=0)
    repeats: int = Field(default=5, ge=1)


class RunOptionsIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    engine: Literal["ref", "seg", "both"] = "both"
    repeats: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    threads: int = Field(default=1, ge=1)
    verify: bool = True
    input_dir: Optional[str] = None


class RunRequest(BaseModel):
    configs: list[LayerConfigIn]
    options: RunOptionsIn = RunOptionsIn()


class SuiteRequest(BaseModel):
    options: RunOptionsIn = RunOptionsIn()


class EquivalenceOut(BaseModel):
    checked: bool
    shapes_match: Optional[bool] = None
    max_abs_diff: Optional[float] = None
    max_rel_diff: Optional[float] = None
    rel_tol: Optional[float] = None
    abs_tol: Optional[float] = None
    passed: Optional[bool] = None


class LayerResultOut(BaseModel):
    name: str
    input_h: int
    input_w: int
    c_in: int
    kernel_n: int
    c_out: int
    pad: int
    repeats: int
    out_h: Optional[int] = None
    out_w: Optional[int] = None
    input_source: Optional[str] = None
    time_reference_s: Optional[float] = None
    time_segregated_s: Optional[float] = None
    speedup: Optional[float] = None
    mults_reference: Optional[int] = None
    mults_segregated: Optional[int] = None
    ideal_ratio: Optional[float] = None
    memory_savings_upsampled_total_bytes: Optional[int] = None
    memory_savings_upsampled_minus_input_bytes: Optional[int] = None
    equivalence: EquivalenceOut
    error: Optional[str] = None


class EnvironmentOut(BaseModel):
    element_bits: int
    threads: int
    seed: int
    engine: str
    verify: bool
    repeats_override: Optional[int] = None


class BenchReportOut(BaseModel):
    format_version: int
    environment: EnvironmentOut
    layers: list[LayerResultOut]


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kernel_n: int = Field(ge=2)
    input_h: int = Field(ge=1)
    input_w: int = Field(ge=1)
    pad: int = Field(default=0, ge=0)
    c_in: int = Field(default=1, ge=1)
    c_out: int = Field(default=1, ge=1)
    seed: int = 0


class VerifyResponse(BaseModel):
    passed: bool
    out_h: int
    out_w: int
    max_abs_diff: float
    max_rel_diff: float
    rel_tol: float
    abs_tol: float
    mults_reference: int
    mults_segregated: int
    ideal_ratio: float


class ConvertRequest(BaseModel):
    ppm_base64: str


class ConvertResponse(BaseModel):
    sct_base64: str
    channels: int
    height: int
    width: int


class RenderRequest(BaseModel):
    report: BenchReportOut
    format: Literal["json", "markdown", "csv"]


class RenderResponse(BaseModel):
    text: str


class HealthResponse(BaseModel):
    status: str
    version: str

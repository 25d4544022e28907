"""Request/response bodies for the HTTP service.

The wire format for models mirrors ``LevyModel.to_dict`` so the same JSON
document works as a CLI config file and as a request fragment.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from .. import dividends as dv
from ..errors import DomainError
from ..levy import LevyModel
from ..simulate import SimConfig, SimResult


class ExponentialSpec(BaseModel):
    type: Literal["exponential"]
    mean: float = Field(gt=0)


class GammaSpec(BaseModel):
    type: Literal["gamma"]
    shape: float = Field(gt=0)
    scale: float = Field(gt=0)


class JumpsSpec(BaseModel):
    type: Literal["compound_poisson"] = "compound_poisson"
    rate: float = Field(gt=0)
    dist: Union[ExponentialSpec, GammaSpec] = Field(discriminator="type")


class ModelSpec(BaseModel):
    drift: float
    sigma: float = Field(default=0.0, ge=0)
    jumps: Optional[JumpsSpec] = None

    def to_model(self) -> LevyModel:
        return LevyModel.from_dict(self.model_dump())

    @classmethod
    def from_model(cls, model: LevyModel) -> "ModelSpec":
        return cls.model_validate(model.to_dict())


class PolicySpec(BaseModel):
    """Tagged union over the supported control policies."""

    type: Literal["pay_nothing", "barrier", "pair"]
    a: Optional[float] = None
    c1: Optional[float] = None
    c2: Optional[float] = None
    delta: float = 0.0

    @model_validator(mode="after")
    def _check_fields(self) -> "PolicySpec":
        if self.type == "barrier" and self.a is None:
            raise ValueError("barrier policy requires 'a'")
        if self.type == "pair" and (self.c1 is None or self.c2 is None):
            raise ValueError("pair policy requires 'c1' and 'c2'")
        return self

    def to_policy(self) -> dv.Policy:
        if self.type == "pay_nothing":
            return dv.PayNothing()
        if self.type == "barrier":
            return dv.Barrier(a=self.a)
        return dv.ReflectedPair(c1=self.c1, c2=self.c2, delta=self.delta)

    @classmethod
    def from_policy(cls, policy: dv.Policy) -> "PolicySpec":
        if isinstance(policy, dv.PayNothing):
            return cls(type="pay_nothing")
        if isinstance(policy, dv.Barrier):
            return cls(type="barrier", a=policy.a)
        return cls(type="pair", c1=policy.c1, c2=policy.c2, delta=policy.delta)


class SimConfigSpec(BaseModel):
    n_paths: int = Field(gt=0)
    time_step: float = 1e-3
    horizon: Optional[float] = None
    seed: int = 0
    antithetic: bool = False
    boundary_correction: bool = True

    def to_config(self) -> SimConfig:
        return SimConfig(n_paths=self.n_paths, time_step=self.time_step,
                         horizon=self.horizon, seed=self.seed,
                         antithetic=self.antithetic,
                         boundary_correction=self.boundary_correction)


SCALE_FUNCTIONS = ("w", "w_prime", "w_bar", "z", "z_bar", "k", "h")


class ScaleRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    points: list[float]
    functions: list[str] = list(SCALE_FUNCTIONS)

    @model_validator(mode="after")
    def _check(self) -> "ScaleRequest":
        bad = [f for f in self.functions if f not in SCALE_FUNCTIONS]
        if bad:
            raise ValueError(f"unknown scale functions {bad}; choose from {SCALE_FUNCTIONS}")
        if not self.points:
            raise ValueError("points must be nonempty")
        return self


class ScaleResponse(BaseModel):
    points: list[float]
    values: dict[str, list[float]]
    phi: float


class BarrierRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    lam: float = Field(ge=1)
    x: Optional[float] = None


class ValueReportSpec(BaseModel):
    dividends_npv: float
    injections_npv: float
    combined: float

    @classmethod
    def from_report(cls, rep: dv.ValueReport) -> "ValueReportSpec":
        return cls(dividends_npv=rep.dividends_npv,
                   injections_npv=rep.injections_npv, combined=rep.combined)


class BarrierResponse(BaseModel):
    a_lambda: float
    value: Optional[ValueReportSpec] = None


class ThresholdsRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    lam: float = Field(ge=1)
    delta: float = Field(gt=0)
    x: Optional[float] = None


class ThresholdsResponse(BaseModel):
    c1: float
    c2: float
    a_lambda: float
    g_max: float
    foc_residual: float
    match_residual: float
    value: Optional[ValueReportSpec] = None


class ConstrainedRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    x: float = Field(ge=0)
    K: float = Field(ge=0)
    delta: float = Field(default=0.0, ge=0)


class ConstrainedResponse(BaseModel):
    status: str
    value: Optional[float] = None   # None when infeasible (the value is -inf)
    lambda_star: Optional[float] = None
    injections_check: Optional[float] = None
    policy: PolicySpec


class SimulateRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    x: float = Field(ge=0)
    policy: PolicySpec
    config: SimConfigSpec


class SimResultSpec(BaseModel):
    dividends_mean: float
    dividends_se: float
    injections_mean: float
    injections_se: float
    payments_count_mean: float
    n_paths_used: int
    truncation_error_bound: float
    horizon_warning: bool

    @classmethod
    def from_result(cls, r: SimResult) -> "SimResultSpec":
        return cls(dividends_mean=r.dividends_mean, dividends_se=r.dividends_se,
                   injections_mean=r.injections_mean, injections_se=r.injections_se,
                   payments_count_mean=r.payments_count_mean,
                   n_paths_used=r.n_paths_used,
                   truncation_error_bound=r.truncation_error_bound,
                   horizon_warning=r.horizon_warning)


class ExitRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    x: float
    b: float
    a: float
    config: SimConfigSpec

    @model_validator(mode="after")
    def _check(self) -> "ExitRequest":
        if not self.b <= self.x <= self.a:
            raise ValueError(f"need b <= x <= a, got b={self.b} x={self.x} a={self.a}")
        return self


class ExitResponse(BaseModel):
    up: SimResultSpec
    down: SimResultSpec


class FigureRequest(BaseModel):
    model: ModelSpec
    q: float = Field(gt=0)
    K: float = Field(default=2.7, ge=0)
    delta: Optional[float] = None
    x_grid: Optional[list[float]] = None
    lambda_grid: Optional[list[float]] = None


class TableSpec(BaseModel):
    headers: list[str]
    rows: list[list[object]]


class FigureResponse(BaseModel):
    figure_id: int
    tables: dict[str, TableSpec]


class ErrorBody(BaseModel):
    error: str
    kind: Literal["domain", "numerical"]


def load_model_file(path: str) -> ModelSpec:
    """Read a model config file (same schema as the request fragment)."""
    import json

    with open(path) as f:
        data = json.load(f)
    try:
        return ModelSpec.model_validate(data)
    except Exception as exc:
        raise DomainError(f"invalid model config {path}: {exc}") from exc

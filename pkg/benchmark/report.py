# benchmark/report.py
import math
from typing import Dict, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from metrics.norms import SeriesNorm


class MethodNorms(BaseModel):
    energy_drift: SeriesNorm
    kinematic_residual: SeriesNorm
    dynamical_residual: SeriesNorm
    momentum_drift: SeriesNorm
    momentum_drift_axes: Dict[str, SeriesNorm] = Field(default_factory=dict)


class MethodReport(BaseModel):
    """One (case, method) run."""

    case: str
    method: str
    n_states: int = Field(..., gt=0)
    n_equations: int = Field(..., ge=0)
    wall_seconds: float = Field(..., ge=0.0)
    accepted_steps: int = 0
    rejected_steps: int = 0
    rhs_evaluations: int = 0
    settings: Dict[str, object] = Field(default_factory=dict)
    norms: MethodNorms

    @model_validator(mode="after")
    def finite_norms(self):
        norms = [self.norms.energy_drift, self.norms.kinematic_residual, self.norms.dynamical_residual, self.norms.momentum_drift]
        norms += list(self.norms.momentum_drift_axes.values())
        for n in norms:
            if not all(math.isfinite(v) for v in (n.max_abs, n.rms, n.relative_max_abs, n.relative_rms)):
                raise ValueError("report norms must be finite")
        return self

    def short_repr(self) -> str:
        n = self.norms
        return (
            f"{self.method:<18} {self.n_states:>6} {self.n_equations:>9} {self.wall_seconds:>9.3f}"
            f" {n.energy_drift.max_abs:>11.3e} {n.kinematic_residual.max_abs:>11.3e}"
            f" {n.dynamical_residual.max_abs:>11.3e} {n.momentum_drift.max_abs:>11.3e}"
        )


class CompareReport(BaseModel):
    case: str
    settings: Dict[str, object] = Field(default_factory=dict)
    rows: list[MethodReport]

    def table(self) -> str:
        header = (
            f"{'method':<18} {'states':>6} {'equations':>9} {'wall [s]':>9}"
            f" {'energy':>11} {'kinematic':>11} {'dynamical':>11} {'momentum':>11}"
        )
        return "\n".join([f"case: {self.case}", header, *(row.short_repr() for row in self.rows)])


class BenchReport(BaseModel):
    case: str
    repeats: int = Field(..., gt=0)
    median_seconds: Dict[str, float]
    reduced_faster: bool


class RunOverrides(BaseModel):
    """Optional JSON file passed with --config; command-line flags take precedence."""

    rtol: Optional[float] = Field(None, gt=0.0)
    atol: Optional[float] = Field(None, gt=0.0)
    t_final: Optional[float] = Field(None, gt=0.0)
    sample_step: Optional[float] = Field(None, gt=0.0)
    max_step: Optional[float] = Field(None, gt=0.0)
    method: Optional[Literal["adaptive", "fixed"]] = None
    parameters: Dict[str, object] = Field(default_factory=dict)

    @field_validator("parameters")
    @classmethod
    def scalar_parameters(cls, v):
        for key, value in v.items():
            if isinstance(value, (dict, set)):
                raise ValueError(f"parameter '{key}' must be a scalar or list")
        return v

    def merged(self, other: "RunOverrides") -> "RunOverrides":
        """Fields set on `other` win."""
        data = self.model_dump()
        for key, value in other.model_dump(exclude_none=True).items():
            if key == "parameters":
                data["parameters"] = {**data["parameters"], **value}
            else:
                data[key] = value
        return RunOverrides.model_validate(data)

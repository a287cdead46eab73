# integrate/settings.py
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import CurrentConfig


class IntegratorSettings(BaseModel):
    """Tolerances, output grid and step policy of one integration."""

    model_config = ConfigDict(frozen=True)

    rtol: float = Field(default_factory=lambda: CurrentConfig.DEFAULT_RTOL, gt=0.0)
    atol: float = Field(default_factory=lambda: CurrentConfig.DEFAULT_ATOL, gt=0.0)
    sample_step: float = Field(..., gt=0.0, description="Output sampling interval, s.")
    t_final: float = Field(..., gt=0.0, description="End time, s.")
    t0: float = 0.0
    max_step: Optional[float] = Field(None, gt=0.0, description="Internal step cap; fixed mode defaults it to sample_step.")
    method: Literal["adaptive", "fixed"] = "adaptive"
    max_steps: int = Field(default_factory=lambda: CurrentConfig.MAX_STEPS, gt=0)

    @model_validator(mode="after")
    def check_grid(self):
        span = self.t_final - self.t0
        if span <= 0:
            raise ValueError("t_final must exceed t0")
        n = round(span / self.sample_step)
        if n < 1 or abs(n * self.sample_step - span) > 1e-9 * max(1.0, span):
            raise ValueError("t_final - t0 must be a whole number of sample steps")
        return self

    @property
    def n_samples(self) -> int:
        """Number of grid points, both ends included."""
        return round((self.t_final - self.t0) / self.sample_step) + 1

    def grid(self) -> np.ndarray:
        times = self.t0 + self.sample_step * np.arange(self.n_samples, dtype=float)
        times[-1] = self.t_final
        return times

# metrics/norms.py
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from core.exceptions import EmptySeries

SCALE_FLOOR = 1e-12


class SeriesNorm(BaseModel):
    """Max-abs and RMS of a series, plain and divided by a reference magnitude."""

    max_abs: float = Field(..., ge=0.0)
    rms: float = Field(..., ge=0.0)
    relative_max_abs: float = Field(..., ge=0.0)
    relative_rms: float = Field(..., ge=0.0)
    scale: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def check_order(self):
        # rms can exceed max_abs by roundoff only
        if self.rms > self.max_abs * (1 + 1e-12):
            raise ValueError("rms cannot exceed max_abs")
        return self


def series_norm(series: Sequence[float] | np.ndarray, *, reference: Optional[float] = None) -> SeriesNorm:
    """
    Norms of a sampled series. The relative variants divide by |reference| (default: the
    first sample), or by 1 when that magnitude is below 1e-12.
    """
    values = np.asarray(series, dtype=float).reshape(-1)
    if values.size == 0:
        raise EmptySeries("cannot take the norm of an empty series")
    scale = abs(float(values[0] if reference is None else reference))
    if scale < SCALE_FLOOR:
        scale = 1.0
    max_abs = float(np.max(np.abs(values)))
    rms = min(float(np.sqrt(np.mean(values ** 2))), max_abs)
    return SeriesNorm(
        max_abs=max_abs,
        rms=rms,
        relative_max_abs=max_abs / scale,
        relative_rms=rms / scale,
        scale=scale,
    )

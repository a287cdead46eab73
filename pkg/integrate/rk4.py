# integrate/rk4.py
import math
from typing import Callable, Optional

import numpy as np

from core.logger import log_debug
from integrate.settings import IntegratorSettings
from integrate.trajectory import Observer, Trajectory

Rhs = Callable[[float, np.ndarray], np.ndarray]


def step_rk4(rhs: Rhs, t: float, z: np.ndarray, h: float) -> np.ndarray:
    """Classical four-stage Runge-Kutta step."""
    k1 = rhs(t, z)
    k2 = rhs(t + 0.5 * h, z + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, z + 0.5 * h * k2)
    k4 = rhs(t + h, z + h * k3)
    return z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_fixed(
    rhs: Rhs,
    z0: np.ndarray,
    settings: IntegratorSettings,
    *,
    observe: Optional[Observer] = None,
) -> Trajectory:
    """RK4 with a whole number of equal substeps per sample interval."""
    times = settings.grid()
    max_step = settings.max_step or settings.sample_step
    substeps = max(1, math.ceil(settings.sample_step / max_step - 1e-12))
    states = np.empty((times.size, np.size(z0)))
    states[0] = z = np.asarray(z0, dtype=float)
    for k in range(1, times.size):
        t = times[k - 1]
        h = (times[k] - t) / substeps
        for j in range(substeps):
            z = step_rk4(rhs, t + j * h, z, h)
        states[k] = z
    log_debug("Fixed-step integration finished.", samples=times.size, substeps=substeps)
    return Trajectory.build(
        times,
        states,
        observe,
        accepted_steps=(times.size - 1) * substeps,
        rhs_evaluations=4 * (times.size - 1) * substeps,
    )

# integrate/dopri.py
"""
Dormand-Prince 5(4) with FSAL, PI step-size control and the pair's own quartic
continuous extension for sampling onto the output grid.
"""
from typing import Callable, Optional

import numpy as np

from core.exceptions import StepSizeUnderflow
from core.logger import log_debug
from integrate.settings import IntegratorSettings
from integrate.trajectory import Observer, Trajectory

Rhs = Callable[[float, np.ndarray], np.ndarray]

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# fifth-order minus embedded fourth-order weights
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension, columns multiply sigma, sigma^2, sigma^3, sigma^4
P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
ALPHA = 0.17  # 1/5 - 0.75 * BETA
BETA = 0.04
EPS = np.finfo(float).eps


def dopri_step(rhs: Rhs, t: float, z: np.ndarray, h: float, f0: Optional[np.ndarray] = None):
    """
    One embedded step.
    Returns (z_new, error_estimate, K) where K holds the seven stage slopes; K[6] is
    the slope at the new point.
    """
    K = np.empty((7, z.size))
    K[0] = rhs(t, z) if f0 is None else f0
    for i in range(1, 6):
        K[i] = rhs(t + C[i] * h, z + h * (A[i] @ K[:i]))
    z_new = z + h * (B[:6] @ K[:6])
    K[6] = rhs(t + h, z_new)
    return z_new, h * (E @ K), K


def dense_value(z: np.ndarray, K: np.ndarray, h: float, sigma: float) -> np.ndarray:
    """Quartic interpolant at t + sigma h inside an accepted step."""
    powers = np.cumprod(np.full(4, sigma))
    return z + h * ((K.T @ P) @ powers)


def error_norm(err: np.ndarray, z: np.ndarray, z_new: np.ndarray, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(z), np.abs(z_new))
    return float(np.max(np.abs(err) / scale, initial=0.0))


def initial_step(rhs: Rhs, t0: float, z0: np.ndarray, f0: np.ndarray, rtol: float, atol: float) -> float:
    """Starting step from the size of the solution and its first two derivatives."""
    scale = atol + rtol * np.abs(z0)
    d0 = float(np.sqrt(np.mean((z0 / scale) ** 2))) if z0.size else 0.0
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2))) if z0.size else 0.0
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = rhs(t0 + h0, z0 + h0 * f0)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0 if z0.size else 0.0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def integrate_adaptive(
    rhs: Rhs,
    z0: np.ndarray,
    settings: IntegratorSettings,
    *,
    observe: Optional[Observer] = None,
    velocity: Optional[Rhs] = None,
) -> Trajectory:
    """
    Adaptive integration sampled onto settings.grid().

    When `velocity` maps a state to the generalized velocities it encodes, the embedded
    error is also measured on those velocities and the larger of the two norms decides.
    """
    times = settings.grid()
    t_end = settings.t_final
    max_step = settings.max_step or np.inf
    rtol, atol = settings.rtol, settings.atol

    z = np.asarray(z0, dtype=float).copy()
    t = settings.t0
    f = rhs(t, z)
    n_eval = 1
    v = velocity(t, z) if velocity is not None else None
    h = min(initial_step(rhs, t, z, f, rtol, atol), max_step)
    n_eval += 1

    states = np.empty((times.size, z.size))
    states[0] = z
    k = 1
    accepted = rejected = 0
    prev_err = 1e-4
    last_rejected = False

    while t < t_end:
        if accepted + rejected >= settings.max_steps:
            raise StepSizeUnderflow("step budget exhausted", context={"t": t, "max_steps": settings.max_steps})
        h = min(h, max_step)
        # a remainder below the step floor is absorbed into this step
        last = t + h >= t_end - 16 * EPS * max(abs(t_end), 1.0)
        if last:
            h = t_end - t
        if h < 16 * EPS * max(abs(t), 1e-300):
            raise StepSizeUnderflow("step size fell below the representable minimum", context={"t": t, "h": h})

        z_new, err_vec, K = dopri_step(rhs, t, z, h, f)
        n_eval += 6
        err = error_norm(err_vec, z, z_new, rtol, atol)
        if not np.isfinite(err):
            err = np.inf
        t_new = t_end if last else t + h
        if velocity is not None and err <= 1.0:
            v_new = velocity(t_new, z_new)
            v_err = error_norm(v_new - velocity(t_new, z_new - err_vec), v, v_new, rtol, atol)
            err = max(err, v_err) if np.isfinite(v_err) else np.inf

        if err <= 1.0:
            while k < times.size and times[k] <= t_new:
                sigma = (times[k] - t) / h
                states[k] = z_new if sigma >= 1.0 else dense_value(z, K, h, sigma)
                k += 1
            t, z, f = t_new, z_new, K[6]
            if velocity is not None:
                v = v_new
            accepted += 1
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * err ** -ALPHA * prev_err ** BETA
                factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
            if last_rejected:
                factor = min(1.0, factor)
            prev_err = max(err, 1e-4)
            last_rejected = False
        else:
            rejected += 1
            factor = MIN_FACTOR if not np.isfinite(err) else max(MIN_FACTOR, SAFETY * err ** -0.2)
            last_rejected = True
        h *= factor

    log_debug("Adaptive integration finished.", accepted=accepted, rejected=rejected, rhs_evaluations=n_eval)
    return Trajectory.build(
        times,
        states,
        observe,
        accepted_steps=accepted,
        rejected_steps=rejected,
        rhs_evaluations=n_eval,
    )

# model/numdiff.py
"""
Finite-difference policy shared by every numerically differentiated term.

Central differences with step h = cbrt(eps) * max(1, |x|) and one Richardson level
(evaluations at offsets h and h/2), giving O(h^4) truncation error on smooth maps.
"""
from typing import Callable

import numpy as np

from core.exceptions import NonFiniteEvaluation

BASE_STEP = float(np.cbrt(np.finfo(float).eps))


def _checked(value, where: str, **context) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEvaluation(f"non-finite value in {where}", context=context)
    return arr


def _richardson(at: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    coarse = (at(h) - at(-h)) / (2.0 * h)
    fine = (at(0.5 * h) - at(-0.5 * h)) / h
    return (4.0 * fine - coarse) / 3.0


def matrix_function_partials(
    f: Callable[[float, np.ndarray], np.ndarray],
    t: float,
    q: np.ndarray,
    *,
    step_scale: float = 1.0,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """
    Partial derivatives of a matrix-valued map f(t, q).

    Returns (df/dt, [df/dq_0, ..., df/dq_{m-1}]), each shaped like f(t, q).
    """
    q = np.asarray(q, dtype=float)

    def at_time(d: float) -> np.ndarray:
        return _checked(f(t + d, q), "time shift", t=t + d)

    d_t = _richardson(at_time, BASE_STEP * max(1.0, abs(t)) * step_scale)
    return d_t, _coordinate_partials(f, t, q, step_scale)


def _coordinate_partials(f, t: float, q: np.ndarray, step_scale: float) -> list[np.ndarray]:
    d_q = []
    for j in range(q.size):
        def at_coordinate(d: float, j: int = j) -> np.ndarray:
            shifted = q.copy()
            shifted[j] += d
            return _checked(f(t, shifted), "coordinate shift", t=t, coordinate=j)

        d_q.append(_richardson(at_coordinate, BASE_STEP * max(1.0, abs(q[j])) * step_scale))
    return d_q


def gradient(
    f: Callable[[float, np.ndarray], float],
    t: float,
    q: np.ndarray,
    *,
    step_scale: float = 1.0,
) -> np.ndarray:
    """Gradient of a scalar map with respect to q."""
    d_q = _coordinate_partials(f, t, np.asarray(q, dtype=float), step_scale)
    return np.array([float(d) for d in d_q])


def total_derivative(
    f: Callable[[float, np.ndarray], np.ndarray],
    t: float,
    q: np.ndarray,
    qdot: np.ndarray,
    *,
    step_scale: float = 1.0,
) -> np.ndarray:
    """
    Rate of f along the motion: df/dt + sum_j (df/dq_j) qdot_j.

    Taken along the single direction (1, qdot) in (t, q) space. The step is the largest
    one that keeps the time shift and every coordinate shift within the per-coordinate
    step of matrix_function_partials.
    """
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    rates = np.abs(qdot) / np.maximum(1.0, np.abs(q))
    pace = max(1.0 / max(1.0, abs(t)), float(np.max(rates, initial=0.0)))
    h = BASE_STEP * step_scale / pace

    def along(d: float) -> np.ndarray:
        return _checked(f(t + d, q + d * qdot), "trajectory shift", t=t + d)

    return _richardson(along, h)

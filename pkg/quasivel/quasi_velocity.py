# quasivel/quasi_velocity.py
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions import ModelError, NonFiniteEvaluation
from model.system import StateMap


@dataclass(frozen=True, eq=False)
class QuasiVelocityDef:
    """Quasi-velocities u = Y(t, q) qd + Z(t, q); one label per row."""

    labels: tuple[str, ...]
    jac: StateMap
    bias: Optional[StateMap] = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def matrices(self, t: float, q: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        if n == 0:
            return np.zeros((0, m)), np.zeros(0)
        Y = np.asarray(self.jac(t, q), dtype=float).reshape(n, m)
        Z = np.zeros(n) if self.bias is None else np.asarray(self.bias(t, q), dtype=float).reshape(n)
        if not (np.all(np.isfinite(Y)) and np.all(np.isfinite(Z))):
            raise NonFiniteEvaluation("quasi-velocity map returned non-finite entries", context={"t": t})
        return Y, Z

    def evaluate(self, t: float, q: np.ndarray, qdot: np.ndarray) -> np.ndarray:
        qdot = np.asarray(qdot, dtype=float)
        Y, Z = self.matrices(t, np.asarray(q, dtype=float), qdot.size)
        return Y @ qdot + Z


def constant_quasi_velocities(labels: tuple[str, ...], Y: np.ndarray) -> QuasiVelocityDef:
    """Quasi-velocities that are a fixed linear combination of the generalized velocities."""
    Y = np.array(Y, dtype=float, ndmin=2)
    if Y.shape[0] != len(labels):
        raise ModelError("one label per quasi-velocity row required", context={"rows": Y.shape[0]})
    Y.setflags(write=False)
    return QuasiVelocityDef(labels=labels, jac=lambda t, q: Y)

# model/mechanics.py
"""
Evaluation of a MultibodySystem at a state: body velocity maps, the kinetic-energy
decomposition T = 1/2 qd'M qd + qd'N + T0, applied forces, constraints and momentum.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import ModelError, NonFiniteEvaluation, SingularMass
from model.numdiff import gradient
from model.system import BodyKinematics, MultibodySystem


@dataclass(frozen=True, eq=False)
class BodyMaps:
    """B, C (inertial frame) and D, E (body frame) of one body at (t, q)."""

    body: BodyKinematics
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray


@dataclass(frozen=True, eq=False)
class MassDecomposition:
    M: np.ndarray
    N: np.ndarray
    T0: float

    def kinetic_energy(self, qdot: np.ndarray) -> float:
        return float(0.5 * qdot @ self.M @ qdot + qdot @ self.N + self.T0)

    def momentum(self, qdot: np.ndarray) -> np.ndarray:
        """Generalized momentum dT/dqd = M qd + N."""
        return self.M @ qdot + self.N


def _finite(value, shape: tuple, what: str, **context) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != shape:
        if arr.size != int(np.prod(shape)):
            raise ModelError(f"{what} has shape {arr.shape}, expected {shape}", context=context)
        arr = arr.reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEvaluation(f"{what} returned non-finite entries", context=context)
    return arr


def evaluate_bodies(sys: MultibodySystem, t: float, q: np.ndarray) -> list[BodyMaps]:
    m = sys.m
    maps = []
    for body in sys.bodies:
        ctx = {"body": body.name, "t": t}
        maps.append(
            BodyMaps(
                body=body,
                B=_finite(body.lin_jac(t, q), (3, m), "linear jacobian", **ctx),
                C=_finite(body.lin_bias(t, q), (3,), "linear bias", **ctx),
                D=_finite(body.ang_jac(t, q), (3, m), "angular jacobian", **ctx),
                E=_finite(body.ang_bias(t, q), (3,), "angular bias", **ctx),
            )
        )
    return maps


def decomposition_from_maps(maps: list[BodyMaps], m: int, *, check: bool = True) -> MassDecomposition:
    M = np.zeros((m, m))
    N = np.zeros(m)
    T0 = 0.0
    for bm in maps:
        mass, inertia = bm.body.mass, bm.body.inertia
        IE = inertia @ bm.E
        M += mass * (bm.B.T @ bm.B) + bm.D.T @ inertia @ bm.D
        N += mass * (bm.B.T @ bm.C) + bm.D.T @ IE
        T0 += 0.5 * mass * float(bm.C @ bm.C) + 0.5 * float(bm.E @ IE)
    M = 0.5 * (M + M.T)
    if check:
        try:
            np.linalg.cholesky(M)
        except np.linalg.LinAlgError as e:
            raise SingularMass("mass matrix is not positive definite", context={"m": m}) from e
    return MassDecomposition(M=M, N=N, T0=T0)


def derive_mass_decomposition(sys: MultibodySystem, t: float, q: np.ndarray, *, check: bool = True) -> MassDecomposition:
    """Assemble M, N, T0 from the body maps; raises SingularMass if M is not positive definite."""
    q = np.asarray(q, dtype=float)
    return decomposition_from_maps(evaluate_bodies(sys, t, q), sys.m, check=check)


def body_velocities(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """(V_G inertial, omega body-frame) per body."""
    return [(bm.B @ qdot + bm.C, bm.D @ qdot + bm.E) for bm in evaluate_bodies(sys, t, np.asarray(q, dtype=float))]


def kinetic_energy(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> float:
    """Direct sum over bodies of 1/2 m V.V + 1/2 w.I w."""
    total = 0.0
    for body, (v, w) in zip(sys.bodies, body_velocities(sys, t, q, qdot)):
        total += 0.5 * body.mass * float(v @ v) + 0.5 * float(w @ body.inertia @ w)
    return total


def potential_energy(sys: MultibodySystem, t: float, q: np.ndarray) -> float:
    if sys.forces.potential is None:
        return 0.0
    value = float(sys.forces.potential(t, np.asarray(q, dtype=float)))
    if not np.isfinite(value):
        raise NonFiniteEvaluation("potential returned a non-finite value", context={"t": t})
    return value


def potential_gradient(sys: MultibodySystem, t: float, q: np.ndarray) -> np.ndarray:
    if sys.forces.potential is None:
        return np.zeros(sys.m)
    return gradient(sys.forces.potential, t, np.asarray(q, dtype=float))


def lagrangian(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> float:
    return kinetic_energy(sys, t, q, qdot) - potential_energy(sys, t, q)


def nonconservative_forces(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> np.ndarray:
    if sys.forces.nc_forces is None:
        return np.zeros(sys.m)
    return _finite(sys.forces.nc_forces(t, q, qdot), (sys.m,), "non-conservative force map", t=t)


def generalized_forces(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> np.ndarray:
    """Q = Q_nc - dV/dq."""
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    return nonconservative_forces(sys, t, q, qdot) - potential_gradient(sys, t, q)


def work_rate(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> float:
    """Power of the non-conservative forces, Q_nc . qd."""
    if sys.forces.nc_forces is None:
        return 0.0
    return float(nonconservative_forces(sys, t, q, qdot) @ qdot)


def constraint_matrices(sys: MultibodySystem, t: float, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(a, b) of a qd + b = 0; empty blocks when r = 0."""
    r, m = sys.constraint.r, sys.m
    if r == 0:
        return np.zeros((0, m)), np.zeros(0)
    q = np.asarray(q, dtype=float)
    a = _finite(sys.constraint.jac(t, q), (r, m), "constraint jacobian", t=t)
    if sys.constraint.bias is None:
        return a, np.zeros(r)
    return a, _finite(sys.constraint.bias(t, q), (r,), "constraint bias", t=t)


def kinematic_constraint_eval(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> np.ndarray:
    a, b = constraint_matrices(sys, t, q)
    return a @ np.asarray(qdot, dtype=float) + b


def linear_momentum(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> np.ndarray:
    """Total linear momentum in the inertial frame."""
    total = np.zeros(3)
    for body, (v, _) in zip(sys.bodies, body_velocities(sys, t, q, qdot)):
        total += body.mass * v
    return total

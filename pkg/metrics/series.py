# metrics/series.py
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from core.exceptions import MetricsError
from ignorable.dynamical_constraint import DynamicalConstraint, dynamical_constraint_eval
from integrate.trajectory import Trajectory
from model.mechanics import kinematic_constraint_eval, kinetic_energy, linear_momentum, potential_energy
from model.system import MultibodySystem

AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


@dataclass(frozen=True, eq=False)
class EnergySeries:
    energy: np.ndarray
    drift: np.ndarray
    percent: Optional[np.ndarray]

    @property
    def initial(self) -> float:
        return float(self.energy[0])


@dataclass(frozen=True, eq=False)
class ConservationSeries:
    kinematic: np.ndarray
    dynamical: np.ndarray
    momentum: np.ndarray
    momentum_drift: np.ndarray


def _require_observed(traj: Trajectory):
    if traj.qdots.shape[0] != len(traj):
        raise MetricsError("trajectory carries no generalized velocities", context={"samples": len(traj)})


def energy_error_series(sys: MultibodySystem, traj: Trajectory) -> EnergySeries:
    """e = T + V - work, drift against the first sample."""
    _require_observed(traj)
    energy = np.array([
        kinetic_energy(sys, t, q, qd) + potential_energy(sys, t, q) - w
        for t, q, qd, w in zip(traj.times, traj.qs, traj.qdots, traj.work)
    ])
    drift = energy - energy[0]
    percent = 100.0 * drift / abs(energy[0]) if abs(energy[0]) > 1e-12 else None
    return EnergySeries(energy=energy, drift=drift, percent=percent)


def unit_direction(direction: Sequence[float] | str) -> np.ndarray:
    if isinstance(direction, str):
        try:
            direction = AXES[direction.lower()]
        except KeyError:
            raise MetricsError(f"unknown axis '{direction}'", context={"axes": list(AXES)}) from None
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or abs(np.linalg.norm(d) - 1.0) > 1e-12:
        raise MetricsError("momentum direction must be a unit 3-vector", context={"direction": d.tolist()})
    return d


def momentum_series(sys: MultibodySystem, traj: Trajectory) -> np.ndarray:
    """Total linear momentum per sample, shape (N, 3)."""
    _require_observed(traj)
    return np.array([linear_momentum(sys, t, q, qd) for t, q, qd in zip(traj.times, traj.qs, traj.qdots)])


def conservation_error_series(
    sys: MultibodySystem,
    dc: Optional[DynamicalConstraint],
    traj: Trajectory,
    direction: Sequence[float] | str = "x",
) -> ConservationSeries:
    """Per sample: |a qd + b|, |M' qd + N'| and momentum along `direction` with its drift."""
    d = unit_direction(direction)
    _require_observed(traj)
    kin = np.array([
        np.linalg.norm(kinematic_constraint_eval(sys, t, q, qd))
        for t, q, qd in zip(traj.times, traj.qs, traj.qdots)
    ])
    if dc is None:
        dyn = np.zeros(len(traj))
    else:
        dyn = np.array([
            np.linalg.norm(dynamical_constraint_eval(dc, t, q, qd))
            for t, q, qd in zip(traj.times, traj.qs, traj.qdots)
        ])
    momentum = momentum_series(sys, traj) @ d
    return ConservationSeries(kinematic=kin, dynamical=dyn, momentum=momentum, momentum_drift=momentum - momentum[0])

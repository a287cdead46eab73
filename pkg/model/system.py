# model/system.py
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from core.exceptions import ModelError

# (t, q) -> array
StateMap = Callable[[float, np.ndarray], np.ndarray]
# (t, q) -> scalar
ScalarMap = Callable[[float, np.ndarray], float]
# (t, q, qdot) -> m-vector
ForceMap = Callable[[float, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CoordinateLayout:
    """
    Partition of the generalized coordinates.
    Ignorable coordinates occupy the last `s` positions of q.
    """

    m: int
    s: int
    r: int
    names: tuple[str, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ModelError("layout needs at least one coordinate", context={"m": self.m})
        if len(self.names) != self.m:
            raise ModelError(
                "one name per coordinate required",
                context={"m": self.m, "names": len(self.names)},
            )
        if self.r < 0 or self.r > self.m:
            raise ModelError("constraint count out of range", context={"m": self.m, "r": self.r})
        if not 0 <= self.s <= self.p:
            raise ModelError(
                "ignorable count must satisfy 0 <= s <= p",
                context={"s": self.s, "p": self.p},
            )

    @property
    def p(self) -> int:
        """Degrees of freedom."""
        return self.m - self.r

    @property
    def n_reduced(self) -> int:
        """Number of non-ignorable quasi-velocities, p - s."""
        return self.p - self.s

    @property
    def ignorable(self) -> slice:
        return slice(self.m - self.s, self.m)

    @property
    def ignorable_names(self) -> tuple[str, ...]:
        return self.names[self.ignorable]


def _zero_vector(n: int) -> StateMap:
    def bias(t: float, q: np.ndarray) -> np.ndarray:
        return np.zeros(n)
    return bias


@dataclass(frozen=True, eq=False)
class BodyKinematics:
    """
    Rigid body described by its velocity maps.

    Linear maps (lin_jac -> B, lin_bias -> C) give the centre-of-mass velocity in the
    inertial frame. Angular maps (ang_jac -> D, ang_bias -> E) and the centroidal inertia
    are expressed in the body frame.
    """

    name: str
    mass: float
    inertia: np.ndarray
    lin_jac: StateMap
    ang_jac: StateMap
    lin_bias: StateMap = field(default_factory=lambda: _zero_vector(3))
    ang_bias: StateMap = field(default_factory=lambda: _zero_vector(3))

    def __post_init__(self):
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.shape != (3, 3):
            raise ModelError("inertia must be 3x3", context={"body": self.name})
        if not self.mass > 0:
            raise ModelError("body mass must be positive", context={"body": self.name, "mass": self.mass})
        if not np.allclose(inertia, inertia.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(inertia).max())):
            raise ModelError("inertia must be symmetric", context={"body": self.name})
        try:
            np.linalg.cholesky(inertia)
        except np.linalg.LinAlgError as e:
            raise ModelError("inertia must be positive definite", context={"body": self.name}) from e
        object.__setattr__(self, "inertia", inertia)


@dataclass(frozen=True)
class ForceModel:
    """
    Applied loads.
    Conservative effects live only in `potential`; `nc_forces` holds non-conservative and
    actuator forces already expressed in generalized-velocity space.
    """

    potential: Optional[ScalarMap] = None
    nc_forces: Optional[ForceMap] = None

    @property
    def tracks_work(self) -> bool:
        """Systems with non-conservative forces carry an accumulated-work state."""
        return self.nc_forces is not None


@dataclass(frozen=True)
class KinematicConstraint:
    """Velocity-level constraints a(t, q) qdot + b(t, q) = 0."""

    r: int
    jac: Optional[StateMap] = None
    bias: Optional[StateMap] = None

    def __post_init__(self):
        if self.r > 0 and self.jac is None:
            raise ModelError("constraint jacobian required when r > 0", context={"r": self.r})

    @classmethod
    def none(cls) -> "KinematicConstraint":
        return cls(r=0)


@dataclass(frozen=True, eq=False)
class MultibodySystem:
    """Immutable system description; every provider is a pure function of its arguments."""

    name: str
    layout: CoordinateLayout
    bodies: tuple[BodyKinematics, ...]
    forces: ForceModel = field(default_factory=ForceModel)
    constraint: KinematicConstraint = field(default_factory=KinematicConstraint.none)

    def __post_init__(self):
        if not self.bodies:
            raise ModelError("system needs at least one body", context={"system": self.name})
        object.__setattr__(self, "bodies", tuple(self.bodies))
        if self.constraint.r != self.layout.r:
            raise ModelError(
                "constraint rows disagree with layout",
                context={"system": self.name, "layout_r": self.layout.r, "constraint_r": self.constraint.r},
            )

    @property
    def m(self) -> int:
        return self.layout.m

    def with_constraint(self, constraint: KinematicConstraint) -> "MultibodySystem":
        """Copy of the system with a replacement constraint (same row count)."""
        return MultibodySystem(
            name=self.name,
            layout=self.layout,
            bodies=self.bodies,
            forces=self.forces,
            constraint=constraint,
        )


def make_layout(names: Sequence[str], *, s: int = 0, r: int = 0) -> CoordinateLayout:
    return CoordinateLayout(m=len(names), s=s, r=r, names=tuple(names))

# ignorable/dynamical_constraint.py
from dataclasses import dataclass

import numpy as np

from core.exceptions import NoIgnorableCoordinates
from model.mechanics import MassDecomposition, derive_mass_decomposition
from model.system import MultibodySystem


@dataclass(frozen=True, eq=False)
class DynamicalConstraint:
    """
    Conservation of the ignorable momenta written as a velocity constraint:
    M' qd + N' = 0 with M' = last s rows of M and N' = N_I - G_I.
    G_I is frozen at the initial state.
    """

    system: MultibodySystem
    G_I: np.ndarray

    @property
    def s(self) -> int:
        return self.system.layout.s

    def blocks(self, dec: MassDecomposition) -> tuple[np.ndarray, np.ndarray]:
        """(M', N') from an already assembled decomposition."""
        rows = self.system.layout.ignorable
        return dec.M[rows, :], dec.N[rows] - self.G_I

    def row_jac(self, t: float, q: np.ndarray) -> np.ndarray:
        return self.blocks(derive_mass_decomposition(self.system, t, q))[0]

    def bias(self, t: float, q: np.ndarray) -> np.ndarray:
        return self.blocks(derive_mass_decomposition(self.system, t, q))[1]


def initial_generalized_momentum(sys: MultibodySystem, t0: float, q0: np.ndarray, qdot0: np.ndarray) -> np.ndarray:
    """G_I = M_21 qd_NI + M_22 qd_I + N_2 at the initial state."""
    if sys.layout.s == 0:
        raise NoIgnorableCoordinates(
            "system declares no ignorable coordinates",
            context={"system": sys.name},
        )
    dec = derive_mass_decomposition(sys, t0, q0)
    return dec.momentum(np.asarray(qdot0, dtype=float))[sys.layout.ignorable].copy()


def build_dynamical_constraint(sys: MultibodySystem, t0: float, q0: np.ndarray, qdot0: np.ndarray) -> DynamicalConstraint:
    return DynamicalConstraint(system=sys, G_I=initial_generalized_momentum(sys, t0, q0, qdot0))


def dynamical_constraint_eval(dc: DynamicalConstraint, t: float, q: np.ndarray, qdot: np.ndarray) -> np.ndarray:
    """Residual M'(t, q) qd + N_I(t, q) - G_I."""
    Mp, Np = dc.blocks(derive_mass_decomposition(dc.system, t, q))
    return Mp @ np.asarray(qdot, dtype=float) + Np

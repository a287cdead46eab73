# quasivel/reduced_map.py
"""
Map from non-ignorable quasi-velocities to generalized velocities, qd = W u + X,
obtained by stacking the quasi-velocity definition with the dynamical and kinematic
constraints:

    [Y; M'; a] W = [I; 0; 0]        [Y; M'; a] X = -[Z; N'; b]

Without a dynamical constraint the same solve gives the standard map.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions import FormulationError, SingularAugmentedMatrix
from ignorable.dynamical_constraint import DynamicalConstraint
from model.linalg import factorize
from model.mechanics import MassDecomposition, constraint_matrices, derive_mass_decomposition
from model.system import MultibodySystem
from quasivel.quasi_velocity import QuasiVelocityDef


@dataclass(frozen=True, eq=False)
class ReducedMap:
    W: np.ndarray
    X: np.ndarray
    condition_number: float
    A: np.ndarray
    rhs_bias: np.ndarray

    @property
    def rank_rows(self) -> int:
        return self.A.shape[0]

    def residuals(self) -> tuple[float, float]:
        """Max-abs violation of the two block identities."""
        n = self.W.shape[1]
        target = np.zeros((self.rank_rows, n))
        target[:n, :n] = np.eye(n)
        w_res = float(np.max(np.abs(self.A @ self.W - target), initial=0.0))
        x_res = float(np.max(np.abs(self.A @ self.X + self.rhs_bias), initial=0.0))
        return w_res, x_res


def solve_augmented(
    Y: np.ndarray,
    Z: np.ndarray,
    Mp: np.ndarray,
    Np: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    *,
    estimate: bool = True,
    **context,
) -> ReducedMap:
    A = np.vstack([Y, Mp, a])
    c = np.concatenate([Z, Np, b])
    m = A.shape[1]
    if A.shape[0] != m:
        raise FormulationError(
            "augmented matrix is not square; quasi-velocity count must be p - s",
            context={**context, "rows": A.shape[0], "m": m},
        )
    factor = factorize(
        A, error=SingularAugmentedMatrix, what="augmented matrix [Y; M'; a]", estimate=estimate, **context
    )
    n = Y.shape[0]
    # one solve for [W | X]
    rhs = np.zeros((m, n + 1))
    rhs[:n, :n] = np.eye(n)
    rhs[:, n] = -c
    sol = factor.solve(rhs)
    W, X = sol[:, :n], sol[:, n]
    return ReducedMap(W=W, X=X, condition_number=factor.condition, A=A, rhs_bias=c)


def build_reduced_map(
    sys: MultibodySystem,
    qv: QuasiVelocityDef,
    dc: Optional[DynamicalConstraint],
    t: float,
    q: np.ndarray,
    *,
    decomposition: Optional[MassDecomposition] = None,
) -> ReducedMap:
    """Reduced map at (t, q); dc=None gives the standard map over all p quasi-velocities."""
    q = np.asarray(q, dtype=float)
    m = sys.m
    Y, Z = qv.matrices(t, q, m)
    a, b = constraint_matrices(sys, t, q)
    if dc is None:
        Mp, Np = np.zeros((0, m)), np.zeros(0)
    else:
        dec = decomposition if decomposition is not None else derive_mass_decomposition(sys, t, q)
        Mp, Np = dc.blocks(dec)
    return solve_augmented(Y, Z, Mp, Np, a, b, system=sys.name, t=t)


def reconstruct_qdot(rmap: ReducedMap, u_NI: np.ndarray) -> np.ndarray:
    """qd = W u + X."""
    return rmap.W @ np.asarray(u_NI, dtype=float).reshape(-1) + rmap.X

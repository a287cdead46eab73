# formulations/terms.py
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ignorable.dynamical_constraint import DynamicalConstraint
from model.linalg import skew
from model.mechanics import (
    BodyMaps,
    MassDecomposition,
    constraint_matrices,
    decomposition_from_maps,
    derive_mass_decomposition,
    evaluate_bodies,
    generalized_forces,
)
from model.numdiff import total_derivative
from model.system import MultibodySystem
from quasivel.quasi_velocity import QuasiVelocityDef
from quasivel.reduced_map import ReducedMap, solve_augmented


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Everything the quasi-velocity engines need at one (t, q)."""

    maps: list[BodyMaps]
    dec: MassDecomposition
    rmap: ReducedMap


@dataclass(frozen=True, eq=False)
class ReducedTerms:
    M_NI: np.ndarray
    N_NI: np.ndarray
    T0_NI: float
    A_NI: np.ndarray
    K_NI: np.ndarray
    U_NI: np.ndarray
    L_NI: np.ndarray
    qdot: np.ndarray
    rmap: ReducedMap


def take_snapshot(
    sys: MultibodySystem,
    qv: QuasiVelocityDef,
    dc: Optional[DynamicalConstraint],
    t: float,
    q: np.ndarray,
    *,
    guarded: bool = True,
) -> Snapshot:
    """
    guarded=False skips the mass-matrix definiteness test and the condition estimate of
    the augmented matrix; finite-difference evaluations around a guarded point use it.
    """
    m = sys.m
    maps = evaluate_bodies(sys, t, q)
    dec = decomposition_from_maps(maps, m, check=guarded)
    Y, Z = qv.matrices(t, q, m)
    a, b = constraint_matrices(sys, t, q)
    if dc is None:
        Mp, Np = np.zeros((0, m)), np.zeros(0)
    else:
        Mp, Np = dc.blocks(dec)
    rmap = solve_augmented(Y, Z, Mp, Np, a, b, estimate=guarded, system=sys.name, t=t)
    return Snapshot(maps=maps, dec=dec, rmap=rmap)


def _moving(sys: MultibodySystem, qdot: np.ndarray) -> np.ndarray:
    """Direction for rates of the body maps: ignorable coordinates never enter them."""
    along = np.array(qdot, dtype=float)
    along[sys.layout.ignorable] = 0.0
    return along


def _momentum_and_partial_velocities(sys, qv, dc, u: np.ndarray):
    """
    (t, q) -> [W'(M(Wu + X) + N), vec(B_i W), vec(D_i W) for each body] with u frozen.
    Its rate along the motion yields A_NI and the partial-velocity rates at once.
    """
    def stacked(t: float, q: np.ndarray) -> np.ndarray:
        snap = take_snapshot(sys, qv, dc, t, q, guarded=False)
        W, X = snap.rmap.W, snap.rmap.X
        parts = [W.T @ (snap.dec.M @ (W @ u + X) + snap.dec.N)]
        for bm in snap.maps:
            parts.append((bm.B @ W).ravel())
            parts.append((bm.D @ W).ravel())
        return np.concatenate(parts)
    return stacked


def reduced_terms(
    sys: MultibodySystem,
    qv: QuasiVelocityDef,
    dc: Optional[DynamicalConstraint],
    t: float,
    q: np.ndarray,
    u_NI: np.ndarray,
) -> ReducedTerms:
    """
    Terms of M_NI u' = L_NI with L_NI = U_NI + K_NI - A_NI.

    Angular partial velocities D_i W are body-frame components, so their inertial rate
    includes the transport term skew(w_i) D_i W.
    """
    q = np.asarray(q, dtype=float)
    u = np.asarray(u_NI, dtype=float).reshape(-1)
    snap = take_snapshot(sys, qv, dc, t, q)
    M, N, T0 = snap.dec.M, snap.dec.N, snap.dec.T0
    W, X = snap.rmap.W, snap.rmap.X
    n = W.shape[1]
    qdot = W @ u + X

    M_NI = W.T @ M @ W
    M_NI = 0.5 * (M_NI + M_NI.T)
    N_NI = W.T @ (M @ X + N)
    T0_NI = float(0.5 * X @ M @ X + X @ N + T0)

    A_NI = np.zeros(n)
    K_NI = np.zeros(n)
    if n:
        rates = total_derivative(_momentum_and_partial_velocities(sys, qv, dc, u), t, q, _moving(sys, qdot))
        A_NI = rates[:n]
        offset = n
        for bm in snap.maps:
            BW_rate = rates[offset:offset + 3 * n].reshape(3, n)
            DW_rate = rates[offset + 3 * n:offset + 6 * n].reshape(3, n)
            offset += 6 * n
            v = bm.B @ qdot + bm.C
            w = bm.D @ qdot + bm.E
            C_NI = DW_rate + skew(w) @ (bm.D @ W)
            K_NI += bm.body.mass * (BW_rate.T @ v) + C_NI.T @ (bm.body.inertia @ w)

    U_NI = W.T @ generalized_forces(sys, t, q, qdot)
    return ReducedTerms(
        M_NI=M_NI,
        N_NI=N_NI,
        T0_NI=T0_NI,
        A_NI=A_NI,
        K_NI=K_NI,
        U_NI=U_NI,
        L_NI=U_NI + K_NI - A_NI,
        qdot=qdot,
        rmap=snap.rmap,
    )


def velocity_bias(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(Mdot qd + Ndot, adot qd + bdot) along the motion, qd held fixed."""
    m = sys.m

    def stacked(tt: float, qq: np.ndarray) -> np.ndarray:
        dec = derive_mass_decomposition(sys, tt, qq, check=False)
        a, b = constraint_matrices(sys, tt, qq)
        return np.concatenate([dec.M @ qdot + dec.N, a @ qdot + b])

    rates = total_derivative(stacked, t, q, _moving(sys, qdot))
    return rates[:m], rates[m:]

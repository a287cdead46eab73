# formulations/lagrange.py
import numpy as np

from core.base_formulation import BaseFormulation, StateView
from core.exceptions import SingularKKT
from model.linalg import factorize
from model.mechanics import (
    constraint_matrices,
    derive_mass_decomposition,
    kinematic_constraint_eval,
    lagrangian,
    nonconservative_forces,
    work_rate,
)
from model.numdiff import gradient
from model.system import MultibodySystem
from formulations.terms import velocity_bias


def applied_minus_bias(sys: MultibodySystem, t: float, q: np.ndarray, qdot: np.ndarray):
    """
    Right-hand sides shared by the multiplier and projection methods:
    Q - (Mdot qd + Ndot - dT/dq) and -(adot qd + bdot).
    """
    m_bias, a_bias = velocity_bias(sys, t, q, qdot)
    dL = gradient(lambda tt, qq: lagrangian(sys, tt, qq, qdot), t, q)
    return nonconservative_forces(sys, t, q, qdot) + dL - m_bias, -a_bias


def _with_work_rate(sys: MultibodySystem, t, q, qdot, qddot) -> np.ndarray:
    parts = [qdot, qddot]
    if sys.forces.tracks_work:
        parts.append([work_rate(sys, t, q, qdot)])
    return np.concatenate(parts)


def lagrange_rhs(sys: MultibodySystem, t: float, z: np.ndarray) -> np.ndarray:
    """
    z = [q; qd (; work)]. Solves [M a'; a 0][qdd; -lambda] = [f; -(adot qd + bdot)]
    with the constraint differentiated once (no stabilization).
    """
    m = sys.m
    q, qdot = z[:m], z[m:2 * m]
    dec = derive_mass_decomposition(sys, t, q)
    a, _ = constraint_matrices(sys, t, q)
    f, g = applied_minus_bias(sys, t, q, qdot)
    r = a.shape[0]
    kkt = np.block([[dec.M, a.T], [a, np.zeros((r, r))]])
    sol = factorize(kkt, error=SingularKKT, what="multiplier system", t=t).solve(np.concatenate([f, g]))
    return _with_work_rate(sys, t, q, qdot, sol[:m])


class LagrangeFormulation(BaseFormulation):
    name = "lagrange"
    description = "Lagrange equations with multipliers"

    @classmethod
    def base_card(cls, layout) -> tuple[int, int]:
        return 2 * layout.m, layout.m

    def initial_state(self, t0, q0, qdot0):
        q0 = np.asarray(q0, dtype=float)
        qdot0 = np.asarray(qdot0, dtype=float)
        self.check_consistency(kinematic_constraint_eval(self.system, t0, q0, qdot0), qdot0, "kinematic constraint")
        return self.with_work(np.concatenate([q0, qdot0]), 0.0)

    def rhs(self, t, z):
        return lagrange_rhs(self.system, t, z)

    def unpack(self, t, z) -> StateView:
        core, work = self.split_work(np.asarray(z, dtype=float))
        m = self.system.m
        return StateView(q=core[:m], qdot=core[m:2 * m], u=np.zeros(0), work=work)

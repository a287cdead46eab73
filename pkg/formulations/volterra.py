# formulations/volterra.py
from typing import Optional

import numpy as np

from core.base_formulation import BaseFormulation, StateView
from core.exceptions import FormulationError, SingularReducedMass
from core.logger import log_info
from ignorable.dynamical_constraint import DynamicalConstraint, build_dynamical_constraint
from model.linalg import factorize
from model.mechanics import kinematic_constraint_eval, work_rate
from model.system import MultibodySystem
from formulations.terms import reduced_terms, take_snapshot
from quasivel.quasi_velocity import QuasiVelocityDef
from quasivel.reduced_map import reconstruct_qdot


def _quasi_rhs(
    sys: MultibodySystem,
    qv: QuasiVelocityDef,
    dc: Optional[DynamicalConstraint],
    t: float,
    z: np.ndarray,
) -> np.ndarray:
    m, n = sys.m, qv.n
    q, u = z[:m], z[m:m + n]
    terms = reduced_terms(sys, qv, dc, t, q, u)
    if n:
        u_dot = factorize(terms.M_NI, error=SingularReducedMass, what="reduced mass matrix", t=t).solve(terms.L_NI)
    else:
        u_dot = np.zeros(0)
    parts = [terms.qdot, u_dot]
    if sys.forces.tracks_work:
        parts.append([work_rate(sys, t, q, terms.qdot)])
    return np.concatenate(parts)


def reduced_volterra_rhs(
    sys: MultibodySystem,
    qv: QuasiVelocityDef,
    dc: Optional[DynamicalConstraint],
    t: float,
    z: np.ndarray,
) -> np.ndarray:
    """z = [q; u_NI (; work)] -> [W u + X; M_NI^-1 L_NI (; Q_nc . qd)]."""
    if qv.n != sys.layout.n_reduced:
        raise FormulationError(
            "reduced formulation needs p - s quasi-velocities",
            context={"given": qv.n, "expected": sys.layout.n_reduced},
        )
    return _quasi_rhs(sys, qv, dc, t, z)


def standard_volterra_rhs(sys: MultibodySystem, qv_full: QuasiVelocityDef, t: float, z: np.ndarray) -> np.ndarray:
    """Same pipeline with no dynamical rows; z = [q; u (; work)] with p quasi-velocities."""
    if qv_full.n != sys.layout.p:
        raise FormulationError(
            "standard formulation needs p quasi-velocities",
            context={"given": qv_full.n, "expected": sys.layout.p},
        )
    return _quasi_rhs(sys, qv_full, None, t, z)


# ---- engines ----

class _QuasiVelocityFormulation(BaseFormulation):
    qv: QuasiVelocityDef
    dc: Optional[DynamicalConstraint] = None
    reconstructs_velocity = True

    def initial_state(self, t0: float, q0: np.ndarray, qdot0: np.ndarray) -> np.ndarray:
        q0 = np.asarray(q0, dtype=float)
        qdot0 = np.asarray(qdot0, dtype=float)
        self.check_consistency(kinematic_constraint_eval(self.system, t0, q0, qdot0), qdot0, "kinematic constraint")
        u0 = self.qv.evaluate(t0, q0, qdot0)
        return self.with_work(np.concatenate([q0, u0]), 0.0)

    def unpack(self, t: float, z: np.ndarray) -> StateView:
        core, work = self.split_work(np.asarray(z, dtype=float))
        m = self.system.m
        q, u = core[:m], core[m:]
        rmap = take_snapshot(self.system, self.qv, self.dc, t, q).rmap
        return StateView(q=q, qdot=reconstruct_qdot(rmap, u), u=u, work=work)

    def velocity(self, t: float, z: np.ndarray) -> np.ndarray:
        m, n = self.system.m, self.qv.n
        q, u = z[:m], z[m:m + n]
        return reconstruct_qdot(take_snapshot(self.system, self.qv, self.dc, t, q, guarded=False).rmap, u)


class ReducedVolterraFormulation(_QuasiVelocityFormulation):
    name = "volterra-reduced"
    description = "Volterra equations over the p - s non-ignorable quasi-velocities"

    def __init__(self, system: MultibodySystem, *, qv_full=None, qv_reduced=None):
        super().__init__(system, qv_full=qv_full, qv_reduced=qv_reduced)
        if qv_reduced is None:
            raise FormulationError("reduced formulation needs non-ignorable quasi-velocities", context={"system": system.name})
        self.qv = qv_reduced

    @classmethod
    def base_card(cls, layout) -> tuple[int, int]:
        return layout.m + layout.n_reduced, layout.n_reduced

    def initial_state(self, t0, q0, qdot0):
        if self.system.layout.s:
            # G_I frozen here for the whole run
            self.dc = build_dynamical_constraint(self.system, t0, q0, qdot0)
            log_info(f"[{self.name}] generalized momentum fixed", system=self.system.name, G_I=self.dc.G_I.tolist())
        return super().initial_state(t0, q0, qdot0)

    def rhs(self, t, z):
        if self.system.layout.s and self.dc is None:
            raise FormulationError("initial_state must run before rhs", context={"formulation": self.name})
        return reduced_volterra_rhs(self.system, self.qv, self.dc, t, z)


class StandardVolterraFormulation(_QuasiVelocityFormulation):
    name = "kane"
    description = "Volterra (Kane) equations over all p quasi-velocities"

    def __init__(self, system: MultibodySystem, *, qv_full=None, qv_reduced=None):
        super().__init__(system, qv_full=qv_full, qv_reduced=qv_reduced)
        if qv_full is None:
            raise FormulationError("standard formulation needs a full quasi-velocity set", context={"system": system.name})
        self.qv = qv_full

    @classmethod
    def base_card(cls, layout) -> tuple[int, int]:
        return layout.m + layout.p, layout.p

    def rhs(self, t, z):
        return standard_volterra_rhs(self.system, self.qv, t, z)

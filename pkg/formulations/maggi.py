# formulations/maggi.py
import numpy as np

from core.exceptions import FormulationError, SingularProjection
from model.linalg import factorize
from model.mechanics import constraint_matrices, derive_mass_decomposition
from model.system import MultibodySystem
from formulations.lagrange import LagrangeFormulation, _with_work_rate, applied_minus_bias
from quasivel.quasi_velocity import QuasiVelocityDef
from quasivel.reduced_map import build_reduced_map


def maggi_rhs(sys: MultibodySystem, qv_full: QuasiVelocityDef, t: float, z: np.ndarray) -> np.ndarray:
    """
    z = [q; qd (; work)]. Projects the dynamics onto the columns of the standard map W:
    [W'M; a] qdd = [W'f; -(adot qd + bdot)], multiplier-free.
    """
    m = sys.m
    q, qdot = z[:m], z[m:2 * m]
    W = build_reduced_map(sys, qv_full, None, t, q).W
    dec = derive_mass_decomposition(sys, t, q)
    a, _ = constraint_matrices(sys, t, q)
    f, g = applied_minus_bias(sys, t, q, qdot)
    lhs = np.vstack([W.T @ dec.M, a])
    qddot = factorize(lhs, error=SingularProjection, what="projected system", t=t).solve(np.concatenate([W.T @ f, g]))
    return _with_work_rate(sys, t, q, qdot, qddot)


class MaggiFormulation(LagrangeFormulation):
    name = "maggi"
    description = "Maggi equations (multiplier-free projection)"

    def __init__(self, system, *, qv_full=None, qv_reduced=None):
        super().__init__(system, qv_full=qv_full, qv_reduced=qv_reduced)
        if qv_full is None:
            raise FormulationError("Maggi projection needs a full quasi-velocity set", context={"system": system.name})

    def rhs(self, t, z):
        return maggi_rhs(self.system, self.qv_full, t, z)

# cases/boom_satellite.py
"""
Cubic satellite deploying a tip mass on a massless boom along body +x.
q = [psi, theta, phi, rho, X, Y, Z]; rho is the deployed boom length measured from
the face centre. An internal actuator pair pushes the tip along the boom.
"""
import numpy as np
from pydantic import BaseModel, Field

from cases.case_study import CaseStudy
from cases.loader import load_case_file, merge_parameters
from cases.rotations import body_rate_matrix, euler_zyx
from integrate.settings import IntegratorSettings
from model.linalg import skew
from model.system import BodyKinematics, ForceModel, MultibodySystem, make_layout
from quasivel.quasi_velocity import QuasiVelocityDef

CASE_ID = "satellite"
NAMES = ("psi", "theta", "phi", "rho", "X", "Y", "Z")
M = len(NAMES)
RHO = 3


class SatelliteParameters(BaseModel):
    body_mass: float = Field(..., gt=0.0)
    side: float = Field(..., gt=0.0)
    inertia: list[list[float]] = Field(..., min_length=3, max_length=3)
    tip_mass: float = Field(..., gt=0.0)
    tip_radius: float = Field(..., gt=0.0)
    force_sin_amplitude: float = -0.018
    force_sin_rate: float = 0.089
    force_cos_amplitude: float = 0.012
    force_cos_rate: float = 0.0485


def boom_force(p: SatelliteParameters, t: float) -> float:
    return p.force_sin_amplitude * np.sin(p.force_sin_rate * t) + p.force_cos_amplitude * np.cos(p.force_cos_rate * t)


def build_system(p: SatelliteParameters) -> MultibodySystem:
    face = 0.5 * p.side

    def main_B(t, q):
        B = np.zeros((3, M))
        B[:, 4:] = np.eye(3)
        return B

    def attitude_D(t, q):
        D = np.zeros((3, M))
        D[:, 0:3] = body_rate_matrix(q[1], q[2])
        return D

    def tip_B(t, q):
        R = euler_zyx(q[0], q[1], q[2])
        r = np.array([face + q[RHO], 0.0, 0.0])
        B = np.zeros((3, M))
        B[:, 0:3] = R @ (-skew(r) @ body_rate_matrix(q[1], q[2]))
        B[:, RHO] = R[:, 0]
        B[:, 4:] = np.eye(3)
        return B

    def nc_forces(t, q, qdot):
        Q = np.zeros(M)
        Q[RHO] = boom_force(p, t)
        return Q

    sphere = 0.4 * p.tip_mass * p.tip_radius ** 2 * np.eye(3)
    bodies = (
        BodyKinematics(name="main", mass=p.body_mass, inertia=np.array(p.inertia), lin_jac=main_B, ang_jac=attitude_D),
        BodyKinematics(name="tip", mass=p.tip_mass, inertia=sphere, lin_jac=tip_B, ang_jac=attitude_D),
    )
    return MultibodySystem(
        name=CASE_ID,
        layout=make_layout(NAMES, s=3, r=0),
        bodies=bodies,
        forces=ForceModel(nc_forces=nc_forces),
    )


def quasi_velocity_jacobian(t: float, q: np.ndarray) -> np.ndarray:
    """[w_body; rho_dot; X_dot; Y_dot; Z_dot] = Y qdot."""
    Y = np.eye(M)
    Y[0:3, 0:3] = body_rate_matrix(q[1], q[2])
    return Y


def build_boom_satellite(**overrides) -> CaseStudy:
    case = load_case_file(CASE_ID)
    params = merge_parameters(SatelliteParameters, case, overrides)
    labels = ("wx", "wy", "wz", "rho_dot", "X_dot", "Y_dot", "Z_dot")
    return CaseStudy(
        case_id=CASE_ID,
        title=case.title,
        system=build_system(params),
        qv_reduced=QuasiVelocityDef(labels=labels[:4], jac=lambda t, q: quasi_velocity_jacobian(t, q)[:4]),
        qv_full=QuasiVelocityDef(labels=labels, jac=quasi_velocity_jacobian),
        t0=case.initial.t0,
        q0=np.array(case.initial.q, dtype=float),
        qdot0=np.array(case.initial.qdot, dtype=float),
        settings=IntegratorSettings(t0=case.initial.t0, **case.settings.model_dump()),
        momentum_direction=tuple(case.momentum_direction),
        momentum_axes=tuple(case.momentum_axes),
    )

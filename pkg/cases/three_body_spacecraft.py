# cases/three_body_spacecraft.py
"""
Spacecraft with two hinged solar panels, free-floating and torque-free.
q = [psi, theta, phi, gamma1, gamma2, X, Y, Z]; (X, Y, Z) locate the main body's
centre of mass. Panels are hinged at +-a/2 on the body x axis about body y and
extend b outboard.
"""
import numpy as np
from pydantic import BaseModel, Field

from cases.case_study import CaseStudy
from cases.loader import load_case_file, merge_parameters
from cases.rotations import body_rate_matrix, euler_zyx, rot_y
from integrate.settings import IntegratorSettings
from model.linalg import skew
from model.system import BodyKinematics, ForceModel, MultibodySystem, make_layout
from quasivel.quasi_velocity import QuasiVelocityDef

CASE_ID = "tribody"
NAMES = ("psi", "theta", "phi", "gamma1", "gamma2", "X", "Y", "Z")
M = len(NAMES)


class TribodyParameters(BaseModel):
    body_mass: float = Field(..., gt=0.0)
    panel_mass: float = Field(..., gt=0.0)
    hinge_offset: float = Field(..., gt=0.0, description="a: distance between the two hinges.")
    panel_length: float = Field(..., gt=0.0, description="b: panel extent along the body x axis.")
    panel_width: float = Field(..., gt=0.0, description="c: panel extent along the hinge axis.")
    inertia: list[list[float]] = Field(..., min_length=3, max_length=3)


def _plate_inertia(mass: float, b: float, c: float) -> np.ndarray:
    return mass / 12.0 * np.diag([c * c, b * b, b * b + c * c])


def build_system(p: TribodyParameters) -> MultibodySystem:
    a, half_b = p.hinge_offset, 0.5 * p.panel_length

    def main_B(t, q):
        B = np.zeros((3, M))
        B[:, 5:] = np.eye(3)
        return B

    def main_D(t, q):
        D = np.zeros((3, M))
        D[:, 0:3] = body_rate_matrix(q[1], q[2])
        return D

    def panel(side: int, col: int):
        # side +1: hinge at +a/2, panel extends along +x; side -1 mirrors it
        def offset(gamma):
            cg, sg = np.cos(gamma), np.sin(gamma)
            rho = side * np.array([0.5 * a + half_b * cg, 0.0, -half_b * sg])
            d_rho = side * np.array([-half_b * sg, 0.0, -half_b * cg])
            return rho, d_rho

        def lin_jac(t, q):
            R = euler_zyx(q[0], q[1], q[2])
            E = body_rate_matrix(q[1], q[2])
            rho, d_rho = offset(q[col])
            B = np.zeros((3, M))
            B[:, 0:3] = R @ (-skew(rho) @ E)
            B[:, col] = R @ d_rho
            B[:, 5:] = np.eye(3)
            return B

        def ang_jac(t, q):
            D = np.zeros((3, M))
            D[:, 0:3] = body_rate_matrix(q[1], q[2])
            D[1, col] = 1.0
            return rot_y(q[col]).T @ D

        return lin_jac, ang_jac

    panel1_B, panel1_D = panel(+1, 3)
    panel2_B, panel2_D = panel(-1, 4)
    plate = _plate_inertia(p.panel_mass, p.panel_length, p.panel_width)
    bodies = (
        BodyKinematics(name="main", mass=p.body_mass, inertia=np.array(p.inertia), lin_jac=main_B, ang_jac=main_D),
        BodyKinematics(name="panel1", mass=p.panel_mass, inertia=plate, lin_jac=panel1_B, ang_jac=panel1_D),
        BodyKinematics(name="panel2", mass=p.panel_mass, inertia=plate, lin_jac=panel2_B, ang_jac=panel2_D),
    )
    return MultibodySystem(
        name=CASE_ID,
        layout=make_layout(NAMES, s=3, r=0),
        bodies=bodies,
        forces=ForceModel(),
    )


def quasi_velocity_jacobian(t: float, q: np.ndarray) -> np.ndarray:
    """[w_body; gamma1_dot; gamma2_dot; X_dot; Y_dot; Z_dot] = Y qdot."""
    Y = np.eye(M)
    Y[0:3, 0:3] = body_rate_matrix(q[1], q[2])
    return Y


def build_three_body_spacecraft(**overrides) -> CaseStudy:
    case = load_case_file(CASE_ID)
    params = merge_parameters(TribodyParameters, case, overrides)
    labels = ("wx", "wy", "wz", "gamma1_dot", "gamma2_dot", "X_dot", "Y_dot", "Z_dot")
    return CaseStudy(
        case_id=CASE_ID,
        title=case.title,
        system=build_system(params),
        qv_reduced=QuasiVelocityDef(labels=labels[:5], jac=lambda t, q: quasi_velocity_jacobian(t, q)[:5]),
        qv_full=QuasiVelocityDef(labels=labels, jac=quasi_velocity_jacobian),
        t0=case.initial.t0,
        q0=np.array(case.initial.q, dtype=float),
        qdot0=np.array(case.initial.qdot, dtype=float),
        settings=IntegratorSettings(t0=case.initial.t0, **case.settings.model_dump()),
        momentum_direction=tuple(case.momentum_direction),
        momentum_axes=tuple(case.momentum_axes),
    )

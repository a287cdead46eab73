# cases/cart_pendulum.py
"""
Cart translating along X carrying a two-link planar pendulum.
q = [theta1, theta2, x]; both angles measured counter-clockwise from +X.
The tip C may only move along the second link relative to the cart.
"""
import numpy as np
from pydantic import BaseModel, Field

from cases.case_study import CaseStudy
from cases.loader import load_case_file, merge_parameters
from integrate.settings import IntegratorSettings
from model.system import BodyKinematics, ForceModel, KinematicConstraint, MultibodySystem, make_layout
from quasivel.quasi_velocity import constant_quasi_velocities

CASE_ID = "cart"
NAMES = ("theta1", "theta2", "x")


class CartParameters(BaseModel):
    cart_mass: float = Field(..., gt=0.0)
    pendulum_mass: float = Field(..., gt=0.0, description="Split evenly between the two links.")
    link_length: float = Field(..., gt=0.0)
    link_width: float = Field(..., gt=0.0)
    cart_size: list[float] = Field(..., min_length=3, max_length=3)
    gravity: float = 9.81
    torque: float = 0.0


def _box_inertia(mass: float, a: float, b: float, c: float) -> np.ndarray:
    return mass / 12.0 * np.diag([b * b + c * c, a * a + c * c, a * a + b * b])


def _bar_inertia(mass: float, length: float, width: float) -> np.ndarray:
    """Slender bar along its local x axis with a square section."""
    return mass / 12.0 * np.diag([2 * width * width, length * length + width * width, length * length + width * width])


def build_system(p: CartParameters) -> MultibodySystem:
    l = p.link_length
    half = 0.5 * l
    m_link = 0.5 * p.pendulum_mass

    def cart_B(t, q):
        return np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

    def link1_B(t, q):
        s1, c1 = np.sin(q[0]), np.cos(q[0])
        return np.array([[-half * s1, 0.0, 1.0], [half * c1, 0.0, 0.0], [0.0, 0.0, 0.0]])

    def link2_B(t, q):
        s1, c1 = np.sin(q[0]), np.cos(q[0])
        s2, c2 = np.sin(q[1]), np.cos(q[1])
        return np.array([[-l * s1, -half * s2, 1.0], [l * c1, half * c2, 0.0], [0.0, 0.0, 0.0]])

    no_spin = np.zeros((3, 3))
    spin1 = np.zeros((3, 3))
    spin1[2, 0] = 1.0
    spin2 = np.zeros((3, 3))
    spin2[2, 1] = 1.0

    bodies = (
        BodyKinematics(
            name="cart",
            mass=p.cart_mass,
            inertia=_box_inertia(p.cart_mass, *p.cart_size),
            lin_jac=cart_B,
            ang_jac=lambda t, q: no_spin,
        ),
        BodyKinematics(
            name="link1",
            mass=m_link,
            inertia=_bar_inertia(m_link, l, p.link_width),
            lin_jac=link1_B,
            ang_jac=lambda t, q: spin1,
        ),
        BodyKinematics(
            name="link2",
            mass=m_link,
            inertia=_bar_inertia(m_link, l, p.link_width),
            lin_jac=link2_B,
            ang_jac=lambda t, q: spin2,
        ),
    )

    def potential(t, q):
        y1 = half * np.sin(q[0])
        y2 = l * np.sin(q[0]) + half * np.sin(q[1])
        return p.gravity * m_link * (y1 + y2)

    nc_forces = None
    if p.torque != 0.0:
        tau = p.torque
        # motor between the links
        nc_forces = lambda t, q, qdot: np.array([tau, -tau, 0.0])

    constraint = KinematicConstraint(
        r=1,
        jac=lambda t, q: np.array([[l * np.cos(q[0] - q[1]), l, 0.0]]),
    )
    return MultibodySystem(
        name=CASE_ID,
        layout=make_layout(NAMES, s=1, r=1),
        bodies=bodies,
        forces=ForceModel(potential=potential, nc_forces=nc_forces),
        constraint=constraint,
    )


def build_cart_pendulum(**overrides) -> CaseStudy:
    case = load_case_file(CASE_ID)
    params = merge_parameters(CartParameters, case, overrides)
    return CaseStudy(
        case_id=CASE_ID,
        title=case.title,
        system=build_system(params),
        qv_reduced=constant_quasi_velocities(("theta2_dot - theta1_dot",), [[-1.0, 1.0, 0.0]]),
        qv_full=constant_quasi_velocities(("theta1_dot - theta2_dot", "x_dot"), [[1.0, -1.0, 0.0], [0.0, 0.0, 1.0]]),
        t0=case.initial.t0,
        q0=np.array(case.initial.q, dtype=float),
        qdot0=np.array(case.initial.qdot, dtype=float),
        settings=IntegratorSettings(t0=case.initial.t0, **case.settings.model_dump()),
        momentum_direction=tuple(case.momentum_direction),
        momentum_axes=tuple(case.momentum_axes),
    )

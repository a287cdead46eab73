import numpy as np
import pytest

from cases.rotations import body_rate_matrix
from model.system import BodyKinematics, ForceModel, MultibodySystem, make_layout
from quasivel.quasi_velocity import QuasiVelocityDef, constant_quasi_velocities

GRAVITY = 9.81
BOB_MASS = 0.5
ARM = 0.2
EULER_INERTIA = np.diag([1.0, 2.0, 3.0])


def _still(t, q):
    return np.zeros((3, q.size))


@pytest.fixture
def free_particle() -> MultibodySystem:
    """Point mass 2 kg moving in a plane; both coordinates ignorable."""
    B = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    body = BodyKinematics(name="particle", mass=2.0, inertia=np.eye(3), lin_jac=lambda t, q: B, ang_jac=_still)
    return MultibodySystem(name="particle", layout=make_layout(("X", "Y"), s=2), bodies=(body,))


@pytest.fixture
def cart_pendulum() -> MultibodySystem:
    """
    q = [theta, x]: 1 kg cart on a rail with a 0.5 kg bob on a 0.2 m arm.
    theta = 0 hangs straight down; at theta = 0, M = [[0.02, 0.1], [0.1, 1.5]].
    """
    cart_B = np.array([[0.0, 1.0], [0.0, 0.0], [0.0, 0.0]])

    def bob_B(t, q):
        c, s = np.cos(q[0]), np.sin(q[0])
        return np.array([[ARM * c, 1.0], [ARM * s, 0.0], [0.0, 0.0]])

    bodies = (
        BodyKinematics(name="cart", mass=1.0, inertia=np.eye(3), lin_jac=lambda t, q: cart_B, ang_jac=_still),
        BodyKinematics(name="bob", mass=BOB_MASS, inertia=np.eye(3), lin_jac=bob_B, ang_jac=_still),
    )
    return MultibodySystem(
        name="cart-pendulum",
        layout=make_layout(("theta", "x"), s=1),
        bodies=bodies,
        forces=ForceModel(potential=lambda t, q: -BOB_MASS * GRAVITY * ARM * np.cos(q[0])),
    )


@pytest.fixture
def cart_pendulum_qv():
    """(reduced, full) quasi-velocity sets: [theta_dot] and [theta_dot, x_dot]."""
    return (
        constant_quasi_velocities(("theta_dot",), [[1.0, 0.0]]),
        constant_quasi_velocities(("theta_dot", "x_dot"), np.eye(2)),
    )


@pytest.fixture
def cart_pendulum_state():
    """(t0, q0, qdot0) with generalized x-momentum 0.1 * 1 + 1.5 * 3 = 4.6."""
    return 0.0, np.array([0.0, 0.0]), np.array([1.0, 3.0])


@pytest.fixture
def free_rigid_body() -> MultibodySystem:
    """Torque-free body, I = diag(1, 2, 3), attitude by z-y-x Euler angles."""

    def D(t, q):
        return body_rate_matrix(q[1], q[2])

    body = BodyKinematics(name="body", mass=1.0, inertia=EULER_INERTIA, lin_jac=_still, ang_jac=D)
    return MultibodySystem(name="rigid-body", layout=make_layout(("psi", "theta", "phi")), bodies=(body,))


@pytest.fixture
def body_rates() -> QuasiVelocityDef:
    return QuasiVelocityDef(labels=("wx", "wy", "wz"), jac=lambda t, q: body_rate_matrix(q[1], q[2]))

# cases/rotations.py
"""Intrinsic z-y-x (yaw psi, pitch theta, roll phi) attitude kinematics."""
import numpy as np

from core.config import CurrentConfig
from core.exceptions import GimbalProximity


def rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def euler_zyx(psi: float, theta: float, phi: float) -> np.ndarray:
    """Body-to-inertial rotation Rz(psi) Ry(theta) Rx(phi)."""
    return rot_z(psi) @ rot_y(theta) @ rot_x(phi)


def check_gimbal(theta: float, margin: float | None = None) -> None:
    margin = CurrentConfig.GIMBAL_MARGIN if margin is None else margin
    if abs(theta) > np.pi / 2 - margin:
        raise GimbalProximity("pitch angle too close to +-pi/2", context={"theta": float(theta), "margin": margin})


def body_rate_matrix(theta: float, phi: float) -> np.ndarray:
    """E with body-frame angular velocity w = E [psi_dot, theta_dot, phi_dot]."""
    check_gimbal(theta)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    return np.array([
        [-st, 0.0, 1.0],
        [ct * sp, cp, 0.0],
        [ct * cp, -sp, 0.0],
    ])

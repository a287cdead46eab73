import numpy as np
import pytest

from core.exceptions import ModelError, NonFiniteEvaluation, SingularMass
from model.linalg import factorize, skew
from model.mechanics import (
    constraint_matrices,
    derive_mass_decomposition,
    generalized_forces,
    kinetic_energy,
    linear_momentum,
    potential_energy,
)
from model.system import BodyKinematics, KinematicConstraint, MultibodySystem, make_layout
from tests.conftest import ARM, BOB_MASS, GRAVITY


def test_layout_rejects_too_many_ignorables():
    with pytest.raises(ModelError):
        make_layout(("a", "b"), s=2, r=1)


def test_layout_ignorable_slice():
    layout = make_layout(("theta1", "theta2", "x"), s=1, r=1)
    assert layout.p == 2
    assert layout.n_reduced == 1
    assert layout.ignorable_names == ("x",)


def test_body_rejects_indefinite_inertia():
    with pytest.raises(ModelError):
        BodyKinematics(name="bad", mass=1.0, inertia=np.diag([1.0, -1.0, 1.0]), lin_jac=None, ang_jac=None)


def test_constraint_rows_must_match_layout(free_particle):
    with pytest.raises(ModelError):
        free_particle.with_constraint(KinematicConstraint(r=1, jac=lambda t, q: np.ones((1, 2))))


def test_free_particle_decomposition(free_particle):
    dec = derive_mass_decomposition(free_particle, 0.0, np.zeros(2))
    np.testing.assert_allclose(dec.M, 2.0 * np.eye(2))
    np.testing.assert_allclose(dec.N, 0.0)
    assert dec.T0 == 0.0
    np.testing.assert_allclose(linear_momentum(free_particle, 0.0, np.zeros(2), np.array([1.0, -2.0])), [2.0, -4.0, 0.0])


def test_cart_pendulum_mass_matrix(cart_pendulum, cart_pendulum_state):
    t, q, qdot = cart_pendulum_state
    dec = derive_mass_decomposition(cart_pendulum, t, q)
    np.testing.assert_allclose(dec.M, [[0.02, 0.1], [0.1, 1.5]], atol=1e-14)
    np.testing.assert_allclose(dec.momentum(qdot), [0.02 + 0.3, 4.6], atol=1e-14)


def test_quadratic_form_matches_direct_sum(cart_pendulum):
    rng = np.random.default_rng(7)
    for _ in range(20):
        q = rng.uniform(-1.0, 1.0, 2)
        qdot = rng.normal(0.0, 1.0, 2)
        dec = derive_mass_decomposition(cart_pendulum, 0.0, q)
        assert dec.kinetic_energy(qdot) == pytest.approx(kinetic_energy(cart_pendulum, 0.0, q, qdot), rel=1e-12)


def test_generalized_forces_from_potential(cart_pendulum):
    q = np.array([0.4, 1.0])
    assert potential_energy(cart_pendulum, 0.0, q) == pytest.approx(-BOB_MASS * GRAVITY * ARM * np.cos(0.4))
    Q = generalized_forces(cart_pendulum, 0.0, q, np.zeros(2))
    np.testing.assert_allclose(Q, [-BOB_MASS * GRAVITY * ARM * np.sin(0.4), 0.0], atol=1e-9)


def test_singular_mass_detected():
    B = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
    body = BodyKinematics(name="p", mass=1.0, inertia=np.eye(3), lin_jac=lambda t, q: B, ang_jac=lambda t, q: np.zeros((3, 2)))
    sys = MultibodySystem(name="degenerate", layout=make_layout(("a", "b")), bodies=(body,))
    with pytest.raises(SingularMass):
        derive_mass_decomposition(sys, 0.0, np.zeros(2))


def test_wrong_shape_and_nan_maps():
    body = BodyKinematics(name="p", mass=1.0, inertia=np.eye(3), lin_jac=lambda t, q: np.zeros((2, 2)), ang_jac=lambda t, q: np.zeros((3, 2)))
    sys = MultibodySystem(name="bad-shape", layout=make_layout(("a", "b")), bodies=(body,))
    with pytest.raises(ModelError):
        derive_mass_decomposition(sys, 0.0, np.zeros(2))

    body = BodyKinematics(name="p", mass=1.0, inertia=np.eye(3), lin_jac=lambda t, q: np.full((3, 2), np.nan), ang_jac=lambda t, q: np.zeros((3, 2)))
    sys = MultibodySystem(name="nan", layout=make_layout(("a", "b")), bodies=(body,))
    with pytest.raises(NonFiniteEvaluation):
        derive_mass_decomposition(sys, 0.0, np.zeros(2))


def test_unconstrained_system_has_empty_blocks(free_particle):
    a, b = constraint_matrices(free_particle, 0.0, np.zeros(2))
    assert a.shape == (0, 2)
    assert b.shape == (0,)


def test_factorize_rejects_singular_matrix():
    with pytest.raises(SingularMass):
        factorize(np.array([[1.0, 2.0], [2.0, 4.0]]), error=SingularMass, what="test matrix")
    lu = factorize(np.array([[4.0, 1.0], [1.0, 3.0]]), error=SingularMass, what="test matrix")
    np.testing.assert_allclose(lu.solve(np.array([1.0, 2.0])), np.linalg.solve([[4.0, 1.0], [1.0, 3.0]], [1.0, 2.0]))


def test_skew_is_cross_product():
    v, w = np.array([1.0, 2.0, 3.0]), np.array([-0.5, 0.4, 2.0])
    np.testing.assert_allclose(skew(v) @ w, np.cross(v, w))


def test_factorize_without_estimate_still_catches_zero_pivot():
    with pytest.raises(SingularMass):
        factorize(np.array([[1.0, 2.0], [2.0, 4.0]]), error=SingularMass, what="test matrix", estimate=False)
    # ill-conditioned but not singular
    near = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
    lu = factorize(near, error=SingularMass, what="test matrix", estimate=False)
    assert np.isnan(lu.condition)
    with pytest.raises(SingularMass):
        factorize(near, error=SingularMass, what="test matrix")

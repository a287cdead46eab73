import numpy as np
import pytest

from core.exceptions import FormulationError, ModelError, SingularAugmentedMatrix
from ignorable.dynamical_constraint import build_dynamical_constraint
from quasivel.quasi_velocity import QuasiVelocityDef, constant_quasi_velocities
from quasivel.reduced_map import build_reduced_map, reconstruct_qdot


@pytest.fixture
def dc(cart_pendulum, cart_pendulum_state):
    return build_dynamical_constraint(cart_pendulum, *cart_pendulum_state)


def test_reduced_map_values(cart_pendulum, cart_pendulum_qv, cart_pendulum_state, dc):
    t, q, _ = cart_pendulum_state
    rmap = build_reduced_map(cart_pendulum, cart_pendulum_qv[0], dc, t, q)
    np.testing.assert_allclose(rmap.W, [[1.0], [-0.1 / 1.5]], atol=1e-14)
    np.testing.assert_allclose(rmap.X, [0.0, 4.6 / 1.5], atol=1e-14)
    assert rmap.rank_rows == 2


def test_reconstruction_recovers_initial_velocities(cart_pendulum, cart_pendulum_qv, cart_pendulum_state, dc):
    t, q, qdot = cart_pendulum_state
    qv = cart_pendulum_qv[0]
    rmap = build_reduced_map(cart_pendulum, qv, dc, t, q)
    np.testing.assert_allclose(reconstruct_qdot(rmap, qv.evaluate(t, q, qdot)), qdot, atol=1e-12)


def test_block_identities_hold(cart_pendulum, cart_pendulum_qv, dc):
    for theta in (-0.7, 0.2, 1.1):
        rmap = build_reduced_map(cart_pendulum, cart_pendulum_qv[0], dc, 0.0, np.array([theta, 2.0]))
        w_res, x_res = rmap.residuals()
        assert w_res <= 1e-12
        assert x_res <= 1e-12


def test_standard_map_without_dynamical_rows(cart_pendulum, cart_pendulum_qv):
    rmap = build_reduced_map(cart_pendulum, cart_pendulum_qv[1], None, 0.0, np.array([0.3, 0.0]))
    np.testing.assert_allclose(rmap.W, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(rmap.X, 0.0, atol=1e-14)


def test_all_ignorable_gives_empty_quasi_velocities(free_particle):
    dc = build_dynamical_constraint(free_particle, 0.0, np.zeros(2), np.array([0.5, -1.0]))
    empty = QuasiVelocityDef(labels=(), jac=lambda t, q: np.zeros((0, 2)))
    rmap = build_reduced_map(free_particle, empty, dc, 0.0, np.array([3.0, 4.0]))
    assert rmap.W.shape == (2, 0)
    np.testing.assert_allclose(reconstruct_qdot(rmap, np.zeros(0)), [0.5, -1.0], atol=1e-14)


def test_dependent_rows_are_singular(cart_pendulum, cart_pendulum_state, dc):
    t, q, _ = cart_pendulum_state
    parallel = constant_quasi_velocities(("momentum_like",), [[0.1, 1.5]])
    with pytest.raises(SingularAugmentedMatrix):
        build_reduced_map(cart_pendulum, parallel, dc, t, q)


def test_wrong_quasi_velocity_count(cart_pendulum, cart_pendulum_qv, cart_pendulum_state, dc):
    t, q, _ = cart_pendulum_state
    with pytest.raises(FormulationError):
        build_reduced_map(cart_pendulum, cart_pendulum_qv[1], dc, t, q)


def test_label_count_checked():
    with pytest.raises(ModelError):
        constant_quasi_velocities(("a", "b"), [[1.0, 0.0]])

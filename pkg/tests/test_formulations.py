import numpy as np
import pytest

from cases.catalog import build_case
from core.base_formulation import StateView
from core.exceptions import FormulationError, InconsistentInitialState, RegistryError, VMBDRuntimeError
from formulations.cards import METHOD_IDS, method_card
from formulations.lagrange import LagrangeFormulation, lagrange_rhs
from formulations.maggi import MaggiFormulation, maggi_rhs
from formulations.terms import reduced_terms, take_snapshot
from formulations.volterra import ReducedVolterraFormulation, StandardVolterraFormulation, reduced_volterra_rhs
from ignorable.dynamical_constraint import build_dynamical_constraint
from cases.rotations import body_rate_matrix
from tests.conftest import EULER_INERTIA

EXPECTED_CARDS = {
    "cart": [(6, 3), (6, 3), (5, 2), (4, 1)],
    "tribody": [(16, 8), (16, 8), (16, 8), (13, 5)],
    "satellite": [(15, 7), (15, 7), (15, 7), (12, 4)],
}


def test_method_order():
    assert METHOD_IDS == ("lagrange", "maggi", "kane", "volterra-reduced")


@pytest.mark.parametrize("case_id", sorted(EXPECTED_CARDS))
def test_method_cards(case_id):
    system = build_case(case_id).system
    assert [method_card(m, system) for m in METHOD_IDS] == EXPECTED_CARDS[case_id]


def test_unknown_method_card(cart_pendulum):
    with pytest.raises(RegistryError):
        method_card("euler", cart_pendulum)


def test_euler_equations_from_reduced_terms(free_rigid_body, body_rates):
    q = np.array([0.1, 0.3, 0.2])
    w = np.array([0.1, 0.2, 0.3])
    terms = reduced_terms(free_rigid_body, body_rates, None, 0.0, q, w)
    np.testing.assert_allclose(terms.M_NI, EULER_INERTIA, atol=1e-12)
    np.testing.assert_allclose(terms.L_NI, -np.cross(w, EULER_INERTIA @ w), atol=1e-8)
    np.testing.assert_allclose(terms.L_NI, [-0.06, 0.06, -0.02], atol=1e-8)
    np.testing.assert_allclose(terms.qdot, np.linalg.solve(body_rate_matrix(0.3, 0.2), w), atol=1e-12)


def test_reduced_terms_kinetic_energy(cart_pendulum, cart_pendulum_qv, cart_pendulum_state):
    t, q, qdot = cart_pendulum_state
    dc = build_dynamical_constraint(cart_pendulum, t, q, qdot)
    terms = reduced_terms(cart_pendulum, cart_pendulum_qv[0], dc, t, q, np.array([1.0]))
    u = np.array([1.0])
    T = 0.5 * u @ terms.M_NI @ u + u @ terms.N_NI + terms.T0_NI
    expected = 0.5 * qdot @ np.array([[0.02, 0.1], [0.1, 1.5]]) @ qdot
    assert T == pytest.approx(expected, rel=1e-12)
    np.testing.assert_allclose(terms.qdot, qdot, atol=1e-12)


def test_all_engines_agree_on_accelerations(cart_pendulum, cart_pendulum_qv, cart_pendulum_state):
    t, q, qdot = cart_pendulum_state
    q = np.array([0.4, 1.0])
    qv_reduced, qv_full = cart_pendulum_qv
    z = np.concatenate([q, qdot])
    qdd_lagrange = lagrange_rhs(cart_pendulum, t, z)[2:]
    qdd_maggi = maggi_rhs(cart_pendulum, qv_full, t, z)[2:]
    np.testing.assert_allclose(qdd_maggi, qdd_lagrange, rtol=1e-7, atol=1e-7)

    kane = StandardVolterraFormulation(cart_pendulum, qv_full=qv_full)
    z_kane = kane.initial_state(t, q, qdot)
    np.testing.assert_allclose(kane.rhs(t, z_kane)[2:], qdd_lagrange, rtol=1e-7, atol=1e-7)

    dc = build_dynamical_constraint(cart_pendulum, t, q, qdot)
    reduced = reduced_volterra_rhs(cart_pendulum, qv_reduced, dc, t, np.concatenate([q, [qdot[0]]]))
    np.testing.assert_allclose(reduced[:2], qdot, atol=1e-12)
    assert reduced[2] == pytest.approx(qdd_lagrange[0], rel=1e-7, abs=1e-7)


def test_reduced_rhs_keeps_momentum_row(cart_pendulum, cart_pendulum_qv, cart_pendulum_state):
    t, q, qdot = cart_pendulum_state
    engine = ReducedVolterraFormulation(cart_pendulum, qv_full=cart_pendulum_qv[1], qv_reduced=cart_pendulum_qv[0])
    z0 = engine.initial_state(t, q, qdot)
    np.testing.assert_allclose(z0, [0.0, 0.0, 1.0])
    assert engine.card() == (3, 1)
    view = engine.unpack(t, z0)
    assert isinstance(view, StateView)
    np.testing.assert_allclose(view.qdot, qdot, atol=1e-12)
    assert view.work == 0.0


def test_reduced_rhs_needs_initial_state(cart_pendulum, cart_pendulum_qv):
    engine = ReducedVolterraFormulation(cart_pendulum, qv_reduced=cart_pendulum_qv[0])
    with pytest.raises(FormulationError):
        engine.rhs(0.0, np.zeros(3))


def test_reduced_rhs_rejects_wrong_count(cart_pendulum, cart_pendulum_qv, cart_pendulum_state):
    dc = build_dynamical_constraint(cart_pendulum, *cart_pendulum_state)
    with pytest.raises(FormulationError):
        reduced_volterra_rhs(cart_pendulum, cart_pendulum_qv[1], dc, 0.0, np.zeros(4))


def test_engines_need_quasi_velocities(cart_pendulum):
    with pytest.raises(FormulationError):
        ReducedVolterraFormulation(cart_pendulum)
    with pytest.raises(FormulationError):
        StandardVolterraFormulation(cart_pendulum)
    with pytest.raises(FormulationError):
        MaggiFormulation(cart_pendulum)


def test_inconsistent_initial_velocities():
    case = build_case("cart")
    engine = case.formulation("lagrange")
    with pytest.raises(InconsistentInitialState):
        engine.initial_state(case.t0, case.q0, np.array([1.0, 1.0, 3.0]))


def test_cart_case_reduced_state_is_consistent():
    case = build_case("cart")
    engine = case.formulation("volterra-reduced")
    z0 = engine.initial_state(case.t0, case.q0, case.qdot0)
    np.testing.assert_allclose(z0, [np.pi / 2, np.pi / 2, 4.0, -2.0])
    f = engine.safe_rhs(case.t0, z0)
    assert f.shape == (4,)
    assert np.all(np.isfinite(f))
    np.testing.assert_allclose(f[:3], case.qdot0, atol=1e-10)


def test_work_state_appended_for_driven_cart():
    case = build_case("cart", torque=0.1)
    assert case.card("lagrange") == (7, 3)
    engine = case.formulation("lagrange")
    z0 = engine.initial_state(case.t0, case.q0, case.qdot0)
    assert z0.size == 7
    # motor power tau * (theta1_dot - theta2_dot)
    assert engine.rhs(case.t0, z0)[-1] == pytest.approx(0.1 * 2.0)


def test_safe_rhs_wraps_unexpected_errors(cart_pendulum):
    class Broken(LagrangeFormulation):
        name = "broken"

        def rhs(self, t, z):
            raise ValueError("boom")

    with pytest.raises(VMBDRuntimeError) as info:
        Broken(cart_pendulum).safe_rhs(0.0, np.zeros(4))
    assert info.value.context["formulation"] == "broken"


@pytest.mark.parametrize("method", METHOD_IDS)
def test_cart_rhs_ignores_rail_position(method):
    # x far down the rail, late in a run
    case = build_case("cart")
    engine = case.formulation(method)
    z0 = engine.initial_state(case.t0, case.q0, case.qdot0)
    far = z0.copy()
    far[2] += 150.0
    np.testing.assert_array_equal(engine.rhs(30.0, far), engine.rhs(30.0, z0))


def test_unguarded_snapshot_gives_the_same_map():
    case = build_case("cart")
    engine = case.formulation("volterra-reduced")
    engine.initial_state(case.t0, case.q0, case.qdot0)
    q = np.array([1.2, 0.7, 4.0])
    guarded = take_snapshot(case.system, engine.qv, engine.dc, 0.0, q)
    quick = take_snapshot(case.system, engine.qv, engine.dc, 0.0, q, guarded=False)
    np.testing.assert_array_equal(quick.rmap.W, guarded.rmap.W)
    np.testing.assert_array_equal(quick.rmap.X, guarded.rmap.X)
    assert np.isfinite(guarded.rmap.condition_number)
    assert np.isnan(quick.rmap.condition_number)

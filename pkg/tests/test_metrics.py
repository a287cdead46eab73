import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.exceptions import EmptySeries, MetricsError
from ignorable.dynamical_constraint import build_dynamical_constraint
from integrate.trajectory import Trajectory
from metrics.norms import SeriesNorm, series_norm
from metrics.series import conservation_error_series, energy_error_series, momentum_series, unit_direction


def _free_flight(n=5):
    """Trajectory of the free particle moving at constant velocity (1, -2)."""
    times = np.linspace(0.0, 1.0, n)
    v = np.array([1.0, -2.0])
    qs = times[:, None] * v
    return Trajectory(
        times=times,
        states=np.hstack([qs, np.tile(v, (n, 1))]),
        qs=qs,
        qdots=np.tile(v, (n, 1)),
        us=np.zeros((n, 0)),
        work=np.zeros(n),
    )


def test_series_norm_of_simple_series():
    norm = series_norm([3.0, -4.0])
    assert norm.max_abs == 4.0
    assert norm.rms == pytest.approx(math.sqrt(12.5))
    assert norm.scale == 3.0
    assert norm.relative_max_abs == pytest.approx(4.0 / 3.0)


def test_series_norm_of_zero_series():
    norm = series_norm(np.zeros(10))
    assert norm.max_abs == 0.0
    assert norm.rms == 0.0
    assert norm.scale == 1.0


def test_series_norm_uses_reference():
    norm = series_norm([0.0, 1e-3], reference=-2.0)
    assert norm.scale == 2.0
    assert norm.relative_max_abs == pytest.approx(5e-4)


def test_empty_series():
    with pytest.raises(EmptySeries):
        series_norm([])


def test_norm_schema_rejects_rms_above_max():
    with pytest.raises(ValidationError):
        SeriesNorm(max_abs=1.0, rms=2.0, relative_max_abs=1.0, relative_rms=2.0, scale=1.0)


def test_unit_directions():
    np.testing.assert_allclose(unit_direction("y"), [0.0, 1.0, 0.0])
    np.testing.assert_allclose(unit_direction((0.0, 0.0, 1.0)), [0.0, 0.0, 1.0])
    with pytest.raises(MetricsError):
        unit_direction("w")
    with pytest.raises(MetricsError):
        unit_direction((1.0, 1.0, 0.0))


def test_free_flight_conserves_everything(free_particle):
    traj = _free_flight()
    energy = energy_error_series(free_particle, traj)
    np.testing.assert_allclose(energy.energy, 5.0)
    np.testing.assert_allclose(energy.drift, 0.0)
    np.testing.assert_allclose(energy.percent, 0.0)

    momentum = momentum_series(free_particle, traj)
    np.testing.assert_allclose(momentum, np.tile([2.0, -4.0, 0.0], (len(traj), 1)))

    dc = build_dynamical_constraint(free_particle, 0.0, traj.qs[0], traj.qdots[0])
    series = conservation_error_series(free_particle, dc, traj, "y")
    np.testing.assert_allclose(series.kinematic, 0.0)
    np.testing.assert_allclose(series.dynamical, 0.0, atol=1e-15)
    np.testing.assert_allclose(series.momentum, -4.0)
    np.testing.assert_allclose(series.momentum_drift, 0.0)


def test_series_need_observed_trajectory(free_particle):
    bare = Trajectory(times=np.array([0.0, 1.0]), states=np.zeros((2, 4)))
    with pytest.raises(MetricsError):
        energy_error_series(free_particle, bare)

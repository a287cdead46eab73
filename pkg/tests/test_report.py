import numpy as np
import orjson
import pytest
from pydantic import ValidationError

from benchmark.report import MethodNorms, MethodReport, RunOverrides
from benchmark.writers import atomic_write, dumps_json, write_csv, write_json
from metrics.norms import series_norm


def _norms(value=1e-12):
    n = series_norm([0.0, value])
    return MethodNorms(energy_drift=n, kinematic_residual=n, dynamical_residual=n, momentum_drift=n)


def test_method_report_round_trips_through_json(tmp_path):
    report = MethodReport(case="cart", method="kane", n_states=5, n_equations=2, wall_seconds=0.5, norms=_norms())
    path = write_json(report, tmp_path / "out" / "kane.json")
    data = orjson.loads(path.read_bytes())
    assert data["n_states"] == 5
    assert data["norms"]["energy_drift"]["max_abs"] == 1e-12
    assert MethodReport.model_validate(data) == report


def test_report_rejects_non_finite_norms():
    with pytest.raises(ValidationError):
        MethodReport(case="cart", method="kane", n_states=5, n_equations=2, wall_seconds=0.5, norms=_norms(np.inf))


def test_json_serialises_numpy_values():
    report = MethodReport(
        case="cart",
        method="kane",
        n_states=5,
        n_equations=2,
        wall_seconds=0.5,
        settings={"grid": np.array([0.0, 0.5])},
        norms=_norms(),
    )
    assert b'"grid"' in dumps_json(report)


def test_overrides_precedence():
    from_file = RunOverrides(rtol=1e-6, t_final=10.0, parameters={"torque": 0.1, "gravity": 9.0})
    flags = RunOverrides(rtol=1e-9, parameters={"torque": 0.2})
    merged = from_file.merged(flags)
    assert merged.rtol == 1e-9
    assert merged.t_final == 10.0
    assert merged.parameters == {"torque": 0.2, "gravity": 9.0}


def test_overrides_validate_values():
    with pytest.raises(ValidationError):
        RunOverrides(rtol=0.0)
    with pytest.raises(ValidationError):
        RunOverrides(parameters={"nested": {"a": 1}})


def test_csv_format(tmp_path):
    path = write_csv(["t", "q1"], np.array([[0.0, 0.1], [0.5, 1.0 / 3.0]]), tmp_path / "run.csv")
    text = path.read_text(encoding="utf-8")
    assert text == "t,q1\n0,0.10000000000000001\n0.5,0.33333333333333331\n"


def test_atomic_write_leaves_no_temp_files(tmp_path):
    atomic_write(tmp_path / "a.bin", b"one")
    atomic_write(tmp_path / "a.bin", b"two")
    assert (tmp_path / "a.bin").read_bytes() == b"two"
    assert [p.name for p in tmp_path.iterdir()] == ["a.bin"]

import orjson
import pytest

from cli.commands import BenchmarkController, overrides_from_args, parse_assignments
from cli.parser import build_parser
from core.exceptions import ConfigError
from main import main

SHORT = ["--tf", "0.1", "--sample", "0.01"]


def test_parse_assignments_uses_yaml_values():
    assert parse_assignments(["torque=0.1", "cart_size=[0.2, 0.1, 0.1]"]) == {
        "torque": 0.1,
        "cart_size": [0.2, 0.1, 0.1],
    }
    with pytest.raises(ConfigError):
        parse_assignments(["torque"])


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_bytes(orjson.dumps({"rtol": 1e-6, "t_final": 2.0, "parameters": {"torque": 0.1}}))
    args = build_parser().parse_args(
        ["run", "--case", "cart", "--method", "kane", "--config", str(config), "--tf", "1.0", "--set", "gravity=9.8"]
    )
    overrides = overrides_from_args(args)
    assert overrides.t_final == 1.0
    assert overrides.rtol == 1e-6
    assert overrides.parameters == {"torque": 0.1, "gravity": 9.8}


def test_unknown_method_is_a_usage_error():
    assert main(["run", "--case", "cart", "--method", "hamilton"]) == 2


def test_unknown_parameter_is_a_usage_error(tmp_path):
    code = main(["run", "--case", "cart", "--method", "kane", "--set", "bogus=1", "--out", str(tmp_path / "a.csv")])
    assert code == 2


def test_missing_config_file_is_a_usage_error(tmp_path):
    assert main(["run", "--case", "cart", "--method", "kane", "--config", str(tmp_path / "none.json")]) == 2


def test_run_writes_csv_and_report(tmp_path, capsys):
    out, report = tmp_path / "cart.csv", tmp_path / "cart.json"
    code = main(["run", "--case", "cart", "--method", "volterra-reduced", *SHORT, "--out", str(out), "--report", str(report)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,q1,q2,q3,qd1,qd2,qd3,u1,energy_drift,kin_residual,dyn_residual,momentum_drift"
    assert len(lines) == 12
    data = orjson.loads(report.read_bytes())
    assert (data["n_states"], data["n_equations"]) == (4, 1)
    assert data["settings"]["t_final"] == 0.1
    assert "volterra-reduced" in capsys.readouterr().out


def test_run_defaults_to_output_dir(tmp_path):
    args = build_parser().parse_args(["run", "--case", "cart", "--method", "maggi", *SHORT])
    assert BenchmarkController(output_dir=tmp_path).dispatch(args) == 0
    assert (tmp_path / "cart_maggi.csv").exists()
    assert (tmp_path / "cart_maggi.json").exists()


def test_compare_writes_one_csv_per_method(tmp_path, capsys):
    code = main(["compare", "--case", "cart", "--tf", "0.05", "--sample", "0.01", "--out-dir", str(tmp_path)])
    assert code == 0
    for method in ("lagrange", "maggi", "kane", "volterra-reduced"):
        assert (tmp_path / f"cart_{method}.csv").exists()
    rows = orjson.loads((tmp_path / "cart_compare.json").read_bytes())["rows"]
    assert [r["method"] for r in rows] == ["lagrange", "maggi", "kane", "volterra-reduced"]
    assert "case: cart" in capsys.readouterr().out


def test_verify_passes_and_negative_control_fails(capsys):
    assert main(["verify", "--case", "cart", "--horizon", "0.2"]) == 0
    capsys.readouterr()
    assert main(["verify", "--case", "cart", "--horizon", "0.2", "--perturb-constraint"]) == 1
    assert "failed: cart:kinematic-residual" in capsys.readouterr().out


def test_verify_rejects_non_positive_horizon():
    assert main(["verify", "--horizon", "0"]) == 2


def test_bench_prints_medians(capsys):
    assert main(["bench", "--repeats", "1", "--tf", "0.02", "--sample", "0.01"]) == 0
    out = capsys.readouterr().out
    assert "volterra-reduced" in out
    assert "lagrange" in out


def test_bench_rejects_zero_repeats():
    assert main(["bench", "--repeats", "0"]) == 2

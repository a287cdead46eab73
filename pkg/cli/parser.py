# cli/parser.py
import argparse

from cases.catalog import CASE_IDS
from formulations.cards import METHOD_IDS


def _add_settings(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("integration settings (override --config and case defaults)")
    group.add_argument("--tf", dest="t_final", type=float, help="End time, s.")
    group.add_argument("--sample", dest="sample_step", type=float, help="Output sampling interval, s.")
    group.add_argument("--rtol", type=float, help="Relative tolerance.")
    group.add_argument("--atol", type=float, help="Absolute tolerance.")
    group.add_argument("--max-step", dest="max_step", type=float, help="Internal step cap, s.")
    group.add_argument("--integrator", choices=("adaptive", "fixed"), help="Dormand-Prince (default) or fixed-step RK4.")
    group.add_argument("--config", help="JSON file with settings and case parameters.")
    group.add_argument(
        "--set",
        dest="parameters",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override one case parameter (YAML value syntax); repeatable.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vmbd",
        description="Reduced Volterra multibody dynamics: run, compare, verify and benchmark the case studies.",
    )
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"), help="Override LOG_LEVEL.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Integrate one case with one formulation.")
    run.add_argument("--case", required=True, choices=CASE_IDS)
    run.add_argument("--method", required=True, choices=METHOD_IDS)
    run.add_argument("--out", help="Trajectory CSV path.")
    run.add_argument("--report", help="Method report JSON path.")
    _add_settings(run)

    compare = sub.add_parser("compare", help="Integrate one case with all four formulations.")
    compare.add_argument("--case", required=True, choices=CASE_IDS)
    compare.add_argument("--out-dir", help="Directory for <case>_<method>.csv and <case>_compare.json.")
    compare.add_argument("--report", help="Combined JSON path (default inside --out-dir).")
    compare.add_argument("--seedless", action="store_true", help="Accepted for scripts; runs hold no random state.")
    _add_settings(compare)

    verify = sub.add_parser("verify", help="Run the invariant checks.")
    verify.add_argument("--case", choices=CASE_IDS, help="Restrict the per-case checks to one case.")
    verify.add_argument("--perturb-constraint", action="store_true", help="Corrupt a constraint row (negative control).")
    verify.add_argument("--fd-order", action="store_true", help="Also measure the finite-difference convergence order.")
    verify.add_argument("--integrator-order", action="store_true", help="Also measure the Dormand-Prince order, fixed-step and adaptive.")
    verify.add_argument("--horizon", type=float, default=1.0, help="Short-run horizon for trajectory checks, s.")

    bench = sub.add_parser("bench", help="Median wall time of the reduced and multiplier formulations.")
    bench.add_argument("--case", default="cart", choices=CASE_IDS)
    bench.add_argument("--repeats", type=int, default=20, help="Timed runs per method, each over the full horizon.")
    bench.add_argument("--report", help="Benchmark JSON path.")
    _add_settings(bench)

    return parser

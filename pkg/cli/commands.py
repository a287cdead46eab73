# cli/commands.py
import argparse
import asyncio
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import orjson
import yaml
from pydantic import ValidationError

from benchmark.report import RunOverrides
from benchmark.runner import bench_methods, compare_methods, compare_report, resolve_settings, run_method
from benchmark.verify_suite import run_suite
from benchmark.writers import write_csv, write_json
from cases.catalog import build_case
from core.config import CurrentConfig
from core.exceptions import ConfigError, RegistryError, VMBDError
from core.logger import log_error, log_exception, log_info

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_ARGUMENTS = 2
EXIT_RUN_FAILED = 3


def parse_assignments(items: list[str]) -> Dict[str, Any]:
    """KEY=VALUE pairs; values use YAML scalar/list syntax."""
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"expected KEY=VALUE, got '{item}'", context={"item": item})
        try:
            out[key.strip()] = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse value of '{key}'", context={"value": raw}) from e
    return out


def load_overrides(path: Optional[str]) -> RunOverrides:
    if not path:
        return RunOverrides()
    file = Path(path)
    if not file.exists():
        raise ConfigError(f"Config file not found: {file}", context={"path": str(file)})
    try:
        return RunOverrides.model_validate(orjson.loads(file.read_bytes()))
    except orjson.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in {file}", context={"error": str(e)}) from e
    except ValidationError as e:
        raise ConfigError(f"Invalid config file {file}", context={"errors": e.errors()}) from e


def overrides_from_args(args: argparse.Namespace) -> RunOverrides:
    """Flags > --config file; case defaults are applied later."""
    try:
        flags = RunOverrides(
            rtol=args.rtol,
            atol=args.atol,
            t_final=args.t_final,
            sample_step=args.sample_step,
            max_step=args.max_step,
            method=args.integrator,
            parameters=parse_assignments(args.parameters),
        )
    except ValidationError as e:
        raise ConfigError("Invalid command-line settings", context={"errors": e.errors()}) from e
    return load_overrides(args.config).merged(flags)


class BenchmarkController:
    """Turns parsed arguments into runs and files; every handler returns an exit code."""

    def __init__(self, output_dir: Optional[Path] = None):
        self.output_dir = Path(output_dir or CurrentConfig.OUTPUT_DIR)

    # ---- shared ----
    def _prepare(self, args: argparse.Namespace):
        overrides = overrides_from_args(args)
        case = build_case(args.case, **overrides.parameters)
        log_info("Case built.", case=case.case_id, m=case.system.m, s=case.system.layout.s, r=case.system.layout.r)
        return case, resolve_settings(case, overrides)

    def _write_run(self, result, csv_path: Path) -> None:
        write_csv(result.csv_header(), result.csv_rows(), csv_path)

    # ---- commands ----
    def run(self, args: argparse.Namespace) -> int:
        case, settings = self._prepare(args)
        result = run_method(case, args.method, settings)
        stem = f"{case.case_id}_{args.method}"
        self._write_run(result, Path(args.out) if args.out else self.output_dir / f"{stem}.csv")
        write_json(result.report, Path(args.report) if args.report else self.output_dir / f"{stem}.json")
        print(result.report.short_repr())
        return EXIT_OK

    def compare(self, args: argparse.Namespace) -> int:
        case, settings = self._prepare(args)
        results = asyncio.run(compare_methods(case, settings))
        out_dir = Path(args.out_dir) if args.out_dir else self.output_dir
        for result in results:
            self._write_run(result, out_dir / f"{case.case_id}_{result.method}.csv")
        report = compare_report(case, results, settings)
        write_json(report, Path(args.report) if args.report else out_dir / f"{case.case_id}_compare.json")
        print(report.table())
        return EXIT_OK

    def verify(self, args: argparse.Namespace) -> int:
        if args.horizon <= 0:
            raise ConfigError("--horizon must be positive", context={"horizon": args.horizon})
        report = run_suite(
            [args.case] if args.case else None,
            horizon=args.horizon,
            perturb=args.perturb_constraint,
            fd_order=args.fd_order,
            integrator_order=args.integrator_order,
        )
        print(report.summary())
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED

    def bench(self, args: argparse.Namespace) -> int:
        if args.repeats < 1:
            raise ConfigError("--repeats must be at least 1", context={"repeats": args.repeats})
        case, settings = self._prepare(args)
        report = bench_methods(case, settings, repeats=args.repeats)
        if args.report:
            write_json(report, Path(args.report))
        for method, seconds in report.median_seconds.items():
            print(f"{method:<18} median {seconds:.4f} s over {report.repeats} runs")
        if not report.reduced_faster:
            print("warning: volterra-reduced was not the fastest method on this machine")
        return EXIT_OK

    def dispatch(self, args: argparse.Namespace) -> int:
        """Run a command, mapping failures onto exit codes."""
        handler = getattr(self, args.command)
        try:
            return handler(args)
        except (ConfigError, RegistryError) as e:
            log_error("Invalid arguments.", command=args.command, error=str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_BAD_ARGUMENTS
        except VMBDError as e:
            log_exception("Run failed.", command=args.command, error=str(e), **_case_context(args))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_RUN_FAILED
        except OSError as e:
            log_error("Cannot write output.", command=args.command, error=str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_RUN_FAILED


def _case_context(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: getattr(args, k) for k in ("case", "method") if getattr(args, k, None)}

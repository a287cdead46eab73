# benchmark/runner.py
import asyncio
import statistics
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import ValidationError

from benchmark.report import BenchReport, CompareReport, MethodNorms, MethodReport, RunOverrides
from cases.case_study import CaseStudy
from core.config import CurrentConfig
from core.exceptions import ConfigError
from core.logger import log_info, log_warning
from formulations.cards import METHOD_IDS
from ignorable.dynamical_constraint import DynamicalConstraint, build_dynamical_constraint
from integrate.dopri import integrate_adaptive
from integrate.rk4 import integrate_fixed
from integrate.settings import IntegratorSettings
from integrate.trajectory import Trajectory
from metrics.norms import series_norm
from metrics.series import AXES, ConservationSeries, EnergySeries, conservation_error_series, energy_error_series, momentum_series


@dataclass(frozen=True, eq=False)
class RunResult:
    case: CaseStudy
    method: str
    trajectory: Trajectory
    energy: EnergySeries
    conservation: ConservationSeries
    momentum: np.ndarray
    report: MethodReport

    def csv_header(self) -> list[str]:
        sys = self.case.system
        m, k = sys.m, self.trajectory.us.shape[1]
        header = ["t", *(f"q{i}" for i in range(1, m + 1)), *(f"qd{i}" for i in range(1, m + 1))]
        header += [f"u{i}" for i in range(1, k + 1)]
        header.append("energy_drift")
        if sys.layout.r >= 1:
            header.append("kin_residual")
        if sys.layout.s >= 1:
            header.append("dyn_residual")
        header.append("momentum_drift")
        return header

    def csv_rows(self) -> np.ndarray:
        sys, traj = self.case.system, self.trajectory
        columns = [traj.times[:, None], traj.qs, traj.qdots, traj.us, self.energy.drift[:, None]]
        if sys.layout.r >= 1:
            columns.append(self.conservation.kinematic[:, None])
        if sys.layout.s >= 1:
            columns.append(self.conservation.dynamical[:, None])
        columns.append(self.conservation.momentum_drift[:, None])
        return np.hstack(columns)


def resolve_settings(case: CaseStudy, overrides: Optional[RunOverrides] = None) -> IntegratorSettings:
    """Case defaults with any override fields applied."""
    if overrides is None:
        return case.settings
    update = overrides.model_dump(exclude_none=True, exclude={"parameters"})
    try:
        return IntegratorSettings.model_validate({**case.settings.model_dump(), **update})
    except ValidationError as e:
        raise ConfigError("Invalid integration settings", context={"case": case.case_id, "errors": e.errors()}) from e


def metrics_constraint(case: CaseStudy) -> Optional[DynamicalConstraint]:
    """Dynamical constraint used for residual reporting, fixed at the initial state."""
    if case.system.layout.s == 0:
        return None
    return build_dynamical_constraint(case.system, case.t0, case.q0, case.qdot0)


def integrate_case(case: CaseStudy, method: str, settings: IntegratorSettings) -> tuple[Trajectory, float]:
    """Integrate one formulation; returns the observed trajectory and integration wall time."""
    formulation = case.formulation(method)
    z0 = formulation.initial_state(case.t0, case.q0, case.qdot0)
    z0 = formulation.pre_integrate(case.t0, z0)
    start = time.perf_counter()
    if settings.method == "adaptive":
        velocity = formulation.velocity if formulation.reconstructs_velocity else None
        raw = integrate_adaptive(formulation.safe_rhs, z0, settings, velocity=velocity)
    else:
        raw = integrate_fixed(formulation.safe_rhs, z0, settings)
    wall = time.perf_counter() - start
    trajectory = formulation.post_integrate(raw.with_views(formulation.unpack))
    return trajectory, wall


def run_method(case: CaseStudy, method: str, settings: Optional[IntegratorSettings] = None) -> RunResult:
    settings = settings or case.settings
    n_states, n_equations = case.card(method)
    log_info("Integration started.", case=case.case_id, method=method, t_final=settings.t_final, rtol=settings.rtol)
    trajectory, wall = integrate_case(case, method, settings)

    sys = case.system
    energy = energy_error_series(sys, trajectory)
    conservation = conservation_error_series(sys, metrics_constraint(case), trajectory, case.momentum_direction)
    momentum = momentum_series(sys, trajectory)
    axes = {}
    for axis in case.momentum_axes:
        component = momentum @ np.asarray(AXES[axis])
        axes[axis] = series_norm(component - component[0], reference=component[0])

    report = MethodReport(
        case=case.case_id,
        method=method,
        n_states=n_states,
        n_equations=n_equations,
        wall_seconds=wall,
        accepted_steps=trajectory.accepted_steps,
        rejected_steps=trajectory.rejected_steps,
        rhs_evaluations=trajectory.rhs_evaluations,
        settings=settings.model_dump(),
        norms=MethodNorms(
            energy_drift=series_norm(energy.drift, reference=energy.initial),
            kinematic_residual=series_norm(conservation.kinematic),
            dynamical_residual=series_norm(conservation.dynamical),
            momentum_drift=series_norm(conservation.momentum_drift, reference=conservation.momentum[0]),
            momentum_drift_axes=axes,
        ),
    )
    log_info(
        "Integration finished.",
        case=case.case_id,
        method=method,
        wall_seconds=round(wall, 3),
        steps=trajectory.accepted_steps,
    )
    return RunResult(
        case=case,
        method=method,
        trajectory=trajectory,
        energy=energy,
        conservation=conservation,
        momentum=momentum,
        report=report,
    )


async def compare_methods(
    case: CaseStudy,
    settings: Optional[IntegratorSettings] = None,
    methods: Sequence[str] = METHOD_IDS,
    threads: Optional[int] = None,
) -> list[RunResult]:
    """Run several formulations on one case, at most `threads` integrations at a time."""
    limit = asyncio.Semaphore(max(1, threads or CurrentConfig.THREADS))

    async def one(method: str) -> RunResult:
        async with limit:
            return await asyncio.to_thread(run_method, case, method, settings)

    return list(await asyncio.gather(*(one(m) for m in methods)))


def compare_report(case: CaseStudy, results: list[RunResult], settings: IntegratorSettings) -> CompareReport:
    return CompareReport(case=case.case_id, settings=settings.model_dump(), rows=[r.report for r in results])


def bench_methods(
    case: CaseStudy,
    settings: Optional[IntegratorSettings] = None,
    *,
    repeats: int = 20,
    methods: Sequence[str] = ("volterra-reduced", "lagrange"),
) -> BenchReport:
    """Median integration wall time per method over repeated runs."""
    settings = settings or case.settings
    medians = {}
    for method in methods:
        walls = [integrate_case(case, method, settings)[1] for _ in range(repeats)]
        medians[method] = statistics.median(walls)
        log_info("Benchmark method finished.", case=case.case_id, method=method, median=round(medians[method], 4))
    reduced_faster = medians.get("volterra-reduced", 0.0) <= min(medians.values())
    if not reduced_faster:
        log_warning("Reduced formulation was not the fastest on this machine.", case=case.case_id, medians=medians)
    return BenchReport(case=case.case_id, repeats=repeats, median_seconds=medians, reduced_faster=reduced_faster)

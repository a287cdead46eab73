# benchmark/verify_suite.py
"""
Invariant checks run by `verify`. Each check yields a CheckResult; the command exits 0
only when all of them pass.
"""
import math
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from benchmark.runner import integrate_case, metrics_constraint
from cases.case_study import CaseStudy
from cases.catalog import CASE_IDS, build_case
from core.config import CurrentConfig
from core.exceptions import VMBDError
from core.logger import log_info, log_warning
from formulations.cards import METHOD_IDS
from ignorable.definition import verify_definition1
from ignorable.dynamical_constraint import dynamical_constraint_eval
from integrate.dopri import dopri_step, integrate_adaptive
from integrate.settings import IntegratorSettings
from model.mechanics import constraint_matrices, derive_mass_decomposition, kinetic_energy
from model.numdiff import gradient
from quasivel.reduced_map import build_reduced_map

PERTURBATION = 0.05
DEFINITION_SAMPLES = 20
QUADRATIC_SAMPLES = 100
MAP_SAMPLES = 10
QUADRATIC_TOL = 1e-12
MAP_TOL = 1e-10
RESIDUAL_TOL = 1e-10
INDEPENDENCE_TOL = 1e-8
EQUIVALENCE_TOL = 1e-6
EQUIVALENCE_RTOL = 1e-10
EQUIVALENCE_ATOL = 1e-12
MIN_FD_ORDER = 2.0
MIN_INTEGRATOR_ORDER = 4.8
MIN_ADAPTIVE_ORDER = 4.5


class CheckResult(BaseModel):
    name: str
    case: Optional[str] = None
    passed: bool
    value: float = Field(..., description="Worst observed quantity.")
    limit: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = f"[{self.case}] " if self.case else ""
        text = f"{status}  {where}{self.name}: {self.value:.3e} (limit {self.limit:.1e})"
        return f"{text}  {self.detail}" if self.detail else text


class VerifyReport(BaseModel):
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [f"{c.case}:{c.name}" if c.case else c.name for c in self.checks if not c.passed]

    def summary(self) -> str:
        lines = [c.line() for c in self.checks]
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        if not self.passed:
            lines.append("failed: " + ", ".join(self.failed))
        return "\n".join(lines)


def _guarded(name: str, case_id: Optional[str], check: Callable[[], CheckResult | list[CheckResult]]) -> list[CheckResult]:
    """Run one check; a VMBDError raised inside it is a failure of that check."""
    try:
        result = check()
    except VMBDError as e:
        log_warning("Check raised.", check=name, case=case_id, error=str(e))
        return [CheckResult(name=name, case=case_id, passed=False, value=math.inf, limit=0.0, detail=str(e))]
    results = result if isinstance(result, list) else [result]
    for r in results:
        log_info("Check finished.", check=r.name, case=case_id, passed=r.passed)
    return results


def short_settings(case: CaseStudy, horizon: float, *, samples: int = 10) -> IntegratorSettings:
    return IntegratorSettings(
        t0=case.t0,
        t_final=case.t0 + horizon,
        sample_step=horizon / samples,
        rtol=EQUIVALENCE_RTOL,
        atol=EQUIVALENCE_ATOL,
    )


def perturbed_constraint_matrices(case: CaseStudy, t: float, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    (a, b) with the first row corrupted on the first ignorable column. Systems without
    kinematic constraints get a single planted row.
    """
    sys = case.system
    a, b = constraint_matrices(sys, t, q)
    if a.shape[0] == 0:
        a, b = np.zeros((1, sys.m)), np.zeros(1)
    a = a.copy()
    column = sys.layout.ignorable.start if sys.layout.s else 0
    a[0, column] += PERTURBATION
    return a, b


# ---- per-case checks ----

def check_definition1(case: CaseStudy) -> CheckResult:
    report = verify_definition1(case.system, case.sample_states(DEFINITION_SAMPLES, seed=1))
    rejected = [v for v in report.verdicts if v.name in report.advertised and not v.accepted]
    worst = max(
        (max(v.lagrangian_violation, v.constraint_violation, v.force_violation) for v in report.verdicts if v.name in report.advertised),
        default=0.0,
    )
    return CheckResult(
        name="definition1",
        case=case.case_id,
        passed=bool(report.advertised_ok),
        value=worst,
        limit=CurrentConfig.IGNORABLE_TOL,
        detail=f"accepted={report.accepted} advertised={report.advertised}" + (f" rejected={[v.name for v in rejected]}" if rejected else ""),
    )


def check_residuals(case: CaseStudy, horizon: float, *, perturb: bool = False) -> list[CheckResult]:
    """Reduced-method trajectory against a q' + b = 0 and M' q' + N' = 0 at every sample."""
    trajectory, _ = integrate_case(case, "volterra-reduced", short_settings(case, horizon))
    dc = metrics_constraint(case)
    kin = dyn = 0.0
    for t, q, qd in zip(trajectory.times, trajectory.qs, trajectory.qdots):
        a, b = perturbed_constraint_matrices(case, t, q) if perturb else constraint_matrices(case.system, t, q)
        kin = max(kin, float(np.max(np.abs(a @ qd + b), initial=0.0)))
        if dc is not None:
            dyn = max(dyn, float(np.max(np.abs(dynamical_constraint_eval(dc, t, q, qd)))))
    return [
        CheckResult(
            name="kinematic-residual",
            case=case.case_id,
            passed=bool(kin <= RESIDUAL_TOL),
            value=kin,
            limit=RESIDUAL_TOL,
            detail="constraint row corrupted" if perturb else "",
        ),
        CheckResult(
            name="dynamical-residual",
            case=case.case_id,
            passed=bool(dyn <= RESIDUAL_TOL),
            value=dyn,
            limit=RESIDUAL_TOL,
            detail="" if dc is not None else "s = 0",
        ),
    ]


def check_quadratic_form(case: CaseStudy) -> CheckResult:
    """Assembled M, N, T0 against the direct sum over bodies."""
    worst = 0.0
    for t, q, qd in case.sample_states(QUADRATIC_SAMPLES, seed=2):
        dec = derive_mass_decomposition(case.system, t, q, check=False)
        direct = kinetic_energy(case.system, t, q, qd)
        worst = max(worst, abs(dec.kinetic_energy(qd) - direct) / (1.0 + abs(direct)))
    return CheckResult(name="quadratic-form", case=case.case_id, passed=bool(worst <= QUADRATIC_TOL), value=worst, limit=QUADRATIC_TOL)


def check_augmented_map(case: CaseStudy) -> CheckResult:
    """[Y; M'; a] W = [I; 0; 0] and [Y; M'; a] X = -[Z; N'; b] for reduced and standard maps."""
    dc = metrics_constraint(case)
    worst = 0.0
    for t, q, _ in case.sample_states(MAP_SAMPLES, seed=3, spread=0.1):
        for qv, constraint in ((case.qv_reduced, dc), (case.qv_full, None)):
            rmap = build_reduced_map(case.system, qv, constraint, t, q)
            w_res, x_res = rmap.residuals()
            scale = 1.0 + np.linalg.norm(rmap.A, np.inf) * max(np.linalg.norm(rmap.W, np.inf), np.linalg.norm(rmap.X, np.inf))
            worst = max(worst, max(w_res, x_res) / scale)
    return CheckResult(name="augmented-map", case=case.case_id, passed=bool(worst <= MAP_TOL), value=worst, limit=MAP_TOL)


def check_ignorable_independence(case: CaseStudy) -> CheckResult:
    """Reduced right-hand side is unchanged when the ignorable coordinates are shifted."""
    sys = case.system
    if sys.layout.s == 0:
        return CheckResult(name="ignorable-independence", case=case.case_id, passed=True, value=0.0, limit=INDEPENDENCE_TOL, detail="s = 0")
    formulation = case.formulation("volterra-reduced")
    z0 = formulation.initial_state(case.t0, case.q0, case.qdot0)
    shifted = z0.copy()
    shifted[sys.layout.ignorable] += 0.5
    f0 = formulation.safe_rhs(case.t0, z0)
    f1 = formulation.safe_rhs(case.t0, shifted)
    worst = float(np.max(np.abs(f1 - f0)) / (1.0 + np.max(np.abs(f0))))
    return CheckResult(name="ignorable-independence", case=case.case_id, passed=bool(worst <= INDEPENDENCE_TOL), value=worst, limit=INDEPENDENCE_TOL)


def check_cross_method(case: CaseStudy, horizon: float, methods: Sequence[str] = METHOD_IDS) -> CheckResult:
    """q-trajectories of every formulation agree with the first one componentwise."""
    settings = short_settings(case, horizon)
    reference = integrate_case(case, methods[0], settings)[0].qs
    worst, worst_method = 0.0, methods[0]
    for method in methods[1:]:
        qs = integrate_case(case, method, settings)[0].qs
        gap = float(np.max(np.abs(qs - reference)))
        if gap > worst:
            worst, worst_method = gap, method
    return CheckResult(
        name="cross-method",
        case=case.case_id,
        passed=bool(worst <= EQUIVALENCE_TOL),
        value=worst,
        limit=EQUIVALENCE_TOL,
        detail=f"largest gap {methods[0]} vs {worst_method} over {horizon:g} s",
    )


# ---- convergence orders ----

def _smooth_scalar(t: float, q: np.ndarray) -> float:
    return float(np.sin(q[0]) * np.exp(0.5 * q[1]) + np.cos(t * q[1]))


def _smooth_gradient(t: float, q: np.ndarray) -> np.ndarray:
    return np.array([np.cos(q[0]) * np.exp(0.5 * q[1]), 0.5 * np.sin(q[0]) * np.exp(0.5 * q[1]) - t * np.sin(t * q[1])])


def observed_fd_order(scales: Sequence[float] = (4e3, 2e3, 1e3)) -> float:
    """Slope of the gradient error against step size on a smooth map (last halving)."""
    t, q = 0.3, np.array([0.7, -0.4])
    exact = _smooth_gradient(t, q)
    errors = [float(np.max(np.abs(gradient(_smooth_scalar, t, q, step_scale=s) - exact))) for s in scales]
    return math.log(errors[-2] / errors[-1]) / math.log(scales[-2] / scales[-1])


def observed_fixed_step_order(steps: Sequence[float] = (0.2, 0.1, 0.05)) -> float:
    """Slope of the global error at t = 1 for y' = -y driven with fixed Dormand-Prince steps."""
    def rhs(t, y):
        return -y

    errors = []
    for h in steps:
        n = round(1.0 / h)
        y = np.array([1.0])
        f = None
        for k in range(n):
            y, _, K = dopri_step(rhs, k * h, y, h, f)
            f = K[6]
        errors.append(abs(float(y[0]) - math.exp(-1.0)))
    return math.log(errors[-2] / errors[-1]) / math.log(steps[-2] / steps[-1])


def observed_adaptive_order(rtols: Sequence[float] = (1e-5, 1e-7, 1e-9, 1e-11), span: float = 20.0) -> float:
    """
    Least-squares slope of log end-point error against log mean accepted step for the
    adaptive pair on y'' = -y, one run per tolerance.
    """
    def rhs(t, z):
        return np.array([z[1], -z[0]])

    exact = np.array([math.cos(span), -math.sin(span)])
    steps, errors = [], []
    for rtol in rtols:
        settings = IntegratorSettings(t_final=span, sample_step=span, rtol=rtol, atol=1e-3 * rtol)
        traj = integrate_adaptive(rhs, np.array([1.0, 0.0]), settings)
        steps.append(span / traj.accepted_steps)
        errors.append(float(np.linalg.norm(traj.final_state - exact)))
    return float(np.polyfit(np.log(steps), np.log(errors), 1)[0])


def check_fd_order() -> CheckResult:
    order = observed_fd_order()
    return CheckResult(name="fd-order", passed=bool(order >= MIN_FD_ORDER), value=order, limit=MIN_FD_ORDER, detail="expected about 4")


def check_fixed_step_order() -> CheckResult:
    order = observed_fixed_step_order()
    return CheckResult(name="fixed-step-order", passed=bool(order >= MIN_INTEGRATOR_ORDER), value=order, limit=MIN_INTEGRATOR_ORDER, detail="expected about 5")


def check_adaptive_order() -> CheckResult:
    order = observed_adaptive_order()
    return CheckResult(name="adaptive-order", passed=bool(order >= MIN_ADAPTIVE_ORDER), value=order, limit=MIN_ADAPTIVE_ORDER, detail="expected about 5")


# ---- suite ----

def case_checks(case: CaseStudy, *, horizon: float = 1.0, perturb: bool = False) -> list[CheckResult]:
    cid = case.case_id
    checks = [
        ("definition1", lambda: check_definition1(case)),
        ("quadratic-form", lambda: check_quadratic_form(case)),
        ("augmented-map", lambda: check_augmented_map(case)),
        ("ignorable-independence", lambda: check_ignorable_independence(case)),
        ("kinematic-residual", lambda: check_residuals(case, horizon, perturb=perturb)),
        ("cross-method", lambda: check_cross_method(case, horizon)),
    ]
    return [result for name, check in checks for result in _guarded(name, cid, check)]


def run_suite(
    case_ids: Optional[Iterable[str]] = None,
    *,
    horizon: float = 1.0,
    perturb: bool = False,
    fd_order: bool = False,
    integrator_order: bool = False,
) -> VerifyReport:
    """All per-case checks for the selected cases plus the requested convergence sweeps."""
    report = VerifyReport()
    for case_id in case_ids or CASE_IDS:
        report.checks.extend(case_checks(build_case(case_id), horizon=horizon, perturb=perturb))
    if fd_order:
        report.checks.extend(_guarded("fd-order", None, check_fd_order))
    if integrator_order:
        report.checks.extend(_guarded("fixed-step-order", None, check_fixed_step_order))
        report.checks.extend(_guarded("adaptive-order", None, check_adaptive_order))
    log_info("Verify suite finished.", checks=len(report.checks), failed=len(report.failed))
    return report

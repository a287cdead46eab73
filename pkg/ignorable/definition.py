# ignorable/definition.py
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel, Field

from core.config import CurrentConfig
from core.exceptions import ModelError
from core.logger import log_debug
from model.mechanics import constraint_matrices, lagrangian, nonconservative_forces
from model.numdiff import gradient
from model.system import MultibodySystem

Sample = tuple[float, np.ndarray, np.ndarray]


class CoordinateVerdict(BaseModel):
    """Definition-1 evidence for one coordinate, maximised over all samples."""

    name: str
    index: int
    lagrangian_violation: float = Field(..., ge=0.0)
    constraint_violation: float = Field(..., ge=0.0)
    force_violation: float = Field(..., ge=0.0)
    lagrangian_independent: bool
    constraint_column_zero: bool
    force_zero: bool

    @property
    def accepted(self) -> bool:
        return self.lagrangian_independent and self.constraint_column_zero and self.force_zero


class Definition1Report(BaseModel):
    system: str
    samples: int
    advertised: list[str]
    verdicts: list[CoordinateVerdict]

    @property
    def accepted(self) -> list[str]:
        return [v.name for v in self.verdicts if v.accepted]

    @property
    def advertised_ok(self) -> bool:
        """True iff the accepted set is exactly the layout's last s coordinates."""
        return self.accepted == self.advertised

    def verdict(self, name: str) -> CoordinateVerdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


def verify_definition1(
    sys: MultibodySystem,
    samples: Sequence[Sample] | Iterable[Sample],
    *,
    tol: float | None = None,
) -> Definition1Report:
    """
    Check the three ignorability conditions for every coordinate:
    dL/dq_j = 0, column j of a is zero, Q_nc,j = 0.
    Each maximum is accepted iff it is at most tol * (1 + scale), with scale the
    largest magnitude of the same quantity over all coordinates and samples.
    """
    tol = CurrentConfig.IGNORABLE_TOL if tol is None else tol
    samples = list(samples)
    if not samples:
        raise ModelError("definition check needs at least one sample", context={"system": sys.name})

    m = sys.m
    dL = np.zeros((len(samples), m))
    a_cols = np.zeros((len(samples), m))
    q_nc = np.zeros((len(samples), m))
    for k, (t, q, qdot) in enumerate(samples):
        q = np.asarray(q, dtype=float)
        qdot = np.asarray(qdot, dtype=float)
        dL[k] = gradient(lambda tt, qq: lagrangian(sys, tt, qq, qdot), t, q)
        a, _ = constraint_matrices(sys, t, q)
        if a.size:
            a_cols[k] = np.max(np.abs(a), axis=0)
        q_nc[k] = np.abs(nonconservative_forces(sys, t, q, qdot))

    dL = np.abs(dL)
    scales = [float(np.max(x)) for x in (dL, a_cols, q_nc)]
    verdicts = []
    for j, name in enumerate(sys.layout.names):
        worst = [float(np.max(x[:, j])) for x in (dL, a_cols, q_nc)]
        ok = [w <= tol * (1.0 + s) for w, s in zip(worst, scales)]
        verdicts.append(
            CoordinateVerdict(
                name=name,
                index=j,
                lagrangian_violation=worst[0],
                constraint_violation=worst[1],
                force_violation=worst[2],
                lagrangian_independent=ok[0],
                constraint_column_zero=ok[1],
                force_zero=ok[2],
            )
        )

    report = Definition1Report(
        system=sys.name,
        samples=len(samples),
        advertised=list(sys.layout.ignorable_names),
        verdicts=verdicts,
    )
    log_debug("Definition check finished.", system=sys.name, accepted=report.accepted)
    return report

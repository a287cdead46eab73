# model/linalg.py
"""Pivoted dense factorizations with a condition-number guard."""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from core.config import CurrentConfig
from core.exceptions import VMBDError


@dataclass(frozen=True, eq=False)
class CheckedLU:
    lu: np.ndarray
    piv: np.ndarray
    condition: float

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        if rhs.size == 0:
            return np.zeros(rhs.shape)
        return lu_solve((self.lu, self.piv), rhs, check_finite=False)


def condition_estimate(lu: np.ndarray, anorm: float) -> float:
    """1-norm condition number estimated from an LU factor."""
    if anorm == 0.0:
        return np.inf
    rcond, info = dgecon(lu, anorm, norm="1")
    if info != 0 or not rcond > 0.0:
        return np.inf
    return 1.0 / rcond


def factorize(
    A: np.ndarray,
    *,
    error: type[VMBDError],
    what: str,
    threshold: float | None = None,
    estimate: bool = True,
    **context,
) -> CheckedLU:
    """
    LU-factorize a square matrix.
    Raises `error` when the estimated condition number exceeds the threshold. With
    estimate=False the condition estimate is skipped and reported as nan; only exact
    singularity is caught then.
    """
    A = np.asarray(A, dtype=float)
    threshold = CurrentConfig.SINGULAR_CONDITION if threshold is None else threshold
    if not np.all(np.isfinite(A)):
        raise error(f"{what} has non-finite entries", context=context)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(A, check_finite=False)
    if not estimate:
        if not np.all(np.diag(lu)):
            raise error(f"{what} is singular", context=context)
        return CheckedLU(lu=lu, piv=piv, condition=np.nan)
    condition = condition_estimate(lu, float(np.linalg.norm(A, 1)))
    if condition > threshold:
        raise error(
            f"{what} is singular or ill-conditioned",
            context={**context, "condition": condition, "threshold": threshold},
        )
    return CheckedLU(lu=lu, piv=piv, condition=condition)


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix: skew(v) @ w == cross(v, w)."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])

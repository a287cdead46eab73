# core/base_formulation.py
from abc import ABC, abstractmethod
from typing import Any, NamedTuple, Optional

import numpy as np

from core.config import CurrentConfig
from core.exceptions import FormulationError, InconsistentInitialState, VMBDError, VMBDRuntimeError
from core.logger import log_debug, log_error


class StateView(NamedTuple):
    """Physical quantities carried by one state vector."""

    q: np.ndarray
    qdot: np.ndarray
    u: np.ndarray
    work: float


class BaseFormulation(ABC):
    """
    Abstract equation-of-motion engine.
    A formulation turns a MultibodySystem into a first-order system z' = f(t, z); the
    accumulated non-conservative work rides as the last state when the system tracks work.
    """

    name: str = "base"
    description: str = "Generic formulation"
    # True when qdot is rebuilt from the state rather than carried in it
    reconstructs_velocity: bool = False

    def __init__(self, system: Any, *, qv_full: Any = None, qv_reduced: Any = None):
        self.system = system
        self.qv_full = qv_full
        self.qv_reduced = qv_reduced

    # ---- counts ----
    @classmethod
    @abstractmethod
    def base_card(cls, layout: Any) -> tuple[int, int]:
        """(states, equations) without the work state."""

    @classmethod
    def card_for(cls, system: Any) -> tuple[int, int]:
        n_states, n_equations = cls.base_card(system.layout)
        return n_states + int(system.forces.tracks_work), n_equations

    def card(self) -> tuple[int, int]:
        return self.card_for(self.system)

    @property
    def tracks_work(self) -> bool:
        return self.system.forces.tracks_work

    # ---- core interface ----
    @abstractmethod
    def initial_state(self, t0: float, q0: np.ndarray, qdot0: np.ndarray) -> np.ndarray:
        """State vector at t0 built from generalized coordinates and velocities."""

    @abstractmethod
    def rhs(self, t: float, z: np.ndarray) -> np.ndarray:
        """State derivative."""

    @abstractmethod
    def unpack(self, t: float, z: np.ndarray) -> StateView:
        """Recover (q, qdot, u, work) from a state vector."""

    def velocity(self, t: float, z: np.ndarray) -> np.ndarray:
        """Generalized velocities encoded by a state."""
        return self.unpack(t, z).qdot

    # ---- optional lifecycle hooks ----
    def pre_integrate(self, t0: float, z0: np.ndarray) -> np.ndarray:
        return z0

    def post_integrate(self, trajectory: Any) -> Any:
        return trajectory

    # ---- safe wrapper ----
    def safe_rhs(self, t: float, z: np.ndarray) -> np.ndarray:
        """rhs with numpy/scipy failures converted into VMBDError subclasses."""
        try:
            return self.rhs(t, z)
        except VMBDError:
            raise
        except np.linalg.LinAlgError as e:
            log_error(f"[{self.name}] linear algebra failure: {e}", t=t)
            raise FormulationError(str(e), context={"formulation": self.name, "t": t}) from e
        except Exception as e:
            log_error(f"[{self.name}] unexpected error: {e}", t=t)
            raise VMBDRuntimeError(str(e), context={"formulation": self.name, "t": t}) from e

    # ---- helpers ----
    def check_consistency(self, residual: np.ndarray, qdot0: np.ndarray, what: str, tol: Optional[float] = None):
        tol = CurrentConfig.CONSISTENCY_TOL if tol is None else tol
        worst = float(np.max(np.abs(residual), initial=0.0))
        limit = tol * (1.0 + float(np.max(np.abs(qdot0), initial=0.0)))
        if worst > limit:
            raise InconsistentInitialState(
                f"initial velocities violate the {what}",
                context={"formulation": self.name, "residual": worst, "limit": limit},
            )
        log_debug(f"[{self.name}] initial state consistent", what=what, residual=worst)

    def split_work(self, z: np.ndarray) -> tuple[np.ndarray, float]:
        if self.tracks_work:
            return z[:-1], float(z[-1])
        return z, 0.0

    def with_work(self, core: np.ndarray, work: float | None) -> np.ndarray:
        if not self.tracks_work:
            return core
        return np.append(core, 0.0 if work is None else work)

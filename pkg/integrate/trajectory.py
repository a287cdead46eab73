# integrate/trajectory.py
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from core.exceptions import NonFiniteEvaluation

# (t, z) -> object with q, qdot, u, work
Observer = Callable[[float, np.ndarray], object]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution. Physical channels are filled when an observer is supplied."""

    times: np.ndarray
    states: np.ndarray
    qs: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    qdots: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    us: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    work: np.ndarray = field(default_factory=lambda: np.zeros(0))
    accepted_steps: int = 0
    rejected_steps: int = 0
    rhs_evaluations: int = 0

    def __len__(self) -> int:
        return self.times.size

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @classmethod
    def build(
        cls,
        times: np.ndarray,
        states: np.ndarray,
        observe: Optional[Observer] = None,
        **stats,
    ) -> "Trajectory":
        if not np.all(np.isfinite(states)):
            bad = int(np.argmax(~np.all(np.isfinite(states), axis=1)))
            raise NonFiniteEvaluation("trajectory holds non-finite states", context={"t": float(times[bad])})
        trajectory = cls(times=times, states=states, **stats)
        return trajectory if observe is None else trajectory.with_views(observe)

    def with_views(self, observe: Observer) -> "Trajectory":
        """Copy with q, qdot, u and work recovered from every sampled state."""
        views = [observe(t, z) for t, z in zip(self.times, self.states)]
        return replace(
            self,
            qs=np.array([v.q for v in views]),
            qdots=np.array([v.qdot for v in views]),
            us=np.array([v.u for v in views]).reshape(len(views), -1),
            work=np.array([v.work for v in views], dtype=float),
        )

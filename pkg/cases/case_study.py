# cases/case_study.py
from dataclasses import dataclass

import numpy as np

from core.base_formulation import BaseFormulation
from core.registry import FormulationRegistry
from formulations.cards import method_card, register_formulations
from integrate.settings import IntegratorSettings
from model.system import MultibodySystem
from quasivel.quasi_velocity import QuasiVelocityDef


@dataclass(frozen=True, eq=False)
class CaseStudy:
    case_id: str
    title: str
    system: MultibodySystem
    qv_reduced: QuasiVelocityDef
    qv_full: QuasiVelocityDef
    t0: float
    q0: np.ndarray
    qdot0: np.ndarray
    settings: IntegratorSettings
    momentum_direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    momentum_axes: tuple[str, ...] = ("x",)

    def formulation(self, method: str) -> BaseFormulation:
        if FormulationRegistry.get(method) is None:
            register_formulations()
        return FormulationRegistry.create_instance(
            method,
            system=self.system,
            qv_full=self.qv_full,
            qv_reduced=self.qv_reduced,
        )

    def card(self, method: str) -> tuple[int, int]:
        return method_card(method, self.system)

    def sample_states(self, n: int, *, seed: int = 0, spread: float = 0.3) -> list[tuple[float, np.ndarray, np.ndarray]]:
        """Random states around the initial one (all coordinates perturbed)."""
        rng = np.random.default_rng(seed)
        m = self.system.m
        out = []
        for _ in range(n):
            q = self.q0 + rng.uniform(-spread, spread, m)
            qdot = self.qdot0 + rng.normal(0.0, 1.0, m)
            out.append((self.t0 + float(rng.uniform(0.0, 1.0)), q, qdot))
        return out

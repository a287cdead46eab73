# cases/catalog.py
from typing import Callable

from cases.boom_satellite import build_boom_satellite
from cases.cart_pendulum import build_cart_pendulum
from cases.case_study import CaseStudy
from cases.three_body_spacecraft import build_three_body_spacecraft
from core.registry import CaseRegistry

CASE_BUILDERS: dict[str, Callable[..., CaseStudy]] = {
    "cart": build_cart_pendulum,
    "tribody": build_three_body_spacecraft,
    "satellite": build_boom_satellite,
}

CASE_IDS: tuple[str, ...] = tuple(CASE_BUILDERS)


def register_cases() -> None:
    for name, builder in CASE_BUILDERS.items():
        CaseRegistry.register(name, builder, override=True)


def build_case(case_id: str, **overrides) -> CaseStudy:
    if CaseRegistry.get(case_id) is None:
        register_cases()
    return CaseRegistry.create_instance(case_id, **overrides)

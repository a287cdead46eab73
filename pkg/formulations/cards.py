# formulations/cards.py
from core.base_formulation import BaseFormulation
from core.exceptions import RegistryError
from core.registry import FormulationRegistry
from model.system import MultibodySystem
from formulations.lagrange import LagrangeFormulation
from formulations.maggi import MaggiFormulation
from formulations.volterra import ReducedVolterraFormulation, StandardVolterraFormulation

# table order used by compare reports
FORMULATIONS: dict[str, type[BaseFormulation]] = {
    LagrangeFormulation.name: LagrangeFormulation,
    MaggiFormulation.name: MaggiFormulation,
    StandardVolterraFormulation.name: StandardVolterraFormulation,
    ReducedVolterraFormulation.name: ReducedVolterraFormulation,
}

METHOD_IDS: tuple[str, ...] = tuple(FORMULATIONS)


def register_formulations() -> None:
    for name, cls in FORMULATIONS.items():
        FormulationRegistry.register(name, cls, override=True)


def method_card(method: str, sys: MultibodySystem) -> tuple[int, int]:
    """(number of state variables, number of equations) of a method on a system."""
    try:
        cls = FORMULATIONS[method]
    except KeyError:
        raise RegistryError(f"unknown method '{method}'", context={"available": list(METHOD_IDS)}) from None
    return cls.card_for(sys)

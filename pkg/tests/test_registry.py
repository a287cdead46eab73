from typing import Any, Dict

import pytest

from core.exceptions import ModelError, RegistryError
from core.registry import BaseRegistry, FormulationRegistry
from formulations.cards import register_formulations
from formulations.volterra import ReducedVolterraFormulation


class ScratchRegistry(BaseRegistry):
    component_type = "scratch"
    _registry: Dict[str, Any] = {}


@pytest.fixture(autouse=True)
def empty_scratch():
    ScratchRegistry.clear()
    yield
    ScratchRegistry.clear()


def test_register_and_create():
    ScratchRegistry.register("pair", lambda a, b: (a, b))
    assert ScratchRegistry.list() == ["pair"]
    assert ScratchRegistry.create_instance("pair", a=1, b=2) == (1, 2)


def test_duplicate_registration():
    ScratchRegistry.register("x", dict)
    with pytest.raises(RegistryError):
        ScratchRegistry.register("x", list)
    ScratchRegistry.register("x", list, override=True)
    assert ScratchRegistry.get("x") is list


def test_missing_component_lists_available():
    ScratchRegistry.register("known", dict)
    with pytest.raises(RegistryError) as info:
        ScratchRegistry.require("unknown")
    assert info.value.context["available"] == ["known"]


def test_construction_errors_are_wrapped():
    ScratchRegistry.register("needs-args", lambda a: a)
    with pytest.raises(RegistryError):
        ScratchRegistry.create_instance("needs-args")


def test_domain_errors_pass_through():
    def failing():
        raise ModelError("bad model")

    ScratchRegistry.register("failing", failing)
    with pytest.raises(ModelError):
        ScratchRegistry.create_instance("failing")


def test_registries_do_not_share_state():
    ScratchRegistry.register("only-here", dict)
    assert FormulationRegistry.get("only-here") is None


def test_formulations_registered_by_method_id():
    register_formulations()
    assert FormulationRegistry.get("volterra-reduced") is ReducedVolterraFormulation
    assert set(FormulationRegistry.list()) >= {"lagrange", "maggi", "kane", "volterra-reduced"}

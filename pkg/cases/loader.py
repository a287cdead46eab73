# cases/loader.py
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from core.config import CurrentConfig
from core.exceptions import ConfigError
from core.logger import log_debug


class InitialConditions(BaseModel):
    t0: float = 0.0
    q: list[float]
    qdot: list[float]

    @field_validator("qdot")
    @classmethod
    def same_length(cls, v, info):
        q = info.data.get("q")
        if q is not None and len(v) != len(q):
            raise ValueError("q and qdot must have the same length")
        return v


class RunDefaults(BaseModel):
    t_final: float = Field(..., gt=0.0)
    sample_step: float = Field(..., gt=0.0)


class CaseFile(BaseModel):
    """Contents of data/cases/<id>.yaml."""

    id: str
    title: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    initial: InitialConditions
    settings: RunDefaults
    momentum_direction: list[float] = Field(default_factory=lambda: [1.0, 0.0, 0.0])
    momentum_axes: list[str] = Field(default_factory=lambda: ["x"])

    @field_validator("momentum_direction")
    @classmethod
    def three_components(cls, v):
        if len(v) != 3:
            raise ValueError("momentum_direction needs three components")
        return v


def _read(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise ConfigError(f"Case file not found: {path}", context={"path": str(path)})
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}", context={"path": str(path), "error": str(e)}) from e


@lru_cache(maxsize=None)
def _load_cached(path: str) -> CaseFile:
    data = _read(Path(path))
    try:
        case = CaseFile.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid case file {path}", context={"errors": e.errors()}) from e
    log_debug("Case file loaded.", case=case.id, path=path)
    return case


def load_case_file(case_id: str, cases_dir: Optional[Path] = None) -> CaseFile:
    base = Path(cases_dir) if cases_dir is not None else CurrentConfig.CASES_DIR
    return _load_cached(str(base / f"{case_id}.yaml"))


def merge_parameters(model: type[BaseModel], case: CaseFile, overrides: Dict[str, Any]):
    """Validate YAML parameters with keyword overrides applied on top."""
    unknown = set(overrides) - set(model.model_fields)
    if unknown:
        raise ConfigError("Unknown case parameters", context={"case": case.id, "unknown": sorted(unknown)})
    try:
        return model.model_validate({**case.parameters, **overrides})
    except ValidationError as e:
        raise ConfigError(f"Invalid parameters for case '{case.id}'", context={"errors": e.errors()}) from e

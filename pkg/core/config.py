import os
from dotenv import load_dotenv
from pathlib import Path
from typing import Any, Dict

load_dotenv()


class BaseConfig:
    """Base configuration shared across environments."""

    # ---- General ----
    ENV: str = os.getenv("APP_ENV", "dev")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # ---- Benchmark execution ----
    THREADS: int = max(1, int(os.getenv("VMBD_THREADS", "1")))  # compare-mode parallelism cap
    DEFAULT_RTOL: float = float(os.getenv("VMBD_RTOL", "1e-8"))
    DEFAULT_ATOL: float = float(os.getenv("VMBD_ATOL", "1e-10"))
    MAX_STEPS: int = int(os.getenv("VMBD_MAX_STEPS", "2000000"))

    # ---- Numerical tolerances ----
    SINGULAR_CONDITION: float = 1e12  # augmented / reduced matrix condition ceiling
    IGNORABLE_TOL: float = 1e-9  # ignorability acceptance, scaled by magnitude
    CONSISTENCY_TOL: float = 1e-9  # initial-state constraint residual
    GIMBAL_MARGIN: float = 0.01  # rad, distance kept from |theta| = pi/2

    # ---- Paths ----
    PROJECT_ROOT: Path = Path(__file__).resolve().parent.parent
    DATA_DIR: Path = PROJECT_ROOT / "data"
    CASES_DIR: Path = DATA_DIR / "cases"
    OUTPUT_DIR: Path = Path(os.getenv("VMBD_OUTPUT_DIR", "results"))

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Return all config as dictionary (for debugging or introspection)."""
        return {k: getattr(cls, k) for k in dir(cls) if k.isupper()}

    @classmethod
    def summary(cls) -> str:
        """Pretty-print current configuration summary."""
        env = cls.as_dict()
        lines = [f"{k} = {v}" for k, v in env.items()]
        return "\n".join(lines)


# ---- Environment-specific Config ----

class DevConfig(BaseConfig):
    LOG_LEVEL = os.getenv("LOG_LEVEL", "DEBUG")


class ProdConfig(BaseConfig):
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")


# ---- Active Config Selector ----

def get_config() -> type[BaseConfig]:
    env = os.getenv("APP_ENV", "dev").lower()
    return ProdConfig if env == "prod" else DevConfig


# Alias for global use
CurrentConfig = get_config()

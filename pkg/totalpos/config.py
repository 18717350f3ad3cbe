"""
Runtime settings.

Defaults live in Settings; any field can be overridden through a
TOTALPOS_<FIELD> environment variable or a .env file in the working
directory (see .env.example).
"""

import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache

from dotenv import load_dotenv

from totalpos.errors import ConfigError


ENV_PREFIX = "TOTALPOS_"


@dataclass(frozen=True)
class Settings:
    """Numeric defaults shared by every module."""

    tol: float = 1e-9
    eig_tol: float = 1e-7
    compound_cap: int = 10**6
    mc_budget: int = 10_000
    seed: int = 1729
    power_max_iter: int = 100_000
    power_tol: float = 1e-12
    combo_samples: int = 200
    angle_samples: int = 200
    vdp_trials: int = 10_000


def load_settings(dotenv_path: str = None) -> Settings:
    """
    Build Settings from defaults, .env and the process environment.

    Args:
        dotenv_path: Explicit .env file (default: search from the working directory)

    Returns:
        Settings instance

    Raises:
        ConfigError: If a variable cannot be converted to the field type
    """
    load_dotenv(dotenv_path)

    overrides = {}
    for field in fields(Settings):
        raw = os.getenv(ENV_PREFIX + field.name.upper())
        if raw is None or raw.strip() == "":
            continue
        cast = int if field.type in (int, "int") else float
        try:
            # ints may be written as 1e6
            value = cast(float(raw)) if cast is int else cast(raw)
        except ValueError:
            raise ConfigError(f"{ENV_PREFIX}{field.name.upper()}={raw!r} is not a valid {cast.__name__}")
        if value < 0 or (value == 0 and field.name != "seed"):
            raise ConfigError(f"{ENV_PREFIX}{field.name.upper()} must be positive, got {raw!r}")
        overrides[field.name] = value

    return replace(Settings(), **overrides)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, loaded once."""
    return load_settings()


def resolve(value, name: str):
    """Return value, or the configured default for `name` when value is None."""
    return getattr(get_settings(), name) if value is None else value

#!/usr/bin/env python3
"""
Run settings for the verification engine.

Settings come from three layers, later layers winning: built-in defaults,
environment variables (optionally loaded from a ``.env`` file), and explicit
overrides (a geometry file's ``[run]`` table, then command-line flags).

Environment variables:
    WEYLCHECK_POINTS     number of sample points per task (default 64)
    WEYLCHECK_SEED       Halton offset (default 0)
    WEYLCHECK_TOL        relative tolerance of the residual policy (default 1e-7)
    WEYLCHECK_WORKERS    point-level worker threads (default 1, serial)
    WEYLCHECK_FLOOR      nondegeneracy floor for determinants (default 1e-10)
    WEYLCHECK_LOG_LEVEL  logging level name (default WARNING)

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import os
from dataclasses import dataclass, replace, asdict
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .errors import ConfigError


DEFAULT_POINTS = 64
DEFAULT_SEED = 0
DEFAULT_TOL = 1e-7
DEFAULT_WORKERS = 1
DEFAULT_FLOOR = 1e-10
DEFAULT_LOG_LEVEL = "WARNING"

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class RunSettings:
    """Immutable per-run settings shared by every task of a run."""

    points: int = DEFAULT_POINTS
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    workers: int = DEFAULT_WORKERS
    floor: float = DEFAULT_FLOOR
    log_level: str = DEFAULT_LOG_LEVEL
    orientation: Optional[int] = None

    def __post_init__(self):
        if self.points < 1:
            raise ConfigError(f"points must be >= 1, got {self.points}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not self.floor > 0:
            raise ConfigError(f"floor must be positive, got {self.floor}")
        if self.log_level not in _LOG_LEVELS:
            raise ConfigError(f"log level must be one of {', '.join(_LOG_LEVELS)}, got {self.log_level}")
        if self.orientation not in (None, 1, -1):
            raise ConfigError(f"orientation must be +1 or -1, got {self.orientation}")

    def with_overrides(self, **overrides: Any) -> "RunSettings":
        """Return a copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self

    def echo(self) -> Dict[str, Any]:
        """Settings as a plain dict, for the config echo of reports."""
        return asdict(self)


def _read(name: str, cast, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigError(f"environment variable {name}={raw!r} is not a valid {cast.__name__}")


def load_config(env_file: Optional[str] = None) -> RunSettings:
    """
    Load run settings from the environment.

    Args:
        env_file (Optional[str]): Explicit ``.env`` path; the default search
            of python-dotenv is used when omitted.

    Returns:
        RunSettings: Validated settings.

    Raises:
        ConfigError: If a variable is present but malformed.
    """
    if env_file:
        load_dotenv(env_file)
    else:
        load_dotenv()

    return RunSettings(
        points=_read("WEYLCHECK_POINTS", int, DEFAULT_POINTS),
        seed=_read("WEYLCHECK_SEED", int, DEFAULT_SEED),
        tol=_read("WEYLCHECK_TOL", float, DEFAULT_TOL),
        workers=_read("WEYLCHECK_WORKERS", int, DEFAULT_WORKERS),
        floor=_read("WEYLCHECK_FLOOR", float, DEFAULT_FLOOR),
        log_level=_read("WEYLCHECK_LOG_LEVEL", str, DEFAULT_LOG_LEVEL).upper(),
    )

"""Settings dataclasses for mimowpt configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any


def _parse_float(value: str | None, default: float) -> float:
    """Parse float from string, falling back to default."""
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        return default


def _parse_int(value: str | None, default: int) -> int:
    """Parse int from string, falling back to default."""
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def _parse_backends(value: str | None) -> tuple[str, ...]:
    """Parse comma-separated backend list."""
    if not value:
        return ("CLARABEL", "SCS")
    return tuple(part.strip().upper() for part in value.split(",") if part.strip())


@dataclass
class LoggingSettings:
    """Logging configuration."""

    level: str = "INFO"
    format: str = "json"  # "json" or "console"


@dataclass
class SolverSettings:
    """Conic backend and SCA configuration."""

    backends: tuple[str, ...] = ("CLARABEL", "SCS")
    max_iter: int = 500
    tol_feas: float = 1e-7
    tol_psd: float = 1e-9
    tol_rank_one: float = 1e-6
    eps_sca: float = 1e-3  # relative change of h between SCA iterations
    sca_max_iter: int = 200
    n_restarts: int = 3


@dataclass
class GridSettings:
    """Power grid for the two-point search."""

    step: float = 0.1  # watt
    size: int = 1000  # number of steps, grid has size + 1 points


@dataclass
class Settings:
    """Main configuration for the optimizer."""

    logging: LoggingSettings = field(default_factory=LoggingSettings)
    solver: SolverSettings = field(default_factory=SolverSettings)
    grid: GridSettings = field(default_factory=GridSettings)
    workers: int = 1
    seed: int = 0

    @classmethod
    def from_env(cls) -> Settings:
        """Create settings from environment variables."""
        return cls(
            logging=LoggingSettings(
                level=os.getenv("MIMOWPT_LOG_LEVEL", "INFO"),
                format=os.getenv("MIMOWPT_LOG_FORMAT", "json"),
            ),
            solver=SolverSettings(
                backends=_parse_backends(os.getenv("MIMOWPT_SOLVERS")),
                max_iter=_parse_int(os.getenv("MIMOWPT_SOLVER_MAX_ITER"), 500),
                eps_sca=_parse_float(os.getenv("MIMOWPT_EPS_SCA"), 1e-3),
                n_restarts=_parse_int(os.getenv("MIMOWPT_RESTARTS"), 3),
            ),
            grid=GridSettings(
                step=_parse_float(os.getenv("MIMOWPT_GRID_STEP"), 0.1),
                size=_parse_int(os.getenv("MIMOWPT_GRID_SIZE"), 1000),
            ),
            workers=max(1, _parse_int(os.getenv("MIMOWPT_WORKERS"), 1)),
            seed=_parse_int(os.getenv("MIMOWPT_SEED"), 0),
        )

    def merge(self, overrides: dict[str, Any]) -> Settings:
        """Create new settings with overrides applied.

        Nested sections (``logging``, ``solver``, ``grid``) accept dicts and
        only the given keys are replaced.
        """
        import copy

        new_settings = copy.deepcopy(self)

        for key, value in overrides.items():
            if not hasattr(new_settings, key):
                continue
            section = getattr(new_settings, key)
            if key in ("logging", "solver", "grid") and isinstance(value, dict):
                for sub_key, sub_value in value.items():
                    if hasattr(section, sub_key):
                        if sub_key == "backends" and isinstance(sub_value, (list, str)):
                            sub_value = (
                                _parse_backends(sub_value)
                                if isinstance(sub_value, str)
                                else tuple(str(b).upper() for b in sub_value)
                            )
                        setattr(section, sub_key, sub_value)
            else:
                setattr(new_settings, key, value)

        return new_settings

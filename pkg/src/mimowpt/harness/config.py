"""Experiment configuration loaded from YAML.

Example::

    experiment:
      kind: budget_sweep        # budget_sweep | ne_sweep | nt_sweep | system_sweep
      realizations: 100
      seed: 0
      n_t: [2]
      n_e: [2]
      p_x: ["10 W", "40 dBm"]
    channel:
      distance: 10.0
      rician_k: 1.0
    rectenna:                   # composite parameters, or a ``circuit`` block
      a: 1.29
      b: 1550.0
      i_s: 5.0e-6
      r_l: 10000.0
      a_s_sq: 25.0e-6
    grid:
      step: 0.1
      size: 1000
    solver:
      eps_sca: 1.0e-3
      n_restarts: 3
      backends: [CLARABEL, SCS]
    output:
      path: results.csv
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

import yaml

from mimowpt.config.settings import GridSettings, Settings, SolverSettings
from mimowpt.exceptions.errors import ConfigurationError, DomainError
from mimowpt.rectenna.model import (
    REFERENCE_PARAMS,
    CircuitConstants,
    RectennaParams,
    derive_composite_params,
)
from mimowpt.utils.units import parse_power

_SECTIONS = ("experiment", "channel", "rectenna", "grid", "solver", "output")


class ExperimentKind(StrEnum):
    BUDGET_SWEEP = "budget_sweep"
    NE_SWEEP = "ne_sweep"
    NT_SWEEP = "nt_sweep"
    SYSTEM_SWEEP = "system_sweep"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything an experiment run depends on, seeds included."""

    kind: ExperimentKind = ExperimentKind.BUDGET_SWEEP
    n_t: tuple[int, ...] = (2,)
    n_e: tuple[int, ...] = (2,)
    p_x: tuple[float, ...] = (10.0,)  # watt
    distance: float = 10.0  # meter
    rician_k: float = 1.0
    realizations: int = 100
    seed: int = 0
    params: RectennaParams = REFERENCE_PARAMS
    grid: GridSettings = field(default_factory=GridSettings)
    solver: SolverSettings = field(default_factory=SolverSettings)
    output: Path | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.n_t or not self.n_e or not self.p_x:
            raise ConfigurationError("Sweeps over n_t, n_e and p_x must be non-empty")
        if min(self.n_t) < 1 or min(self.n_e) < 1:
            raise ConfigurationError("Antenna counts must be positive", n_t=self.n_t, n_e=self.n_e)
        if min(self.p_x) <= 0.0:
            raise ConfigurationError("Power budgets must be positive", p_x=self.p_x)
        if self.realizations < 1:
            raise ConfigurationError("Realization count must be positive", value=self.realizations)
        if self.seed < 0:
            raise ConfigurationError("Seed must be non-negative", value=self.seed)
        if not (self.distance > 0.0 and self.rician_k >= 0.0):
            raise ConfigurationError(
                "Distance must be positive and the Rician factor non-negative",
                distance=self.distance,
                rician_k=self.rician_k,
            )
        if not (self.grid.step > 0.0 and self.grid.size >= 1):
            raise ConfigurationError("Grid needs a positive step and size", grid=self.grid)
        if max(self.p_x) > self.max_budget * (1.0 + 1e-12):
            raise ConfigurationError(
                f"Largest budget {max(self.p_x)!r} W exceeds the grid maximum "
                f"{self.max_budget!r} W; increase grid.size or grid.step",
            )
        if not (self.solver.eps_sca > 0.0 and self.solver.n_restarts >= 1):
            raise ConfigurationError("eps_sca must be positive and n_restarts at least 1")
        if self.workers < 1:
            raise ConfigurationError("Worker count must be positive", value=self.workers)

    @property
    def max_budget(self) -> float:
        return self.grid.step * self.grid.size

    def with_overrides(self, **overrides: Any) -> ExperimentConfig:
        """Copy with the given non-None fields replaced."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def describe(self) -> dict[str, Any]:
        """Flat summary for logs and output metadata."""
        return {
            "kind": str(self.kind),
            "n_t": list(self.n_t),
            "n_e": list(self.n_e),
            "p_x_w": list(self.p_x),
            "distance_m": self.distance,
            "rician_k": _json_float(self.rician_k),
            "realizations": self.realizations,
            "seed": self.seed,
            "grid_step_w": self.grid.step,
            "grid_size": self.grid.size,
            "eps_sca": self.solver.eps_sca,
            "n_restarts": self.solver.n_restarts,
            "rectenna": dataclasses.asdict(self.params),
        }


def _json_float(value: float) -> float | str:
    return value if math.isfinite(value) else str(value)


def _as_float(value: Any, name: str) -> float:
    try:
        # PyYAML reads "1e-3" (no dot) as a string
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"'{name}' must be a number", value=value) from e


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigurationError(f"'{name}' must be an integer", value=value)
    try:
        return int(value)
    except ValueError as e:
        raise ConfigurationError(f"'{name}' must be an integer", value=value) from e


def _as_int_list(value: Any, name: str) -> tuple[int, ...]:
    items = value if isinstance(value, list) else [value]
    return tuple(_as_int(v, name) for v in items)


def _as_power_list(value: Any) -> tuple[float, ...]:
    items = value if isinstance(value, list) else [value]
    return tuple(parse_power(v) for v in items)


def _section(data: dict[str, Any], name: str) -> dict[str, Any]:
    section = data.get(name) or {}
    if not isinstance(section, dict):
        raise ConfigurationError(f"Section '{name}' must be a mapping")
    return section


def _rectenna_params(section: dict[str, Any]) -> RectennaParams:
    try:
        if "circuit" in section:
            circuit = section["circuit"] or {}
            fields = {f.name for f in dataclasses.fields(CircuitConstants)}
            unknown = set(circuit) - fields
            if unknown:
                raise ConfigurationError(f"Unknown circuit constants: {sorted(unknown)}")
            return derive_composite_params(
                CircuitConstants(**{k: _as_float(v, k) for k, v in circuit.items()})
            )
        base = dataclasses.asdict(REFERENCE_PARAMS)
        unknown = set(section) - set(base)
        if unknown:
            raise ConfigurationError(f"Unknown rectenna parameters: {sorted(unknown)}")
        base.update({k: _as_float(v, k) for k, v in section.items()})
        return RectennaParams(**base)
    except (DomainError, TypeError) as e:
        raise ConfigurationError(f"Invalid rectenna parameters: {e}") from e


def config_from_dict(data: dict[str, Any], settings: Settings | None = None) -> ExperimentConfig:
    """Build an ExperimentConfig from parsed YAML.

    Solver and grid values not given in the file come from ``settings``
    (by default the environment).

    Raises:
        ConfigurationError: On unknown sections or invalid values.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("Configuration root must be a mapping")
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigurationError(f"Unknown configuration sections: {sorted(unknown)}")

    settings = settings or Settings.from_env()
    experiment = _section(data, "experiment")
    channel = _section(data, "channel")
    grid = _section(data, "grid")
    solver = _section(data, "solver")
    output = _section(data, "output")

    float_keys = ("eps_sca", "tol_feas", "tol_psd", "tol_rank_one")
    solver_overrides = {
        k: _as_float(v, k) if k in float_keys else v for k, v in solver.items()
    }
    merged = settings.merge(
        {
            "solver": solver_overrides,
            "grid": {k: _as_float(v, k) if k == "step" else _as_int(v, k) for k, v in grid.items()},
        }
    )

    try:
        kind = ExperimentKind(experiment.get("kind", ExperimentKind.BUDGET_SWEEP))
    except ValueError as e:
        raise ConfigurationError(
            f"Unknown experiment kind '{experiment.get('kind')}'",
            allowed=[k.value for k in ExperimentKind],
        ) from e

    out_path = output.get("path")
    return ExperimentConfig(
        kind=kind,
        n_t=_as_int_list(experiment.get("n_t", 2), "n_t"),
        n_e=_as_int_list(experiment.get("n_e", 2), "n_e"),
        p_x=_as_power_list(experiment.get("p_x", 10.0)),
        distance=_as_float(channel.get("distance", 10.0), "distance"),
        rician_k=_as_float(channel.get("rician_k", 1.0), "rician_k"),
        realizations=_as_int(experiment.get("realizations", 100), "realizations"),
        seed=_as_int(experiment.get("seed", settings.seed), "seed"),
        params=_rectenna_params(_section(data, "rectenna")),
        grid=merged.grid,
        solver=merged.solver,
        output=Path(out_path) if out_path else None,
        workers=settings.workers,
    )


def load_config(path: str | Path | None = None, settings: Settings | None = None) -> ExperimentConfig:
    """Load a YAML experiment file; None gives the defaults.

    Raises:
        ConfigurationError: If the file is missing, not YAML, or invalid.
    """
    if path is None:
        return config_from_dict({}, settings)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read configuration file '{path}'") from e
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Configuration file '{path}' is not valid YAML: {e}") from e
    return config_from_dict(data, settings)

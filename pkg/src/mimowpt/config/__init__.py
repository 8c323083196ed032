"""Configuration management for mimowpt."""

from mimowpt.config.settings import (
    Settings,
    LoggingSettings,
    SolverSettings,
    GridSettings,
)

__all__ = [
    "Settings",
    "LoggingSettings",
    "SolverSettings",
    "GridSettings",
]

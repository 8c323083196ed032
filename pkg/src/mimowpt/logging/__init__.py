"""Structured logging setup for mimowpt."""

from mimowpt.logging.setup import (
    configure_logging,
    get_logger,
    numpy_to_builtin,
    realization_context,
)

__all__ = [
    "configure_logging",
    "get_logger",
    "numpy_to_builtin",
    "realization_context",
]

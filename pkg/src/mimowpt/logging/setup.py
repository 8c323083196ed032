"""Structlog configuration for mimowpt.

Solver diagnostics carry numpy scalars and small arrays; a processor turns
them into plain Python values before rendering so JSON lines stay readable.
Worker processes of an experiment tag their events with the realization
index through :func:`realization_context`.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator, MutableMapping
from contextlib import contextmanager
from typing import TYPE_CHECKING, Any

import numpy as np
import structlog

if TYPE_CHECKING:
    from mimowpt.config.settings import LoggingSettings

_configured = False

# arrays longer than this are summarized by shape
_MAX_ARRAY_ITEMS = 16


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        if value.size > _MAX_ARRAY_ITEMS:
            return f"<array shape={value.shape} dtype={value.dtype}>"
        if np.iscomplexobj(value):
            return [[float(z.real), float(z.imag)] for z in value.ravel()]
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def numpy_to_builtin(
    _logger: Any, _method: str, event_dict: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    """Structlog processor replacing numpy values with JSON-friendly ones."""
    for key, value in event_dict.items():
        event_dict[key] = _to_builtin(value)
    return event_dict


def configure_logging(
    settings: LoggingSettings | None = None,
    force: bool = False,
) -> None:
    """Configure structlog with the given settings.

    Log records go to stderr so that table output on stdout stays clean.

    Args:
        settings: Logging settings. If None, uses defaults.
        force: Reconfigure even if logging was already set up
            (the CLI does this once it has parsed its flags).
    """
    global _configured

    if _configured and not force:
        return

    if settings is None:
        from mimowpt.config.settings import LoggingSettings

        settings = LoggingSettings()

    level = getattr(logging, settings.level.upper(), logging.INFO)
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level, force=force)

    processors: list[structlog.types.Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.stdlib.PositionalArgumentsFormatter(),
        numpy_to_builtin,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]
    if settings.format == "json":
        processors.append(structlog.processors.JSONRenderer(sort_keys=True))
    else:
        processors.append(
            structlog.dev.ConsoleRenderer(
                colors=sys.stderr.isatty(),
                exception_formatter=structlog.dev.plain_traceback,
            )
        )

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        # tests swap processors with capture_logs, cached loggers would miss that
        cache_logger_on_first_use=False,
    )
    _configured = True


@contextmanager
def realization_context(index: int, system: str | None = None) -> Iterator[None]:
    """Bind the realization index (and system label) to every event in the block."""
    context: dict[str, Any] = {"realization": index}
    if system is not None:
        context["system"] = system
    with structlog.contextvars.bound_contextvars(**context):
        yield


def get_logger(name: str | None = None) -> structlog.BoundLogger:
    """Logger named ``name`` (default ``mimowpt``), configuring defaults on first use."""
    if not _configured:
        configure_logging()
    return structlog.get_logger(name or "mimowpt")

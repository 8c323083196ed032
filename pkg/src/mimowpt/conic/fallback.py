"""Backend fallback for conic solves."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, TypeVar

from mimowpt.exceptions.errors import (
    FallbackExhaustedError,
    InfeasibleError,
    SolverError,
)
from mimowpt.logging.setup import get_logger

T = TypeVar("T")


@dataclass
class FallbackConfig:
    """Ordered list of cvxpy backends to try."""

    backends: tuple[str, ...] = ("CLARABEL", "SCS")
    # an infeasibility verdict is an answer, not a failure
    final_errors: tuple[type[Exception], ...] = field(
        default_factory=lambda: (InfeasibleError,)
    )


class SolverFallback:
    """Runs a solve with each configured backend until one succeeds."""

    def __init__(self, config: FallbackConfig | None = None) -> None:
        """Initialize the fallback handler.

        Args:
            config: Fallback configuration. Uses defaults if not provided.
        """
        self.config = config or FallbackConfig()
        self._logger = get_logger("mimowpt.conic")

    def execute(
        self,
        func: Callable[[str], T],
        on_fallback: Callable[[str, Exception], None] | None = None,
    ) -> T:
        """Execute ``func(backend)`` with fallback across backends.

        Args:
            func: Solve function taking the backend name.
            on_fallback: Optional callback with (failed_backend, exception).

        Returns:
            Result of the first successful backend.

        Raises:
            InfeasibleError: Propagated immediately from any backend.
            FallbackExhaustedError: If every backend failed.
        """
        last_exception: Exception | None = None
        backends = self.config.backends

        for index, backend in enumerate(backends):
            try:
                return func(backend)
            except self.config.final_errors:
                raise
            except SolverError as e:
                last_exception = e

                if index + 1 < len(backends):
                    self._logger.warning(
                        "solver_fallback",
                        failed_backend=backend,
                        next_backend=backends[index + 1],
                        error_type=type(e).__name__,
                        error_message=str(e),
                    )

                    if on_fallback:
                        on_fallback(backend, e)

        if last_exception is not None:
            raise FallbackExhaustedError(
                f"All {len(backends)} conic backends failed",
                backends=backends,
                last_error=last_exception,
            )

        raise SolverError("No conic backend configured", status="failed")

"""Custom exception hierarchy for mimowpt."""

from typing import Any


class WptError(Exception):
    """Base exception for all mimowpt errors."""

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if self.context:
            ctx = ", ".join(f"{k}={v!r}" for k, v in self.context.items())
            return f"{self.message} ({ctx})"
        return self.message


# === Numerical Errors ===


class DomainError(WptError, ValueError):
    """Argument outside the domain of a function or parameter set."""

    def __init__(self, message: str, value: Any = None, **context: Any) -> None:
        super().__init__(message, value=value, **context)
        self.value = value


class DimensionError(WptError, ValueError):
    """Array shapes do not agree."""

    def __init__(
        self,
        message: str,
        expected: Any = None,
        actual: Any = None,
        **context: Any,
    ) -> None:
        super().__init__(message, expected=expected, actual=actual, **context)
        self.expected = expected
        self.actual = actual


class DegenerateError(WptError):
    """Input has no usable direction (zero matrix or zero channel)."""

    pass


# === File Format Errors ===


class ChannelFormatError(WptError):
    """Channel or policy text file could not be parsed."""

    def __init__(
        self,
        message: str,
        row: int,
        column: int | None = None,
        **context: Any,
    ) -> None:
        super().__init__(message, row=row, column=column, **context)
        self.row = row
        self.column = column


# === Solver Errors ===


class SolverError(WptError):
    """Base class for conic solver failures."""

    def __init__(
        self,
        message: str,
        status: str,
        diagnostics: dict[str, Any] | None = None,
        **context: Any,
    ) -> None:
        super().__init__(message, status=status, **context)
        self.status = status
        self.diagnostics = diagnostics or {}


class InfeasibleError(SolverError):
    """The constraint set of a conic subproblem is empty."""

    def __init__(
        self,
        message: str,
        diagnostics: dict[str, Any] | None = None,
        **context: Any,
    ) -> None:
        super().__init__(message, status="infeasible", diagnostics=diagnostics, **context)


class MaxIterError(SolverError):
    """Iteration cap reached before a certificate or convergence."""

    def __init__(
        self,
        message: str,
        iterations: int,
        diagnostics: dict[str, Any] | None = None,
        **context: Any,
    ) -> None:
        super().__init__(
            message,
            status="max_iter",
            diagnostics=diagnostics,
            iterations=iterations,
            **context,
        )
        self.iterations = iterations


class FallbackExhaustedError(SolverError):
    """Every configured conic backend failed."""

    def __init__(
        self,
        message: str,
        backends: tuple[str, ...],
        last_error: Exception,
        **context: Any,
    ) -> None:
        status = last_error.status if isinstance(last_error, SolverError) else "failed"
        super().__init__(message, status=status, backends=backends, **context)
        self.backends = backends
        self.last_error = last_error
        self.__cause__ = last_error


# === Grid Errors ===


class GridRangeError(WptError):
    """Power budget lies outside the computed power grid."""

    def __init__(
        self,
        message: str,
        budget: float,
        grid_max: float,
        **context: Any,
    ) -> None:
        super().__init__(message, budget=budget, grid_max=grid_max, **context)
        self.budget = budget
        self.grid_max = grid_max


# === Validation Errors ===


class ValidationError(WptError):
    """Base class for validation errors."""

    def __init__(self, message: str, errors: list[str], **context: Any) -> None:
        super().__init__(message, **context)
        self.errors = errors

    def __str__(self) -> str:
        if self.errors:
            errors_str = "\n  - ".join(self.errors)
            return f"{self.message}:\n  - {errors_str}"
        return self.message


class CheckError(WptError):
    """A fluent policy check failed."""

    def __init__(
        self,
        message: str,
        check: str,
        expected: Any,
        actual: Any,
        **context: Any,
    ) -> None:
        super().__init__(message, check=check, expected=expected, actual=actual, **context)
        self.check = check
        self.expected = expected
        self.actual = actual


# === Configuration Errors ===


class ConfigurationError(WptError):
    """Invalid configuration."""

    pass

"""Problem and solution types of the Hermitian SDP subproblems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt

from mimowpt.exceptions.errors import DimensionError, DomainError

ComplexArray = npt.NDArray[np.complex128]


class Sense(StrEnum):
    """Direction of a quadratic constraint h W h^H (sense) bound."""

    GE = ">="
    LE = "<="


class SdpStatus(StrEnum):
    """Outcome of a conic solve; an iteration cap raises MaxIterError instead."""

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class QuadConstraint:
    """Quadratic-form constraint on the lifted beam matrix."""

    h: ComplexArray
    sense: Sense
    bound: float = 1.0

    def value(self, w_mat: ComplexArray) -> float:
        """h W h^H for a matrix W."""
        return float(np.real(self.h @ w_mat @ self.h.conj()))

    def slack(self, w_mat: ComplexArray) -> float:
        """Signed slack; negative means violated."""
        q = self.value(w_mat)
        return q - self.bound if self.sense is Sense.GE else self.bound - q


@dataclass(frozen=True)
class SdpProblem:
    """maximize Re Tr{C^H W} s.t. quadratic constraints, Tr{W} <= nu, W PSD.

    A zero (or absent) objective makes it a feasibility problem, which is
    solved as margin maximization over the ``>=`` constraints.
    """

    dim: int
    constraints: tuple[QuadConstraint, ...] = ()
    trace_bound: float = 0.0
    objective: ComplexArray | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionError("Problem dimension must be at least 1", actual=self.dim)
        if not (math.isfinite(self.trace_bound) and self.trace_bound >= 0.0):
            raise DomainError("Trace bound must be non-negative", value=self.trace_bound)
        for c in self.constraints:
            if c.h.shape != (self.dim,):
                raise DimensionError(
                    "Constraint vector length must equal the problem dimension",
                    expected=self.dim,
                    actual=c.h.shape,
                )
            if c.bound < 0.0:
                raise DomainError("Constraint bound must be non-negative", value=c.bound)
        if self.objective is not None and self.objective.shape != (self.dim, self.dim):
            raise DimensionError(
                "Objective must be dim x dim",
                expected=(self.dim, self.dim),
                actual=self.objective.shape,
            )

    @property
    def is_feasibility(self) -> bool:
        """True when there is no (or an all-zero) objective."""
        return self.objective is None or not np.any(self.objective)

    @property
    def ge_constraints(self) -> tuple[QuadConstraint, ...]:
        return tuple(c for c in self.constraints if c.sense is Sense.GE)

    @property
    def le_constraints(self) -> tuple[QuadConstraint, ...]:
        return tuple(c for c in self.constraints if c.sense is Sense.LE)

    def as_feasibility(self) -> SdpProblem:
        """Same constraint set with the objective removed."""
        return SdpProblem(self.dim, self.constraints, self.trace_bound, None)

    def margin(self, w_mat: ComplexArray) -> float:
        """Smallest slack of the ``>=`` constraints (inf when there are none)."""
        slacks = [c.slack(w_mat) for c in self.ge_constraints]
        return min(slacks) if slacks else math.inf

    def violation(self, w_mat: ComplexArray) -> float:
        """Largest constraint violation of W, zero when feasible.

        Quadratic constraints are measured in their own (pre-scaled) units,
        the trace constraint relative to the trace bound.
        """
        worst = 0.0
        for c in self.constraints:
            worst = max(worst, -c.slack(w_mat))
        trace = float(np.real(np.trace(w_mat)))
        excess = trace - self.trace_bound
        if excess > 0.0:
            worst = max(worst, excess / self.trace_bound if self.trace_bound > 0 else excess)
        return worst

    def vector_violation(self, w: ComplexArray) -> float:
        """``violation`` of the rank-one matrix w w^H."""
        return self.violation(np.outer(w, w.conj()))


@dataclass(frozen=True)
class SdpSolution:
    """Result of a conic solve."""

    w_matrix: ComplexArray
    status: SdpStatus
    primal_violation: float
    objective_value: float
    margin: float = math.inf
    rank_one_defect: float = 0.0
    w_vector: ComplexArray | None = None
    backend: str = ""
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is SdpStatus.OPTIMAL

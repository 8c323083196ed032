"""Saturation-count search over the sorted channel prefix."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from mimowpt.channel.rician import ChannelMatrix, as_gain_matrix
from mimowpt.config.settings import SolverSettings
from mimowpt.conic.problem import QuadConstraint, SdpProblem, Sense
from mimowpt.conic.solver import solve_feasibility_sdp
from mimowpt.exceptions.errors import DomainError
from mimowpt.logging.setup import get_logger
from mimowpt.rectenna.model import RectennaParams

ComplexArray = npt.NDArray[np.complex128]

_logger = get_logger("mimowpt.beamopt")


@dataclass(frozen=True)
class SaturationPlan:
    """Which rectennas are driven into saturation.

    ``order`` lists 0-based rectenna indices by descending channel norm.
    ``u`` is indexed like ``order``: 0 for the saturated prefix, 1 otherwise.
    ``w_cell`` is a rank-one point of the saturation cell within the trace
    bound (None only if the refinement failed). ``cell_points[k]`` holds
    the same for the cell that saturates only the first k rectennas.
    """

    order: tuple[int, ...]
    k_star: int
    u: tuple[int, ...]
    w_cell: ComplexArray | None = None
    cell_points: tuple[ComplexArray | None, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        n_e = len(self.order)
        if sorted(self.order) != list(range(n_e)):
            raise DomainError("Plan order must be a permutation", value=self.order)
        if not 0 <= self.k_star <= n_e:
            raise DomainError("Saturation count out of range", value=self.k_star)
        if self.u != _prefix_pattern(self.k_star, n_e):
            raise DomainError("Plan pattern must saturate exactly the order prefix", value=self.u)

    @property
    def saturated(self) -> tuple[int, ...]:
        """Original indices of the saturated rectennas."""
        return self.order[: self.k_star]

    def restricted(self, k: int) -> SaturationPlan:
        """Plan for the lower cell that saturates the first k rectennas only."""
        if not 0 <= k <= self.k_star:
            raise DomainError("Lower cell count out of range", value=k)
        if k == self.k_star:
            return self
        point = self.cell_points[k] if k < len(self.cell_points) else None
        return SaturationPlan(
            order=self.order,
            k_star=k,
            u=_prefix_pattern(k, len(self.order)),
            w_cell=point,
            cell_points=self.cell_points[: k + 1],
        )


def _prefix_pattern(k: int, n_e: int) -> tuple[int, ...]:
    return (0,) * k + (1,) * (n_e - k)


def sort_channels(g: ChannelMatrix | ComplexArray) -> tuple[int, ...]:
    """Rectenna indices by descending ||g_p||, ties by ascending index."""
    norms = np.linalg.norm(as_gain_matrix(g), axis=1)
    return tuple(int(i) for i in np.argsort(-norms, kind="stable"))


def build_cell_problem(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    nu: float,
    order: tuple[int, ...],
    k: int,
    objective: ComplexArray | None = None,
) -> SdpProblem:
    """Saturation cell of the first k rectennas in ``order`` within Tr{W} <= nu.

    Rows are pre-scaled by 1/A_s so every bound is 1: the saturated prefix
    must reach A_s^2 and the rest must stay at or below it.
    """
    gain = as_gain_matrix(g)
    scale = 1.0 / math.sqrt(params.a_s_sq)
    constraints = tuple(
        QuadConstraint(
            h=gain[p] * scale,
            sense=Sense.GE if position < k else Sense.LE,
            bound=1.0,
        )
        for position, p in enumerate(order)
    )
    return SdpProblem(
        dim=gain.shape[1],
        constraints=constraints,
        trace_bound=nu,
        objective=objective,
    )


def find_saturation_count(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    nu: float,
    settings: SolverSettings | None = None,
) -> SaturationPlan:
    """Largest k whose best-channel prefix can be saturated at power nu.

    k is searched upward from 0 and the search stops at the first
    infeasible cell.

    Raises:
        DomainError: If nu is negative.
        FallbackExhaustedError: If a feasibility solve fails on every backend.
    """
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError("Transmit power must be non-negative", value=nu)

    settings = settings or SolverSettings()
    gain = as_gain_matrix(g)
    n_e, n_t = gain.shape
    order = sort_channels(gain)

    k_star = 0
    w_cell: ComplexArray | None = np.zeros(n_t, dtype=np.complex128)
    points = [w_cell]
    if nu > 0.0:
        for k in range(1, n_e + 1):
            prob = build_cell_problem(gain, params, nu, order, k)
            solution = solve_feasibility_sdp(prob, settings)
            if not solution.feasible:
                break
            k_star = k
            w_cell = solution.w_vector
            points.append(w_cell)

    _logger.debug("saturation_count_found", nu=nu, k_star=k_star, n_e=n_e)
    return SaturationPlan(
        order=order,
        k_star=k_star,
        u=_prefix_pattern(k_star, n_e),
        w_cell=w_cell,
        cell_points=tuple(points),
    )

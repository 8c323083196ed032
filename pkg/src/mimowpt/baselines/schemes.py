"""Deterministic single-beam reference schemes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from mimowpt.beamopt.sca import energy_beam_direction, phi_of_nu
from mimowpt.channel.rician import ChannelMatrix
from mimowpt.config.settings import SolverSettings
from mimowpt.exceptions.errors import DomainError
from mimowpt.logging.setup import get_logger
from mimowpt.rectenna.model import RectennaParams, total_power
from mimowpt.strategy.policy import TwoPointPolicy

ComplexArray = npt.NDArray[np.complex128]

_logger = get_logger("mimowpt.baselines")


class BaselineKind(StrEnum):
    ENERGY_BEAMFORMING = "energy_beamforming"
    SINGLE_BEAM = "single_beam"


@dataclass(frozen=True)
class BaselinePolicy:
    """One beam with ||w||^2 = p_x, always transmitted."""

    w: ComplexArray
    avg_phi: float
    kind: BaselineKind
    p_x: float
    k_star: int = 0
    sca_iters: int = 0

    def __post_init__(self) -> None:
        power = float(np.vdot(self.w, self.w).real)
        if abs(power - self.p_x) > 1e-9 * max(1.0, self.p_x):
            raise DomainError("Baseline beam power must equal the budget", value=power)

    def as_two_point(self) -> TwoPointPolicy:
        """Single-point policy with the same record format as the proposed scheme."""
        return TwoPointPolicy(
            w1=self.w,
            w2=self.w,
            nu1=self.p_x,
            nu2=self.p_x,
            beta=1.0,
            p_x=self.p_x,
            avg_phi=self.avg_phi,
        )


def _check_budget(p_x: float) -> None:
    if not (math.isfinite(p_x) and p_x > 0.0):
        raise DomainError("Power budget must be positive", value=p_x)


def energy_beamforming_policy(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    p_x: float,
) -> BaselinePolicy:
    """Beam along the dominant eigenvector of the channel Gram matrix.

    The beam maximizes the total received power (the right choice for
    linear harvesters); its value is evaluated with the non-linear model.

    Raises:
        DegenerateError: If the channel is zero.
    """
    _check_budget(p_x)
    w = math.sqrt(p_x) * energy_beam_direction(g)
    avg_phi = total_power(params, g, w)
    _logger.debug("baseline_evaluated", kind="energy_beamforming", p_x=p_x, avg_phi=avg_phi)
    return BaselinePolicy(w=w, avg_phi=avg_phi, kind=BaselineKind.ENERGY_BEAMFORMING, p_x=p_x)


def single_beam_policy(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    p_x: float,
    eps_sca: float | None = None,
    seed: int = 0,
    settings: SolverSettings | None = None,
) -> BaselinePolicy:
    """The Phi(p_x)-maximizing beam, transmitted deterministically."""
    _check_budget(p_x)
    point = phi_of_nu(g, params, p_x, eps_sca=eps_sca, seed=seed, settings=settings)
    _logger.debug("baseline_evaluated", kind="single_beam", p_x=p_x, avg_phi=point.phi)
    return BaselinePolicy(
        w=point.w,
        avg_phi=point.phi,
        kind=BaselineKind.SINGLE_BEAM,
        p_x=p_x,
        k_star=point.plan.k_star,
        sca_iters=point.sca_iters,
    )

"""Power grid of Phi values and the min-max two-point policy built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from mimowpt.beamopt.sca import energy_beam_direction, phi_of_nu
from mimowpt.channel.rician import ChannelMatrix, as_gain_matrix
from mimowpt.config.settings import GridSettings, SolverSettings
from mimowpt.exceptions.errors import DomainError, GridRangeError, WptError
from mimowpt.logging.setup import get_logger
from mimowpt.rectenna.model import RectennaParams, saturation_power, total_power
from mimowpt.strategy.lemma import ScalarFunctionTable, solve_two_point
from mimowpt.strategy.policy import TwoPointPolicy
from mimowpt.utils.phase import canonicalize

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
IntArray = npt.NDArray[np.int64]

SATURATION_RTOL = 1e-6

_logger = get_logger("mimowpt.strategy")


@dataclass(frozen=True)
class GridTable:
    """Phi(rho_m) on the uniform grid rho_m = m·step, m = 0..size.

    ``phi`` is the running maximum over the grid, and ``vecs[m]`` is a beam
    vector with ||w||^2 = rho_m attaining it. ``valid`` is False where the
    point's own optimization failed; ``repaired`` is True where the value
    was carried over from the previous point.
    """

    rho: FloatArray
    phi: FloatArray
    vecs: ComplexArray
    k_star: IntArray
    sca_iters: IntArray
    valid: npt.NDArray[np.bool_]
    repaired: npt.NDArray[np.bool_]
    step: float
    n_e: int
    phi_sat: float

    @property
    def size(self) -> int:
        """Number of grid steps (the table has size + 1 points)."""
        return int(self.rho.size - 1)

    @property
    def max_budget(self) -> float:
        return float(self.rho[-1])

    @property
    def ceiling(self) -> float:
        """N_e·phi_sat, the largest possible harvested power."""
        return self.n_e * self.phi_sat

    @property
    def saturated(self) -> bool:
        """Whether the last grid point reaches the saturation ceiling."""
        return bool(self.phi[-1] >= self.ceiling * (1.0 - SATURATION_RTOL))

    def as_scalar_table(self) -> ScalarFunctionTable:
        return ScalarFunctionTable(self.rho, self.phi, monotone=True)


def _carry_forward(
    gain: ComplexArray,
    prev: ComplexArray,
    rho_prev: float,
    rho: float,
) -> ComplexArray:
    """Previous grid vector rescaled to power rho."""
    if rho_prev > 0.0 and np.any(prev):
        return prev * math.sqrt(rho / rho_prev)
    return math.sqrt(rho) * energy_beam_direction(gain)


def build_grid_table(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    step: float | None = None,
    size: int | None = None,
    seed: int = 0,
    settings: SolverSettings | None = None,
) -> GridTable:
    """Evaluate Phi on the power grid and repair it into a monotone table.

    A grid point whose optimization fails is marked invalid and takes the
    previous point's vector rescaled to its own power.

    Raises:
        DomainError: If step is not positive or size is below 1.
    """
    defaults = GridSettings()
    step = defaults.step if step is None else step
    size = defaults.size if size is None else size
    if not (math.isfinite(step) and step > 0.0):
        raise DomainError("Grid step must be positive", value=step)
    if size < 1:
        raise DomainError("Grid size must be at least 1", value=size)

    settings = settings or SolverSettings()
    gain = as_gain_matrix(g)
    n_e, n_t = gain.shape
    rho = step * np.arange(size + 1, dtype=np.float64)

    phi = np.zeros(size + 1)
    vecs = np.zeros((size + 1, n_t), dtype=np.complex128)
    k_star = np.zeros(size + 1, dtype=np.int64)
    sca_iters = np.zeros(size + 1, dtype=np.int64)
    valid = np.ones(size + 1, dtype=np.bool_)
    repaired = np.zeros(size + 1, dtype=np.bool_)

    for m in range(1, size + 1):
        try:
            point = phi_of_nu(gain, params, float(rho[m]), seed=seed, settings=settings)
        except WptError as e:
            _logger.warning("grid_point_invalid", index=m, rho=float(rho[m]), error=str(e))
            valid[m] = False
            point = None

        carried = _carry_forward(gain, vecs[m - 1], float(rho[m - 1]), float(rho[m]))
        carried_phi = total_power(params, gain, carried)

        if point is not None and point.phi >= carried_phi:
            phi[m], vecs[m] = point.phi, point.w
            k_star[m], sca_iters[m] = point.plan.k_star, point.sca_iters
        else:
            phi[m], vecs[m] = carried_phi, canonicalize(carried)
            k_star[m] = k_star[m - 1] if point is None else point.plan.k_star
            sca_iters[m] = 0 if point is None else point.sca_iters
            repaired[m] = True

    table = GridTable(
        rho=rho,
        phi=phi,
        vecs=vecs,
        k_star=k_star,
        sca_iters=sca_iters,
        valid=valid,
        repaired=repaired,
        step=step,
        n_e=n_e,
        phi_sat=saturation_power(params),
    )

    if not table.saturated:
        _logger.warning(
            "grid_not_saturated",
            phi_last=float(phi[-1]),
            ceiling=table.ceiling,
            max_budget=table.max_budget,
        )
    _logger.info(
        "grid_built",
        points=size + 1,
        step=step,
        invalid=int(np.count_nonzero(~valid)),
        repaired=int(np.count_nonzero(repaired)),
        saturated=table.saturated,
    )
    return table


def grid_minmax_policy(tab: GridTable, p_x: float) -> TwoPointPolicy:
    """Two-point transmit policy for budget p_x from a finished grid.

    Raises:
        DomainError: If p_x is not positive.
        GridRangeError: If p_x exceeds the grid.
    """
    if not (math.isfinite(p_x) and p_x > 0.0):
        raise DomainError("Power budget must be positive", value=p_x)
    if p_x > tab.max_budget * (1.0 + 1e-12):
        raise GridRangeError(
            f"Budget {p_x!r} W exceeds the grid maximum {tab.max_budget!r} W; "
            "increase the grid size N_rho or the step",
            budget=p_x,
            grid_max=tab.max_budget,
        )

    sol = solve_two_point(tab.as_scalar_table(), p_x)
    w1 = canonicalize(tab.vecs[sol.index1])
    w2 = canonicalize(tab.vecs[sol.index2])
    nu1, nu2 = sol.nu1, sol.nu2
    if sol.degenerate:
        # the single point sits on the grid, so it equals p_x up to round-off
        nu1 = nu2 = p_x
        scale = math.sqrt(p_x / sol.nu1)
        w1 = w2 = w1 * scale

    return TwoPointPolicy(
        w1=w1,
        w2=w2,
        nu1=nu1,
        nu2=nu2,
        beta=sol.beta,
        p_x=p_x,
        avg_phi=sol.value,
    )

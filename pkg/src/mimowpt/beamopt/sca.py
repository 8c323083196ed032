"""Successive convex approximation of Phi(nu) on the saturation cell."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from mimowpt.beamopt.saturation import (
    SaturationPlan,
    build_cell_problem,
    find_saturation_count,
)
from mimowpt.channel.rician import ChannelMatrix, as_gain_matrix, gram_matrix
from mimowpt.config.settings import SolverSettings
from mimowpt.conic.problem import SdpProblem
from mimowpt.conic.solver import extract_rank_one, solve_linear_sdp
from mimowpt.exceptions.errors import DegenerateError, DomainError, SolverError
from mimowpt.logging.setup import get_logger
from mimowpt.rectenna.model import (
    RectennaParams,
    matrix_gradient,
    matrix_power,
    total_power,
)
from mimowpt.utils.phase import canonicalize

ComplexArray = npt.NDArray[np.complex128]

# round-off allowance when comparing consecutive SCA objective values
MONOTONE_TOL = 1e-12

# bisection steps when pulling an SCA start into its cell
PROJECTION_STEPS = 50

_logger = get_logger("mimowpt.beamopt")


class ScaStatus(StrEnum):
    """Why an SCA run stopped."""

    CONVERGED = "converged"
    FLAT = "flat"  # zero gradient, every rectenna saturated or W = 0
    REJECTED = "rejected"  # a step did not improve the objective
    MAX_ITER = "max_iter"
    SOLVER_FAILED = "solver_failed"


@dataclass(frozen=True)
class PhiPoint:
    """Phi(nu) together with the beam vector attaining it."""

    nu: float
    phi: float
    w: ComplexArray
    plan: SaturationPlan
    sca_iters: int = 0
    history: tuple[float, ...] = ()
    status: ScaStatus = ScaStatus.CONVERGED
    rank_one_defect: float = 0.0
    diagnostics: dict[str, object] = field(default_factory=dict)
    cell: int = 0  # saturation count of the cell the beam was found in


def surrogate_value(
    params: RectennaParams,
    g: ChannelMatrix | ComplexArray,
    w_mat: ComplexArray,
    w_ref: ComplexArray,
) -> float:
    """Linear underestimate Psi(W_ref) + Re Tr{grad Psi(W_ref)^H (W - W_ref)}."""
    grad = matrix_gradient(params, g, w_ref)
    step = np.real(np.trace(grad.conj().T @ (w_mat - w_ref)))
    return matrix_power(params, g, w_ref) + float(step)


def _scale_to_budget(w: ComplexArray, nu: float) -> ComplexArray:
    norm = float(np.linalg.norm(w))
    if norm == 0.0:
        return w
    return w * (math.sqrt(nu) / norm)


def sca_maximize(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    nu: float,
    plan: SaturationPlan,
    w_init: ComplexArray,
    eps_sca: float | None = None,
    settings: SolverSettings | None = None,
) -> PhiPoint:
    """Run SCA from ``w_init`` inside the saturation cell of ``plan``.

    Each step maximizes the linearization of Psi at the current iterate over
    the cell. A step that lowers Psi is discarded and ends the run, so the
    recorded objective history never decreases. The run converges once the
    relative change of the objective drops to ``eps_sca``.
    """
    settings = settings or SolverSettings()
    eps = settings.eps_sca if eps_sca is None else eps_sca
    gain = as_gain_matrix(g)

    w_mat = np.asarray(w_init, dtype=np.complex128)
    h = matrix_power(params, gain, w_mat)
    history = [h]
    status = ScaStatus.MAX_ITER
    iters = 0
    diagnostics: dict[str, object] = {}

    while iters < settings.sca_max_iter:
        grad = matrix_gradient(params, gain, w_mat)
        if not np.any(grad):
            status = ScaStatus.FLAT
            break

        step_prob = build_cell_problem(gain, params, nu, plan.order, plan.k_star, objective=grad)
        try:
            solution = solve_linear_sdp(step_prob, settings)
        except SolverError as e:
            _logger.warning("sca_step_failed", nu=nu, iteration=iters, error=str(e))
            status = ScaStatus.SOLVER_FAILED
            diagnostics["error"] = str(e)
            break

        iters += 1
        h_new = matrix_power(params, gain, solution.w_matrix)
        if h_new < h - MONOTONE_TOL:
            _logger.debug("sca_iteration_rejected", nu=nu, iteration=iters, h=h, h_new=h_new)
            status = ScaStatus.REJECTED
            break

        h_prev, h = h, max(h, h_new)
        w_mat = solution.w_matrix
        history.append(h)
        _logger.debug("sca_iteration", nu=nu, iteration=iters, h=h)
        if abs(h - h_prev) <= eps * max(abs(h), math.ulp(1.0)):
            status = ScaStatus.CONVERGED
            break

    if status is ScaStatus.MAX_ITER:
        _logger.warning("sca_max_iter", nu=nu, iterations=iters)

    try:
        w, defect = extract_rank_one(w_mat, nu, settings.tol_psd)
    except DegenerateError:
        w, defect = np.zeros(gain.shape[1], dtype=np.complex128), 0.0

    # the cell point is feasible by construction and may beat the extraction
    candidates = [w]
    if plan.w_cell is not None:
        candidates.append(plan.w_cell)
    candidates = [_scale_to_budget(c, nu) for c in candidates]
    values = [total_power(params, gain, c) for c in candidates]
    best = int(np.argmax(values))

    _logger.debug(
        "sca_finished",
        nu=nu,
        status=str(status),
        iterations=iters,
        phi=values[best],
        defect=defect,
    )
    return PhiPoint(
        nu=nu,
        phi=values[best],
        w=canonicalize(candidates[best]),
        plan=plan,
        sca_iters=iters,
        history=tuple(history),
        status=status,
        rank_one_defect=defect,
        diagnostics=diagnostics,
        cell=plan.k_star,
    )


def energy_beam_direction(g: ChannelMatrix | ComplexArray) -> ComplexArray:
    """Unit dominant eigenvector of the channel Gram matrix, canonical phase.

    Raises:
        DegenerateError: If the channel is zero.
    """
    gram = gram_matrix(g)
    vals, vecs = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    if vals[-1] <= 0.0:
        raise DegenerateError("Channel Gram matrix is zero")
    return canonicalize(vecs[:, -1])


def initial_matrix(nu: float, direction: ComplexArray) -> ComplexArray:
    """0.5·(nu/N_t)·I + 0.5·nu·v v^H for a unit direction v."""
    n_t = direction.shape[0]
    return 0.5 * (nu / n_t) * np.eye(n_t, dtype=np.complex128) + 0.5 * nu * np.outer(
        direction, direction.conj()
    )


def _random_direction(rng: np.random.Generator, n_t: int) -> ComplexArray:
    v = rng.standard_normal(n_t) + 1j * rng.standard_normal(n_t)
    return v / np.linalg.norm(v)


def project_into_cell(
    cell: SdpProblem,
    w_init: ComplexArray,
    anchor: ComplexArray,
    tol: float,
) -> ComplexArray:
    """Point of the segment from W_init to a feasible anchor nearest to W_init in the cell.

    The cell is convex, so its trace along the segment is an interval that
    ends at the anchor; the boundary is found by bisection.
    """
    if cell.violation(w_init) <= tol:
        return w_init
    lo, hi = 0.0, 1.0
    for _ in range(PROJECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if cell.violation((1.0 - mid) * w_init + mid * anchor) <= tol:
            hi = mid
        else:
            lo = mid
    return (1.0 - hi) * w_init + hi * anchor


def phi_of_nu(
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
    nu: float,
    eps_sca: float | None = None,
    n_restarts: int | None = None,
    seed: int = 0,
    settings: SolverSettings | None = None,
) -> PhiPoint:
    """Phi(nu) and its beam vector: saturation search, then restarted SCA.

    SCA runs on the k* cell and on every lower prefix cell k*-1, ..., 0, so
    a beam that saturates fewer rectennas than possible is not missed.
    Restart 0 starts from the energy-beamforming direction, later restarts
    from seeded random directions; each start is pulled into the cell along
    the segment to the cell's feasible point. The energy beam itself, scaled
    to nu, is always among the candidates. The result only depends on the
    inputs and ``seed``.

    Raises:
        DomainError: If nu is negative.
    """
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError("Transmit power must be non-negative", value=nu)

    settings = settings or SolverSettings()
    restarts = settings.n_restarts if n_restarts is None else n_restarts
    gain = as_gain_matrix(g)
    n_t = gain.shape[1]

    plan = find_saturation_count(gain, params, nu, settings)
    if nu == 0.0:
        return PhiPoint(
            nu=0.0,
            phi=0.0,
            w=np.zeros(n_t, dtype=np.complex128),
            plan=plan,
            status=ScaStatus.FLAT,
        )

    v_eb = energy_beam_direction(gain)
    rng = np.random.default_rng(seed)
    directions = [v_eb] + [_random_direction(rng, n_t) for _ in range(max(restarts, 1) - 1)]

    best: PhiPoint | None = None
    for k in range(plan.k_star, -1, -1):
        cell_plan = plan.restricted(k)
        cell = build_cell_problem(gain, params, nu, plan.order, k)
        w_cell = cell_plan.w_cell
        anchor = None if w_cell is None else np.outer(w_cell, w_cell.conj())
        for direction in directions:
            w_init = initial_matrix(nu, direction)
            if anchor is not None:
                w_init = project_into_cell(cell, w_init, anchor, settings.tol_feas)
            point = sca_maximize(gain, params, nu, cell_plan, w_init, eps_sca, settings)
            if best is None or point.phi > best.phi:
                best = replace(point, plan=plan)

    assert best is not None
    w_eb = math.sqrt(nu) * v_eb
    phi_eb = total_power(params, gain, w_eb)
    if phi_eb > best.phi:
        diagnostics = {**best.diagnostics, "energy_beam": True}
        best = replace(best, phi=phi_eb, w=w_eb, diagnostics=diagnostics)

    _logger.debug(
        "phi_evaluated",
        nu=nu,
        phi=best.phi,
        k_star=plan.k_star,
        cell=best.cell,
        status=str(best.status),
    )
    return best

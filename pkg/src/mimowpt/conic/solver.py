"""Dense Hermitian SDP solves for the saturation feasibility problem and
the linear SCA subproblem, plus rank-one extraction and refinement.

Both problem shapes are modelled with cvxpy over a complex Hermitian PSD
variable; cvxpy lowers them to the real symmetric embedding of size 2N_t.
The matrix variable is normalised by the trace bound (W = nu·X) and the
objective by its Frobenius norm so that the conic backend sees O(1) data.
"""

from __future__ import annotations

import math
from typing import Any

import cvxpy as cp
import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from mimowpt.config.settings import SolverSettings
from mimowpt.conic.fallback import FallbackConfig, SolverFallback
from mimowpt.conic.problem import SdpProblem, SdpSolution, SdpStatus, Sense
from mimowpt.exceptions.errors import (
    DegenerateError,
    DomainError,
    InfeasibleError,
    MaxIterError,
    SolverError,
)
from mimowpt.logging.setup import get_logger
from mimowpt.utils.phase import canonicalize

ComplexArray = npt.NDArray[np.complex128]
FloatArray = npt.NDArray[np.float64]

DEGENERATE_EIGENVALUE = 1e-15
RANDOMIZATION_SAMPLES = 200

_logger = get_logger("mimowpt.conic")


def _backend_options(backend: str, max_iter: int) -> dict[str, Any]:
    if backend == "CLARABEL":
        return {"max_iter": max_iter, "tol_gap_abs": 1e-9, "tol_gap_rel": 1e-9}
    if backend == "SCS":
        return {"max_iters": 50 * max_iter, "eps_abs": 1e-8, "eps_rel": 1e-8}
    return {}


def psd_cleanup(w_mat: ComplexArray) -> ComplexArray:
    """Symmetrize and project onto the PSD cone."""
    sym = 0.5 * (w_mat + w_mat.conj().T)
    vals, vecs = np.linalg.eigh(sym)
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ vecs.conj().T


def rank_one_defect(w_mat: ComplexArray) -> float:
    """Ratio lambda_2 / lambda_1 of the two largest eigenvalues (0 for 1x1)."""
    vals = np.linalg.eigvalsh(0.5 * (w_mat + w_mat.conj().T))
    lam1 = float(vals[-1])
    if lam1 <= DEGENERATE_EIGENVALUE:
        return 0.0
    lam2 = float(vals[-2]) if vals.shape[0] > 1 else 0.0
    return max(lam2, 0.0) / lam1


def extract_rank_one(
    w_mat: ComplexArray, nu: float, tol_psd: float = 1e-9
) -> tuple[ComplexArray, float]:
    """Beam vector from the dominant eigenvector of W.

    W must be PSD up to eigenvalues of -tol_psd·lambda_1.

    Returns:
        (w, defect) with w = sqrt(min(Tr W, nu))·v1 in canonical phase and
        defect = lambda_2 / lambda_1.

    Raises:
        DegenerateError: If the largest eigenvalue is not positive.
        DomainError: If W has a negative eigenvalue beyond tol_psd.
    """
    sym = 0.5 * (w_mat + w_mat.conj().T)
    vals, vecs = np.linalg.eigh(sym)
    lam1 = float(vals[-1])
    if lam1 <= DEGENERATE_EIGENVALUE:
        raise DegenerateError("Beam matrix has no dominant direction", lambda_max=lam1)
    if float(vals[0]) < -tol_psd * lam1:
        raise DomainError("Beam matrix is not positive semidefinite", value=float(vals[0]))
    trace = float(np.real(np.trace(sym)))
    v1 = canonicalize(vecs[:, -1])
    w = math.sqrt(max(min(trace, nu), 0.0)) * v1
    lam2 = float(vals[-2]) if vals.shape[0] > 1 else 0.0
    return w, max(lam2, 0.0) / lam1


def _relaxed_violation(prob: SdpProblem, w_mat: ComplexArray, margin_mode: bool) -> float:
    """Violation ignoring the ``>=`` rows in margin mode (they carry the slack)."""
    if not margin_mode:
        return prob.violation(w_mat)
    relaxed = SdpProblem(prob.dim, prob.le_constraints, prob.trace_bound)
    return relaxed.violation(w_mat)


def _solve_cvx(
    prob: SdpProblem,
    backend: str,
    settings: SolverSettings,
    margin_mode: bool,
) -> tuple[ComplexArray, dict[str, Any]]:
    n = prob.dim
    nu = prob.trace_bound
    x = cp.Variable((n, n), hermitian=True)
    t = cp.Variable() if margin_mode else None
    constraints: list[Any] = [x >> 0, cp.real(cp.trace(x)) <= 1.0]

    for c in prob.constraints:
        gram = np.outer(c.h.conj(), c.h)
        q = nu * cp.real(cp.trace(gram @ x))
        if c.sense is Sense.GE:
            constraints.append(q - c.bound >= t if t is not None else q >= c.bound)
        else:
            constraints.append(q <= c.bound)

    if t is not None:
        objective = cp.Maximize(t)
    else:
        assert prob.objective is not None
        c_mat = 0.5 * (prob.objective + prob.objective.conj().T)
        scale = float(np.linalg.norm(c_mat))
        objective = cp.Maximize(cp.real(cp.trace((c_mat / scale) @ x)))

    problem = cp.Problem(objective, constraints)
    try:
        problem.solve(solver=backend, **_backend_options(backend, settings.max_iter))
    except cp.error.SolverError as e:
        raise SolverError(
            f"Backend {backend} failed", status="error", backend=backend
        ) from e

    stats = problem.solver_stats
    diagnostics: dict[str, Any] = {
        "backend": backend,
        "status": problem.status,
        "iterations": getattr(stats, "num_iters", None),
        "solve_time": getattr(stats, "solve_time", None),
    }

    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        raise InfeasibleError(
            "Conic subproblem is infeasible", diagnostics=diagnostics, backend=backend
        )
    if x.value is None or problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise MaxIterError(
            f"Backend {backend} stopped without a solution",
            iterations=int(diagnostics["iterations"] or settings.max_iter),
            diagnostics=diagnostics,
            backend=backend,
        )

    raw = np.asarray(x.value, dtype=np.complex128)
    # X has unit trace bound, so tol_psd is relative to the budget
    lowest = float(np.linalg.eigvalsh(0.5 * (raw + raw.conj().T))[0])
    diagnostics["min_eigenvalue"] = lowest
    if lowest < -settings.tol_psd:
        _logger.debug("psd_clipped", min_eigenvalue=lowest, backend=backend)
    w_mat = psd_cleanup(nu * raw)
    if problem.status == cp.OPTIMAL_INACCURATE:
        violation = _relaxed_violation(prob, w_mat, margin_mode)
        if violation > 10.0 * settings.tol_feas:
            raise MaxIterError(
                f"Backend {backend} returned an inaccurate solution",
                iterations=int(diagnostics["iterations"] or settings.max_iter),
                diagnostics={**diagnostics, "violation": violation},
                backend=backend,
            )
    return w_mat, diagnostics


def _fallback(settings: SolverSettings) -> SolverFallback:
    return SolverFallback(FallbackConfig(backends=settings.backends))


def _ge_value_and_grad(
    hr: FloatArray, hi: FloatArray, xr: FloatArray, xi: FloatArray
) -> tuple[float, FloatArray]:
    """|h w|^2 and its gradient over (Re w, Im w)."""
    a = float(hr @ xr - hi @ xi)
    b = float(hr @ xi + hi @ xr)
    grad = np.concatenate([2.0 * (a * hr + b * hi), 2.0 * (-a * hi + b * hr)])
    return a * a + b * b, grad


def _polish_vector(prob: SdpProblem, w0: ComplexArray, settings: SolverSettings) -> ComplexArray:
    """Local margin maximization over rank-one points with SLSQP."""
    n = prob.dim
    nu = prob.trace_bound

    def split(z: FloatArray) -> tuple[FloatArray, FloatArray]:
        return z[:n], z[n : 2 * n]

    def make_constraint(h: ComplexArray, bound: float, sense: Sense) -> list[dict[str, Any]]:
        hr, hi = np.real(h), np.imag(h)

        def fun(z: FloatArray) -> float:
            xr, xi = split(z)
            q, _ = _ge_value_and_grad(hr, hi, xr, xi)
            return q - bound - z[-1] if sense is Sense.GE else bound - q

        def jac(z: FloatArray) -> FloatArray:
            xr, xi = split(z)
            _, grad = _ge_value_and_grad(hr, hi, xr, xi)
            if sense is Sense.GE:
                return np.concatenate([grad, [-1.0]])
            return np.concatenate([-grad, [0.0]])

        return [{"type": "ineq", "fun": fun, "jac": jac}]

    constraints: list[dict[str, Any]] = []
    for c in prob.constraints:
        constraints.extend(make_constraint(c.h, c.bound, c.sense))
    constraints.append(
        {
            "type": "ineq",
            "fun": lambda z: nu - float(z[: 2 * n] @ z[: 2 * n]),
            "jac": lambda z: np.concatenate([-2.0 * z[: 2 * n], [0.0]]),
        }
    )

    z0 = np.concatenate([np.real(w0), np.imag(w0), [prob.margin(np.outer(w0, w0.conj()))]])
    if not math.isfinite(z0[-1]):
        z0[-1] = 0.0
    result = minimize(
        lambda z: -z[-1],
        z0,
        jac=lambda z: np.concatenate([np.zeros(2 * n), [-1.0]]),
        constraints=constraints,
        method="SLSQP",
        options={"maxiter": settings.sca_max_iter, "ftol": 1e-14},
    )
    xr, xi = split(result.x)
    return xr + 1j * xi


def _randomized_vector(
    prob: SdpProblem, w_mat: ComplexArray, settings: SolverSettings
) -> ComplexArray | None:
    """Gaussian randomization around W, rescaled to meet the ``>=`` rows."""
    vals, vecs = np.linalg.eigh(0.5 * (w_mat + w_mat.conj().T))
    root = vecs * np.sqrt(np.clip(vals, 0.0, None))
    rng = np.random.default_rng(0)
    n = prob.dim
    best: ComplexArray | None = None
    best_margin = -math.inf
    for _ in range(RANDOMIZATION_SAMPLES):
        xi = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
        cand = root @ xi
        ge = [abs(c.h @ cand) ** 2 / c.bound for c in prob.ge_constraints if c.bound > 0]
        if not ge or min(ge) <= 0.0:
            continue
        cand = cand / math.sqrt(min(ge))
        if prob.vector_violation(cand) <= settings.tol_feas:
            margin = prob.margin(np.outer(cand, cand.conj()))
            if margin > best_margin:
                best, best_margin = cand, margin
    return best


def refine_rank_one(
    prob: SdpProblem,
    w_mat: ComplexArray,
    settings: SolverSettings | None = None,
) -> ComplexArray | None:
    """Rank-one feasible point near a feasible SDP solution.

    Tries the scaled dominant eigenvector, then SLSQP margin polishing from
    it, then Gaussian randomization. Returns None if none is feasible.
    """
    settings = settings or SolverSettings()
    try:
        w0, _ = extract_rank_one(w_mat, prob.trace_bound, settings.tol_psd)
    except DegenerateError:
        return None

    if prob.vector_violation(w0) <= settings.tol_feas:
        return canonicalize(w0)

    polished = _polish_vector(prob, w0, settings)
    if prob.vector_violation(polished) <= settings.tol_feas:
        return canonicalize(polished)

    randomized = _randomized_vector(prob, w_mat, settings)
    return canonicalize(randomized) if randomized is not None else None


def _zero_budget_solution(prob: SdpProblem, margin_mode: bool) -> SdpSolution:
    zero = np.zeros((prob.dim, prob.dim), dtype=np.complex128)
    margin = prob.margin(zero)
    feasible = prob.violation(zero) == 0.0
    if not margin_mode and not feasible:
        raise InfeasibleError("Zero trace bound cannot meet the saturation constraints")
    return SdpSolution(
        w_matrix=zero,
        status=SdpStatus.OPTIMAL if feasible else SdpStatus.INFEASIBLE,
        primal_violation=prob.violation(zero),
        objective_value=margin if margin_mode else 0.0,
        margin=margin,
        w_vector=np.zeros(prob.dim, dtype=np.complex128) if feasible else None,
    )


def solve_feasibility_sdp(
    prob: SdpProblem,
    settings: SolverSettings | None = None,
    refine: bool = True,
) -> SdpSolution:
    """Decide feasibility of the saturation constraints within the trace ball.

    Solved as margin maximization: maximize t subject to
    h W h^H - bound >= t on the ``>=`` rows, the ``<=`` rows and the trace
    bound held hard. Feasible iff t* >= -tol_feas. Feasible solutions with
    ``>=`` rows are refined to a rank-one matrix.

    Raises:
        FallbackExhaustedError: If every backend fails.
    """
    settings = settings or SolverSettings()
    prob = prob.as_feasibility()

    if not prob.ge_constraints or prob.trace_bound == 0.0:
        return _zero_budget_solution(prob, margin_mode=True)

    w_mat, diagnostics = _fallback(settings).execute(
        lambda backend: _solve_cvx(prob, backend, settings, margin_mode=True)
    )
    margin = prob.margin(w_mat)

    if margin < -settings.tol_feas:
        _logger.debug("sdp_infeasible", margin=margin, **diagnostics)
        return SdpSolution(
            w_matrix=w_mat,
            status=SdpStatus.INFEASIBLE,
            primal_violation=prob.violation(w_mat),
            objective_value=margin,
            margin=margin,
            rank_one_defect=rank_one_defect(w_mat),
            backend=str(diagnostics["backend"]),
            diagnostics=diagnostics,
        )

    w_vector: ComplexArray | None = None
    if refine:
        w_vector = refine_rank_one(prob, w_mat, settings)
        if w_vector is not None:
            w_mat = np.outer(w_vector, w_vector.conj())

    defect = rank_one_defect(w_mat)
    if defect > settings.tol_rank_one:
        _logger.warning("rank_one_defect", defect=defect, dim=prob.dim, **diagnostics)

    _logger.debug("sdp_solved", kind="feasibility", margin=margin, defect=defect, **diagnostics)
    return SdpSolution(
        w_matrix=w_mat,
        status=SdpStatus.OPTIMAL,
        primal_violation=prob.violation(w_mat),
        objective_value=margin,
        margin=prob.margin(w_mat),
        rank_one_defect=defect,
        w_vector=w_vector,
        backend=str(diagnostics["backend"]),
        diagnostics=diagnostics,
    )


def solve_linear_sdp(prob: SdpProblem, settings: SolverSettings | None = None) -> SdpSolution:
    """maximize Re Tr{C^H W} over the constraint set and the trace ball.

    A zero objective is delegated to ``solve_feasibility_sdp``.

    Raises:
        InfeasibleError: If the constraint set is empty.
        FallbackExhaustedError: If every backend fails otherwise.
    """
    settings = settings or SolverSettings()

    if prob.is_feasibility:
        solution = solve_feasibility_sdp(prob, settings)
        if not solution.feasible:
            raise InfeasibleError(
                "Saturation cell does not meet the trace ball", margin=solution.margin
            )
        return solution

    if prob.trace_bound == 0.0:
        return _zero_budget_solution(prob, margin_mode=False)

    w_mat, diagnostics = _fallback(settings).execute(
        lambda backend: _solve_cvx(prob, backend, settings, margin_mode=False)
    )
    assert prob.objective is not None
    value = float(np.real(np.trace(prob.objective.conj().T @ w_mat)))
    violation = prob.violation(w_mat)
    if violation > settings.tol_feas:
        _logger.warning("sdp_violation", violation=violation, **diagnostics)

    defect = rank_one_defect(w_mat)
    _logger.debug("sdp_solved", kind="linear", objective=value, defect=defect, **diagnostics)
    return SdpSolution(
        w_matrix=w_mat,
        status=SdpStatus.OPTIMAL,
        primal_violation=violation,
        objective_value=value,
        margin=prob.margin(w_mat),
        rank_one_defect=defect,
        backend=str(diagnostics["backend"]),
        diagnostics=diagnostics,
    )

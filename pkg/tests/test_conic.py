"""Tests for the Hermitian SDP subproblems, rank-one extraction and backend fallback."""

import math

import numpy as np
import pytest
from assertpy import assert_that

from mimowpt.config import SolverSettings
from mimowpt.conic import (
    FallbackConfig,
    QuadConstraint,
    SdpProblem,
    SdpStatus,
    Sense,
    SolverFallback,
    extract_rank_one,
    psd_cleanup,
    rank_one_defect,
    refine_rank_one,
    solve_feasibility_sdp,
    solve_linear_sdp,
)
from mimowpt.exceptions import (
    DegenerateError,
    DimensionError,
    DomainError,
    FallbackExhaustedError,
    InfeasibleError,
    MaxIterError,
    SolverError,
)
from mimowpt.utils import canonicalize


def _random_rows(rng: np.random.Generator, n_rows: int, n_t: int) -> np.ndarray:
    return (rng.standard_normal((n_rows, n_t)) + 1j * rng.standard_normal((n_rows, n_t))) / math.sqrt(2)


def _direction_grid(points: int = 300) -> np.ndarray:
    """Unit vectors (cos t, sin t e^{j f}); the global phase is irrelevant."""
    t = np.linspace(0.0, 0.5 * math.pi, points)
    f = np.linspace(-math.pi, math.pi, points, endpoint=False)
    tt, ff = np.meshgrid(t, f, indexing="ij")
    return np.stack([np.cos(tt).ravel(), (np.sin(tt) * np.exp(1j * ff)).ravel()], axis=1)


def _brute_force_margin(prob: SdpProblem, directions: np.ndarray) -> float:
    """Best smallest slack over rank-one points nu v v^H, sign per constraint sense."""
    h = np.array([c.h for c in prob.constraints])
    q = prob.trace_bound * np.abs(directions @ h.T) ** 2
    signs = np.array([1.0 if c.sense is Sense.GE else -1.0 for c in prob.constraints])
    slack = signs * (q - np.array([c.bound for c in prob.constraints]))
    return float(np.max(np.min(slack, axis=1)))


def _unit_directions(rng: np.random.Generator, n_t: int, samples: int = 40_000) -> np.ndarray:
    if n_t == 1:
        return np.ones((1, 1), dtype=np.complex128)
    if n_t == 2:
        return _direction_grid()
    v = rng.standard_normal((samples, n_t)) + 1j * rng.standard_normal((samples, n_t))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# =============================================================================
# Problem types
# =============================================================================


class TestSdpProblem:
    """Constraint bookkeeping."""

    def test_constraint_length_checked(self):
        with pytest.raises(DimensionError):
            SdpProblem(dim=2, constraints=(QuadConstraint(np.ones(3), Sense.GE),))

    def test_negative_trace_bound_rejected(self):
        with pytest.raises(DomainError):
            SdpProblem(dim=1, trace_bound=-1.0)

    def test_margin_and_violation(self):
        prob = SdpProblem(
            dim=2,
            constraints=(
                QuadConstraint(np.array([1.0, 0.0]), Sense.GE),
                QuadConstraint(np.array([0.0, 1.0]), Sense.LE),
            ),
            trace_bound=4.0,
        )
        w_mat = np.diag([3.0, 2.0]).astype(np.complex128)
        assert_that(prob.margin(w_mat)).is_equal_to(2.0)
        # second row exceeds its bound by 1
        assert_that(prob.violation(w_mat)).is_equal_to(1.0)
        # trace 5 against bound 4 is a relative excess of 0.25
        assert_that(prob.violation(np.diag([5.0, 0.0]).astype(np.complex128))).is_equal_to(0.25)

    def test_feasibility_flag(self):
        assert_that(SdpProblem(dim=2).is_feasibility).is_true()
        assert_that(SdpProblem(dim=2, objective=np.zeros((2, 2))).is_feasibility).is_true()
        assert_that(SdpProblem(dim=2, objective=np.eye(2)).is_feasibility).is_false()


# =============================================================================
# Rank-one helpers
# =============================================================================


class TestRankOne:
    """Eigen-extraction and cleanup."""

    def test_extract_scaled_projector(self):
        u = np.array([0.6, 0.8j])
        w, defect = extract_rank_one(3.0 * np.outer(u, u.conj()), nu=10.0)
        np.testing.assert_allclose(w, math.sqrt(3.0) * canonicalize(u), atol=1e-12)
        assert_that(defect).is_less_than_or_equal_to(1e-12)

    def test_extract_respects_trace_bound(self):
        w, defect = extract_rank_one(np.diag([2.0, 1.0]).astype(np.complex128), nu=2.0)
        np.testing.assert_allclose(w, [math.sqrt(2.0), 0.0], atol=1e-12)
        assert_that(defect).is_close_to(0.5, 1e-12)

    def test_extract_zero_raises(self):
        with pytest.raises(DegenerateError):
            extract_rank_one(np.zeros((2, 2)), nu=1.0)

    def test_extract_tolerates_round_off_below_zero(self):
        w_mat = np.diag([1.0, -5e-10]).astype(np.complex128)
        w, _ = extract_rank_one(w_mat, nu=1.0, tol_psd=1e-9)
        np.testing.assert_allclose(np.abs(w), [1.0, 0.0], atol=1e-9)

    def test_extract_indefinite_raises(self):
        with pytest.raises(DomainError):
            extract_rank_one(np.diag([1.0, -0.1]).astype(np.complex128), nu=1.0, tol_psd=1e-9)

    def test_solver_matrix_within_psd_tolerance(self, fast_settings):
        prob = SdpProblem(
            dim=2,
            constraints=(QuadConstraint(np.array([1.0, 0.5j]), Sense.GE, 0.5),),
            trace_bound=1.0,
            objective=np.diag([1.0, 0.2]).astype(np.complex128),
        )
        solution = solve_linear_sdp(prob, fast_settings)
        lowest = float(np.linalg.eigvalsh(solution.w_matrix).min())
        assert_that(lowest).is_greater_than_or_equal_to(-fast_settings.tol_psd)
        assert_that(solution.diagnostics).contains_key("min_eigenvalue")

    def test_defect_of_scalar_matrix(self):
        assert_that(rank_one_defect(np.array([[2.0]]))).is_equal_to(0.0)

    def test_psd_cleanup(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        cleaned = psd_cleanup(a)
        np.testing.assert_allclose(cleaned, cleaned.conj().T, atol=1e-12)
        assert_that(float(np.linalg.eigvalsh(cleaned).min())).is_greater_than_or_equal_to(-1e-9)


# =============================================================================
# Feasibility problem
# =============================================================================


class TestFeasibilitySdp:
    """Margin maximization over the saturation constraints."""

    @pytest.mark.parametrize("factor, feasible", [(1.05, True), (0.95, False)])
    def test_single_rectenna_threshold(self, factor, feasible):
        """Feasible iff nu ||h||^2 >= 1 (MRT reaches the bound)."""
        h = np.array([0.6 - 0.2j, 0.3 + 0.5j])
        nu = factor / float(np.vdot(h, h).real)
        prob = SdpProblem(dim=2, constraints=(QuadConstraint(h, Sense.GE),), trace_bound=nu)
        solution = solve_feasibility_sdp(prob)
        assert_that(solution.feasible).is_equal_to(feasible)
        if feasible:
            assert_that(solution.w_vector).is_not_none()
            assert_that(prob.vector_violation(solution.w_vector)).is_less_than_or_equal_to(1e-7)
        else:
            assert_that(solution.status).is_equal_to(SdpStatus.INFEASIBLE)
            assert_that(solution.margin).is_negative()

    def test_no_saturated_rows_gives_zero(self):
        h = np.array([1.0, 1.0])
        prob = SdpProblem(dim=2, constraints=(QuadConstraint(h, Sense.LE),), trace_bound=2.0)
        solution = solve_feasibility_sdp(prob)
        assert_that(solution.feasible).is_true()
        assert_that(float(np.abs(solution.w_matrix).max())).is_equal_to(0.0)

    def test_zero_budget_with_saturated_row_is_infeasible(self):
        prob = SdpProblem(
            dim=1, constraints=(QuadConstraint(np.array([1.0]), Sense.GE),), trace_bound=0.0
        )
        assert_that(solve_feasibility_sdp(prob).feasible).is_false()

    def test_objective_is_ignored(self):
        h = np.array([1.0, 0.0])
        prob = SdpProblem(
            dim=2,
            constraints=(QuadConstraint(h, Sense.GE),),
            trace_bound=2.0,
            objective=np.eye(2),
        )
        assert_that(solve_feasibility_sdp(prob).feasible).is_true()

    def test_agrees_with_rank_one_brute_force(self):
        """Brute-force feasible at margin >= 1e-5 implies the solver reports feasible."""
        rng = np.random.default_rng(2024)
        directions = _direction_grid()
        checked = 0
        for _ in range(25):
            n_rows = int(rng.integers(1, 4))
            # saturation cells always pin the strongest rows, as in the beam search
            h = _random_rows(rng, n_rows, 2)
            h = h[np.argsort(-np.linalg.norm(h, axis=1), kind="stable")]
            k = int(rng.integers(1, n_rows + 1))
            constraints = tuple(
                QuadConstraint(h[i], Sense.GE if i < k else Sense.LE) for i in range(n_rows)
            )
            prob = SdpProblem(2, constraints, trace_bound=float(rng.uniform(0.3, 4.0)))
            brute = _brute_force_margin(prob, directions)
            solution = solve_feasibility_sdp(prob)
            if brute >= 1e-5:
                checked += 1
                assert_that(solution.feasible).is_true()
            if solution.feasible:
                # every feasible solve with saturated rows ends rank one
                assert_that(solution.rank_one_defect).is_less_than_or_equal_to(1e-6)
                assert_that(solution.w_vector).is_not_none()
                violation = prob.vector_violation(solution.w_vector)
                assert_that(violation).is_less_than_or_equal_to(1e-7)
        assert_that(checked).is_greater_than(0)

    @pytest.mark.slow
    def test_agrees_with_brute_force_up_to_three_antennas(self):
        """100 instances with N_t, N_e <= 3; random unit vectors replace the grid at N_t = 3."""
        rng = np.random.default_rng(31)
        checked = 0
        for _ in range(100):
            n_t = int(rng.integers(1, 4))
            n_rows = int(rng.integers(1, 4))
            h = _random_rows(rng, n_rows, n_t)
            h = h[np.argsort(-np.linalg.norm(h, axis=1), kind="stable")]
            k = int(rng.integers(1, n_rows + 1))
            constraints = tuple(
                QuadConstraint(h[i], Sense.GE if i < k else Sense.LE) for i in range(n_rows)
            )
            prob = SdpProblem(n_t, constraints, trace_bound=float(rng.uniform(0.3, 4.0)))
            brute = _brute_force_margin(prob, _unit_directions(rng, n_t))
            solution = solve_feasibility_sdp(prob)
            if brute >= 1e-5:
                checked += 1
                assert_that(solution.feasible).is_true()
                assert_that(solution.rank_one_defect).is_less_than_or_equal_to(1e-6)
        assert_that(checked).is_greater_than(10)

    def test_feasibility_monotone_in_budget(self):
        rng = np.random.default_rng(7)
        h = _random_rows(rng, 3, 3)
        constraints = (
            QuadConstraint(h[0], Sense.GE),
            QuadConstraint(h[1], Sense.GE),
            QuadConstraint(h[2], Sense.LE),
        )
        verdicts = [
            solve_feasibility_sdp(SdpProblem(3, constraints, trace_bound=nu)).feasible
            for nu in np.linspace(0.1, 6.0, 12)
        ]
        first = verdicts.index(True) if True in verdicts else len(verdicts)
        assert_that(all(verdicts[first:])).is_true()


class TestRefineRankOne:
    """Eigenvector, polish and randomization."""

    def test_returns_feasible_vector(self):
        h1 = np.array([1.0, 0.2j])
        h2 = np.array([0.3, 1.0])
        prob = SdpProblem(
            2, (QuadConstraint(h1, Sense.GE), QuadConstraint(h2, Sense.GE)), trace_bound=3.0
        )
        # full-rank start: the dominant eigenvector alone does not meet both rows
        w = refine_rank_one(prob, np.diag([1.5, 1.5]).astype(np.complex128))
        assert_that(w).is_not_none()
        assert_that(prob.vector_violation(w)).is_less_than_or_equal_to(1e-7)
        # canonical phase
        assert_that(float(np.imag(w[0]))).is_equal_to(0.0)
        assert_that(float(np.real(w[0]))).is_greater_than_or_equal_to(0.0)

    def test_zero_matrix_gives_none(self):
        prob = SdpProblem(1, (QuadConstraint(np.array([1.0]), Sense.GE),), trace_bound=1.0)
        assert_that(refine_rank_one(prob, np.zeros((1, 1)))).is_none()


# =============================================================================
# Linear problem
# =============================================================================


class TestLinearSdp:
    """maximize Re Tr{C^H W} over the cell and the trace ball."""

    def test_rank_one_objective(self):
        g = np.array([0.8 + 0.1j, -0.3 + 0.4j])
        nu = 2.0
        prob = SdpProblem(dim=2, trace_bound=nu, objective=np.outer(g.conj(), g))
        solution = solve_linear_sdp(prob)
        expected = nu * float(np.vdot(g, g).real)
        assert_that(solution.objective_value).is_close_to(expected, 1e-6 * expected)
        w, _ = extract_rank_one(solution.w_matrix, nu)
        alignment = abs(np.vdot(g.conj(), w)) / (np.linalg.norm(g) * np.linalg.norm(w))
        assert_that(float(alignment)).is_close_to(1.0, 1e-6)

    def test_identity_objective(self):
        solution = solve_linear_sdp(SdpProblem(dim=3, trace_bound=1.5, objective=np.eye(3)))
        assert_that(solution.objective_value).is_close_to(1.5, 1.5e-6)

    def test_random_hermitian_objective(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        c = a + a.conj().T + 6.0 * np.eye(2)
        nu = 0.7
        expected = nu * float(np.linalg.eigvalsh(c).max())
        solution = solve_linear_sdp(SdpProblem(dim=2, trace_bound=nu, objective=c))
        assert_that(solution.objective_value).is_close_to(expected, 1e-6 * expected)

    def test_constraints_respected(self):
        g = np.array([1.0, 0.0])
        cap = QuadConstraint(np.array([1.0, 0.0]), Sense.LE, bound=0.5)
        prob = SdpProblem(dim=2, constraints=(cap,), trace_bound=2.0, objective=np.outer(g, g))
        solution = solve_linear_sdp(prob)
        assert_that(solution.objective_value).is_close_to(0.5, 1e-6)
        assert_that(solution.primal_violation).is_less_than_or_equal_to(1e-7)

    def test_zero_objective_delegates(self):
        prob = SdpProblem(
            dim=1, constraints=(QuadConstraint(np.array([1.0]), Sense.GE),), trace_bound=2.0
        )
        assert_that(solve_linear_sdp(prob).feasible).is_true()

    def test_empty_cell_raises(self):
        prob = SdpProblem(
            dim=1, constraints=(QuadConstraint(np.array([1.0]), Sense.GE),), trace_bound=0.5
        )
        with pytest.raises(InfeasibleError):
            solve_linear_sdp(prob)

    def test_zero_budget(self):
        prob = SdpProblem(dim=2, trace_bound=0.0, objective=np.eye(2))
        solution = solve_linear_sdp(prob)
        assert_that(solution.objective_value).is_equal_to(0.0)


# =============================================================================
# Backend fallback
# =============================================================================


class TestSolverFallback:
    """Ordered retry over conic backends."""

    def test_first_backend_wins(self):
        fallback = SolverFallback(FallbackConfig(backends=("A", "B")))
        assert_that(fallback.execute(lambda backend: backend)).is_equal_to("A")

    def test_falls_back_on_solver_error(self, log_events):
        calls: list[str] = []
        failed: list[str] = []

        def solve(backend: str) -> str:
            calls.append(backend)
            if backend == "A":
                raise MaxIterError("stalled", iterations=10)
            return backend

        fallback = SolverFallback(FallbackConfig(backends=("A", "B")))
        result = fallback.execute(solve, on_fallback=lambda b, e: failed.append(b))
        assert_that(result).is_equal_to("B")
        assert_that(calls).is_equal_to(["A", "B"])
        assert_that(failed).is_equal_to(["A"])
        events = [e for e in log_events if e["event"] == "solver_fallback"]
        assert_that(events).is_length(1)
        assert_that(events[0]).contains_entry({"failed_backend": "A"}, {"next_backend": "B"})

    def test_infeasible_is_not_retried(self):
        calls: list[str] = []

        def solve(backend: str) -> str:
            calls.append(backend)
            raise InfeasibleError("empty")

        with pytest.raises(InfeasibleError):
            SolverFallback(FallbackConfig(backends=("A", "B"))).execute(solve)
        assert_that(calls).is_equal_to(["A"])

    def test_exhausted(self):
        def solve(backend: str) -> str:
            raise SolverError(f"{backend} broke", status="error")

        with pytest.raises(FallbackExhaustedError) as exc:
            SolverFallback(FallbackConfig(backends=("A", "B"))).execute(solve)
        assert_that(exc.value.backends).is_equal_to(("A", "B"))
        assert_that(str(exc.value.__cause__)).contains("B broke")

    def test_unknown_backend_falls_back_to_scs(self):
        """An unavailable cvxpy backend is skipped."""
        settings = SolverSettings(backends=("NOT_A_SOLVER", "SCS"))
        prob = SdpProblem(dim=2, trace_bound=1.0, objective=np.eye(2))
        solution = solve_linear_sdp(prob, settings)
        assert_that(solution.backend).is_equal_to("SCS")
        assert_that(solution.objective_value).is_close_to(1.0, 1e-4)

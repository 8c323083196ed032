"""Fast deterministic acceptance checks behind ``mimowpt selftest``."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from mimowpt.channel.rician import generate_rician
from mimowpt.exceptions.errors import WptError
from mimowpt.harness.config import ExperimentConfig
from mimowpt.logging.setup import get_logger
from mimowpt.rectenna.model import harvested_power, saturation_power
from mimowpt.specfn.functions import BRANCH_POINT, bessel_i0, bessel_i1, lambert_w0
from mimowpt.strategy.grid import build_grid_table, grid_minmax_policy
from mimowpt.strategy.lemma import ScalarFunctionTable, brute_force_chord, solve_two_point
from mimowpt.verify.checks import PolicyCheck

I0_AT_1 = 1.2660658777520082
I1_AT_1 = 0.5651591039924851

SISO_GRID_POINTS = 20

_logger = get_logger("mimowpt.harness")


@dataclass(frozen=True)
class SelfTestResult:
    name: str
    passed: bool
    detail: str


def _special_functions(cfg: ExperimentConfig) -> str:
    rng = np.random.default_rng(cfg.seed)
    x = np.concatenate([rng.uniform(BRANCH_POINT + 1e-6, 1.0, 500), rng.uniform(1.0, 1e3, 500)])
    w = lambert_w0(x)
    residual = float(np.max(np.abs(w * np.exp(w) - x) / np.maximum(1.0, np.abs(x))))
    if residual > 1e-12:
        raise AssertionError(f"Lambert-W residual {residual:.3e}")
    err0 = abs(bessel_i0(1.0) - I0_AT_1) / I0_AT_1
    err1 = abs(bessel_i1(1.0) - I1_AT_1) / I1_AT_1
    if max(err0, err1) > 1e-10:
        raise AssertionError(f"Bessel error I0 {err0:.3e}, I1 {err1:.3e}")
    return f"W0 residual {residual:.1e}, Bessel error {max(err0, err1):.1e}"


def _eh_model(cfg: ExperimentConfig) -> str:
    p = cfg.params
    phi_sat = saturation_power(p)
    if harvested_power(p, 0.0) != 0.0:
        raise AssertionError("phi(0) is not zero")
    above = harvested_power(p, np.linspace(p.a_s_sq, 4.0 * p.a_s_sq, 50))
    if not np.all(above == phi_sat):
        raise AssertionError("phi does not clamp above A_s^2")
    curve = harvested_power(p, np.linspace(0.0, 4.0 * p.a_s_sq, 1000))
    if np.any(np.diff(curve) < 0.0):
        raise AssertionError("phi is not monotone")
    return f"phi_sat {phi_sat:.6e} W"


def _synthetic_tables() -> list[ScalarFunctionTable]:
    nu = np.linspace(0.0, 1.0, 41)
    logistic = 1.0 / (1.0 + np.exp(-12.0 * (nu - 0.5)))
    return [
        ScalarFunctionTable(nu, nu**2),
        ScalarFunctionTable(nu, np.sqrt(nu)),
        ScalarFunctionTable(nu, np.minimum(logistic, 0.9)),
        ScalarFunctionTable(nu, np.where(nu < 0.3, 0.0, np.minimum(nu, 0.7))),
    ]


def _two_point_oracle(cfg: ExperimentConfig) -> str:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for tab in _synthetic_tables():
        for nu_bar in rng.uniform(0.01, 1.0, 10):
            gap = abs(solve_two_point(tab, nu_bar).value - brute_force_chord(tab, nu_bar))
            worst = max(worst, gap)
    if worst > 1e-12:
        raise AssertionError(f"Two-point value off the chord oracle by {worst:.3e}")
    return f"max gap {worst:.1e}"


def _siso_pipeline(cfg: ExperimentConfig) -> str:
    g = generate_rician(cfg.seed, 1, 1, cfg.distance, cfg.rician_k)
    gain_sq = float(np.abs(g.g[0, 0]) ** 2)
    step = 1.5 * cfg.params.a_s_sq / gain_sq / SISO_GRID_POINTS
    tab = build_grid_table(
        g, cfg.params, step, SISO_GRID_POINTS, seed=cfg.seed, settings=cfg.solver
    )

    closed = harvested_power(cfg.params, tab.rho * gain_sq)
    table_gap = float(np.max(np.abs(tab.phi - closed)))
    if table_gap > 1e-9:
        raise AssertionError(f"SISO grid off the closed form by {table_gap:.3e}")

    oracle = ScalarFunctionTable(tab.rho, closed)
    worst = 0.0
    for m in (3, 7, 12):
        for p_x in (float(tab.rho[m]), float(tab.rho[m] + 0.4 * step)):
            policy = grid_minmax_policy(tab, p_x)
            PolicyCheck(policy, g, cfg.params).assert_all()
            worst = max(worst, abs(policy.avg_phi - solve_two_point(oracle, p_x).value))
    if worst > 1e-9:
        raise AssertionError(f"SISO policy off the closed-form two-point value by {worst:.3e}")
    return f"table gap {table_gap:.1e}, policy gap {worst:.1e}"


SELFTESTS: tuple[tuple[str, Callable[[ExperimentConfig], str]], ...] = (
    ("special_functions", _special_functions),
    ("eh_model", _eh_model),
    ("two_point_oracle", _two_point_oracle),
    ("siso_pipeline", _siso_pipeline),
)


def run_selftest(cfg: ExperimentConfig) -> list[SelfTestResult]:
    """Run every self-test; failures are reported, never raised."""
    results: list[SelfTestResult] = []
    for name, test in SELFTESTS:
        try:
            detail = test(cfg)
            results.append(SelfTestResult(name, True, detail))
        except (AssertionError, WptError) as e:
            results.append(SelfTestResult(name, False, str(e)))
        _logger.info("selftest_ran", test=name, passed=results[-1].passed)
    return results


def format_selftest(results: list[SelfTestResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}" for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} passed")
    return "\n".join(lines)

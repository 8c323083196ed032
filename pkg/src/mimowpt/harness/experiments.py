"""Experiment runners behind the CLI subcommands."""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from mimowpt import __version__
from mimowpt.baselines.schemes import energy_beamforming_policy, single_beam_policy
from mimowpt.channel.rician import ChannelMatrix, generate_rician, realization_seed
from mimowpt.exceptions.errors import CheckError, WptError
from mimowpt.harness.config import ExperimentConfig, ExperimentKind
from mimowpt.logging.setup import get_logger, realization_context
from mimowpt.rectenna.model import harvested_power, received_powers, saturation_power, total_power
from mimowpt.strategy.grid import GridTable, build_grid_table, grid_minmax_policy
from mimowpt.strategy.policy import TwoPointPolicy, average_harvested_power, save_policy
from mimowpt.utils.units import watt_to_dbm
from mimowpt.verify.checks import PolicyCheck
from mimowpt.verify.report import validate_report

FloatArray = npt.NDArray[np.float64]

CSV_DIGITS = 12
PHI_CURVE_POINTS = 401

SCHEMES = ("proposed", "baseline1", "baseline2")

_logger = get_logger("mimowpt.harness")


def format_number(value: float | int | None) -> str:
    """Decimal with 12 significant digits; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.{CSV_DIGITS}g}"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_number(v) if v is None or isinstance(v, (int, float)) else v for v in row]
            )
    return path


def _write_metadata(path: Path, cfg: ExperimentConfig, extra: dict[str, Any]) -> Path:
    meta_path = path.with_name(path.name + ".meta.json")
    meta = {"version": __version__, "config": cfg.describe(), **extra}
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return meta_path


# =============================================================================
# phi-curve
# =============================================================================


def run_phi_curve(
    cfg: ExperimentConfig,
    output: Path | None = None,
    points: int = PHI_CURVE_POINTS,
) -> list[tuple[float, float]]:
    """Sample the single-rectenna curve phi(z_sq) on [0, 4·A_s^2].

    Writes ``z_sq_W,phi_W`` to ``output`` (or ``cfg.output``) when given.
    """
    points = max(points, PHI_CURVE_POINTS)
    z_sq = np.linspace(0.0, 4.0 * cfg.params.a_s_sq, points)
    phi = harvested_power(cfg.params, z_sq)
    rows = [(float(z), float(p)) for z, p in zip(z_sq, phi, strict=True)]

    target = output or cfg.output
    if target is not None:
        write_csv(target, ("z_sq_W", "phi_W"), rows)
        _logger.info("phi_curve_written", path=str(target), points=points)
    return rows


# =============================================================================
# optimize
# =============================================================================


@dataclass
class OptimizeResult:
    """Policy, grid and JSON report of a single-instance optimization."""

    policy: TwoPointPolicy
    grid: GridTable
    report: dict[str, Any]
    failed_checks: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed_checks


def _grid_index(tab: GridTable, nu: float) -> int:
    return int(min(max(round(nu / tab.step), 0), tab.size))


def _beam_report(
    name: str, w: Any, nu: float, tab: GridTable, g: ChannelMatrix, cfg: ExperimentConfig
) -> dict[str, Any]:
    index = _grid_index(tab, nu)
    return {
        "name": name,
        "nu_w": nu,
        "psi_w": total_power(cfg.params, g, w),
        "received_powers_w": [float(q) for q in received_powers(g, w)],
        "k_star": int(tab.k_star[index]),
        "sca_iters": int(tab.sca_iters[index]),
    }


def _run_checks(
    policy: TwoPointPolicy, g: ChannelMatrix, cfg: ExperimentConfig, references: dict[str, float]
) -> tuple[list[str], list[str]]:
    check = PolicyCheck(policy, g, cfg.params)
    failed: list[str] = []
    steps: list[tuple[str, Callable[[], object]]] = [
        ("probability", check.assert_probability),
        ("budget", check.assert_budget),
        ("norms", check.assert_norms),
        ("value_consistent", check.assert_value_consistent),
    ]
    steps.extend(
        (f"dominates:{label}", lambda v=value, lbl=label: check.assert_dominates(v, label=lbl))
        for label, value in references.items()
    )
    for name, step in steps:
        try:
            step()
        except CheckError as e:
            _logger.warning("policy_check_failed", check=name, error=str(e))
            failed.append(name)
    return check.passed, failed


def run_optimize(
    cfg: ExperimentConfig,
    channel: ChannelMatrix | None = None,
    channel_path: Path | None = None,
    policy_path: Path | None = None,
    report_path: Path | None = None,
) -> OptimizeResult:
    """Grid search, two-point policy, baselines and report for one channel.

    Uses the first entries of ``cfg.n_t``, ``cfg.n_e`` and ``cfg.p_x``. Without
    a channel, one is generated from the seed of realization 0.

    Raises:
        ValidationError: If the assembled report does not match its schema.
    """
    p_x = cfg.p_x[0]
    if channel is None:
        channel = generate_rician(
            realization_seed(cfg.seed, 0), cfg.n_t[0], cfg.n_e[0], cfg.distance, cfg.rician_k
        )
        source = "generated"
    else:
        source = "file"

    log = _logger.bind(n_t=channel.n_t, n_e=channel.n_e, p_x=p_x)
    log.info("optimize_started", source=source)

    tab = build_grid_table(
        channel, cfg.params, cfg.grid.step, cfg.grid.size, seed=cfg.seed, settings=cfg.solver
    )
    policy = grid_minmax_policy(tab, p_x)
    eb = energy_beamforming_policy(channel, cfg.params, p_x)
    sb = single_beam_policy(channel, cfg.params, p_x, seed=cfg.seed, settings=cfg.solver)

    # dominance over the baselines is only guaranteed for budgets on the grid
    on_grid = abs(p_x / tab.step - round(p_x / tab.step)) <= 1e-9
    references = {"energy_beamforming": eb.avg_phi, "single_beam": sb.avg_phi} if on_grid else {}
    passed, failed = _run_checks(policy, channel, cfg, references)

    meta = channel.meta
    channel_info: dict[str, Any] = {
        "source": source,
        "distance_m": meta.distance,
        "rician_k": None if meta.rician_k is None else _finite_or_str(meta.rician_k),
        "seed": meta.seed,
    }
    if channel_path is not None:
        channel_info["path"] = str(channel_path)

    report: dict[str, Any] = {
        "version": __version__,
        "config": {
            "n_t": channel.n_t,
            "n_e": channel.n_e,
            "p_x_w": p_x,
            "grid_step_w": cfg.grid.step,
            "grid_size": cfg.grid.size,
            "eps_sca": cfg.solver.eps_sca,
            "n_restarts": cfg.solver.n_restarts,
            "seed": cfg.seed,
        },
        "channel": channel_info,
        "policy": {
            "p_x_w": policy.p_x,
            "nu1_w": policy.nu1,
            "nu2_w": policy.nu2,
            "beta": policy.beta,
            "avg_phi_w": policy.avg_phi,
            "expected_power_w": policy.expected_power,
        },
        "beams": [
            _beam_report("w1", policy.w1, policy.nu1, tab, channel, cfg),
            _beam_report("w2", policy.w2, policy.nu2, tab, channel, cfg),
        ],
        "grid": {
            "points": tab.size + 1,
            "step_w": tab.step,
            "max_budget_w": tab.max_budget,
            "saturated": tab.saturated,
            "invalid_points": int(np.count_nonzero(~tab.valid)),
            "repaired_points": int(np.count_nonzero(tab.repaired)),
            "phi_sat_w": tab.phi_sat,
            "ceiling_w": tab.ceiling,
        },
        "baselines": {
            "energy_beamforming": {"avg_phi_w": eb.avg_phi},
            "single_beam": {
                "avg_phi_w": sb.avg_phi,
                "k_star": sb.k_star,
                "sca_iters": sb.sca_iters,
            },
        },
        "checks": {"passed": passed, "failed": failed},
    }
    validate_report(report)

    if policy_path is not None:
        save_policy(policy, policy_path)
    if report_path is not None:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        report_path.write_text(dumps_report(report), encoding="utf-8")

    log.info(
        "optimize_finished",
        avg_phi=policy.avg_phi,
        beta=policy.beta,
        nu1=policy.nu1,
        nu2=policy.nu2,
        failed_checks=failed,
    )
    return OptimizeResult(policy=policy, grid=tab, report=report, failed_checks=failed)


def _finite_or_str(value: float) -> float | str:
    return value if math.isfinite(value) else str(value)


def dumps_report(report: dict[str, Any]) -> str:
    """Deterministic JSON rendering (sorted keys, no timestamps)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# =============================================================================
# experiment
# =============================================================================


@dataclass(frozen=True)
class SystemSetup:
    """One antenna configuration of a sweep and the schemes run on it."""

    label: str
    n_t: int
    n_e: int
    schemes: tuple[str, ...] = SCHEMES


@dataclass(frozen=True)
class RealizationOutcome:
    """avg_phi per scheme and budget for one channel realization."""

    index: int
    values: dict[str, tuple[float, ...]] = field(default_factory=dict)
    error: str | None = None


@dataclass
class SweepRow:
    system: str
    n_t: int
    n_e: int
    p_x: float
    realizations: int
    failed: int
    mean: dict[str, float | None]
    stderr: dict[str, float | None]

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class ExperimentResult:
    kind: ExperimentKind
    rows: list[SweepRow]
    output: Path | None = None

    @property
    def failed_rows(self) -> int:
        return sum(1 for row in self.rows if not row.ok)


def sweep_setups(cfg: ExperimentConfig, kind: ExperimentKind) -> list[SystemSetup]:
    """Antenna configurations visited by an experiment kind."""
    n_t, n_e = cfg.n_t[0], cfg.n_e[0]
    if kind is ExperimentKind.BUDGET_SWEEP:
        return [SystemSetup(f"{n_t}x{n_e}", n_t, n_e)]
    if kind is ExperimentKind.NE_SWEEP:
        return [SystemSetup(f"{n_t}x{k}", n_t, k) for k in cfg.n_e]
    if kind is ExperimentKind.NT_SWEEP:
        return [SystemSetup(f"{k}x{n_e}", k, n_e) for k in cfg.n_t]
    return [
        SystemSetup("siso", 1, 1, ("proposed",)),
        SystemSetup("simo", 1, n_e, ("proposed",)),
        SystemSetup("miso", n_t, 1, ("proposed",)),
        SystemSetup("mimo", n_t, n_e),
    ]


def _evaluate_setup(
    cfg: ExperimentConfig, g: ChannelMatrix, setup: SystemSetup
) -> dict[str, tuple[float, ...]]:
    values: dict[str, tuple[float, ...]] = {}
    if "proposed" in setup.schemes:
        tab = build_grid_table(
            g, cfg.params, cfg.grid.step, cfg.grid.size, seed=cfg.seed, settings=cfg.solver
        )
        values["proposed"] = tuple(
            average_harvested_power(grid_minmax_policy(tab, p), g, cfg.params) for p in cfg.p_x
        )
    if "baseline1" in setup.schemes:
        values["baseline1"] = tuple(
            energy_beamforming_policy(g, cfg.params, p).avg_phi for p in cfg.p_x
        )
    if "baseline2" in setup.schemes:
        values["baseline2"] = tuple(
            single_beam_policy(g, cfg.params, p, seed=cfg.seed, settings=cfg.solver).avg_phi
            for p in cfg.p_x
        )
    return values


def _evaluate_realization(
    cfg: ExperimentConfig, setups: tuple[SystemSetup, ...], index: int
) -> list[RealizationOutcome]:
    """All setups on one channel draw; module-level so worker processes can pickle it."""
    seed = realization_seed(cfg.seed, index)
    n_t_max = max(s.n_t for s in setups)
    n_e_max = max(s.n_e for s in setups)
    full = generate_rician(seed, n_t_max, n_e_max, cfg.distance, cfg.rician_k)

    outcomes: list[RealizationOutcome] = []
    for setup in setups:
        with realization_context(index, setup.label):
            try:
                values = _evaluate_setup(cfg, full.subset(setup.n_t, setup.n_e), setup)
                outcomes.append(RealizationOutcome(index=index, values=values))
            except WptError as e:
                _logger.error("realization_failed", error=str(e))
                outcomes.append(RealizationOutcome(index=index, error=str(e)))
    return outcomes


def _mean_and_stderr(samples: list[float]) -> tuple[float | None, float | None]:
    if not samples:
        return None, None
    arr = np.asarray(samples)
    stderr = float(np.std(arr, ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(np.mean(arr)), stderr


def _aggregate(
    cfg: ExperimentConfig,
    setups: Sequence[SystemSetup],
    per_realization: list[list[RealizationOutcome]],
) -> list[SweepRow]:
    rows: list[SweepRow] = []
    for s_idx, setup in enumerate(setups):
        outcomes = [r[s_idx] for r in per_realization]
        ok = [o for o in outcomes if o.error is None]
        failed = len(outcomes) - len(ok)
        for b_idx, p_x in enumerate(cfg.p_x):
            mean: dict[str, float | None] = {}
            stderr: dict[str, float | None] = {}
            for scheme in SCHEMES:
                if scheme not in setup.schemes:
                    mean[scheme] = stderr[scheme] = None
                    continue
                mean[scheme], stderr[scheme] = _mean_and_stderr(
                    [o.values[scheme][b_idx] for o in ok]
                )
            rows.append(
                SweepRow(
                    system=setup.label,
                    n_t=setup.n_t,
                    n_e=setup.n_e,
                    p_x=p_x,
                    realizations=len(ok),
                    failed=failed,
                    mean=mean,
                    stderr=stderr,
                )
            )
    return rows


def experiment_header() -> list[str]:
    header = ["system", "n_t", "n_e", "p_x_W", "p_x_dBm", "realizations", "failed", "status"]
    for scheme in SCHEMES:
        header.extend([f"{scheme}_mean_W", f"{scheme}_stderr_W"])
    return header


def _row_cells(row: SweepRow) -> list[Any]:
    cells: list[Any] = [
        row.system,
        row.n_t,
        row.n_e,
        row.p_x,
        watt_to_dbm(row.p_x),
        row.realizations,
        row.failed,
        "ok" if row.ok else "failed",
    ]
    for scheme in SCHEMES:
        cells.extend([row.mean[scheme], row.stderr[scheme]])
    return cells


def run_experiment(
    cfg: ExperimentConfig,
    kind: ExperimentKind | None = None,
    output: Path | None = None,
) -> ExperimentResult:
    """Monte Carlo sweep: mean and standard error of avg_phi per scheme.

    Realizations run on ``cfg.workers`` processes; results are assembled in
    realization order, so the output only depends on the configuration.
    Failed realizations are counted in their row and the run continues.
    """
    kind = kind or cfg.kind
    setups = tuple(sweep_setups(cfg, kind))
    indices = range(cfg.realizations)
    log = _logger.bind(kind=str(kind), realizations=cfg.realizations, workers=cfg.workers)
    log.info("experiment_started", setups=[s.label for s in setups])

    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            per_realization = list(
                pool.map(
                    _evaluate_realization,
                    [cfg] * len(indices),
                    [setups] * len(indices),
                    indices,
                )
            )
    else:
        per_realization = [_evaluate_realization(cfg, setups, i) for i in indices]

    rows = _aggregate(cfg, setups, per_realization)
    target = output or cfg.output
    if target is not None:
        write_csv(target, experiment_header(), (_row_cells(r) for r in rows))
        _write_metadata(
            target,
            cfg,
            {"kind": str(kind), "phi_sat_w": saturation_power(cfg.params)},
        )

    result = ExperimentResult(kind=kind, rows=rows, output=target)
    log.info("experiment_finished", rows=len(rows), failed_rows=result.failed_rows)
    return result

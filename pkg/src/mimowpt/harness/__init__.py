"""Experiment harness and command line interface."""

from mimowpt.harness.config import (
    ExperimentConfig,
    ExperimentKind,
    config_from_dict,
    load_config,
)
from mimowpt.harness.experiments import (
    ExperimentResult,
    OptimizeResult,
    SweepRow,
    SystemSetup,
    dumps_report,
    run_experiment,
    run_optimize,
    run_phi_curve,
    sweep_setups,
)
from mimowpt.harness.selftest import SelfTestResult, format_selftest, run_selftest

__all__ = [
    "ExperimentConfig",
    "ExperimentKind",
    "config_from_dict",
    "load_config",
    "ExperimentResult",
    "OptimizeResult",
    "SweepRow",
    "SystemSetup",
    "dumps_report",
    "run_experiment",
    "run_optimize",
    "run_phi_curve",
    "sweep_setups",
    "SelfTestResult",
    "format_selftest",
    "run_selftest",
]

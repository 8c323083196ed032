"""Command line entry point: ``mimowpt <subcommand>``.

Exit codes: 0 on success, 1 if a sweep row, a policy check or a self-test
failed, 2 for configuration, input-file or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path

from mimowpt import __version__
from mimowpt.channel.io import load_channel
from mimowpt.config.settings import Settings
from mimowpt.exceptions.errors import (
    ChannelFormatError,
    ConfigurationError,
    ValidationError,
    WptError,
)
from mimowpt.harness.config import ExperimentConfig, ExperimentKind, load_config
from mimowpt.harness.experiments import (
    dumps_report,
    run_experiment,
    run_optimize,
    run_phi_curve,
)
from mimowpt.harness.selftest import format_selftest, run_selftest
from mimowpt.logging.setup import configure_logging, get_logger
from mimowpt.utils.units import parse_power

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _power(value: str) -> float:
    try:
        return parse_power(value)
    except ConfigurationError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _config_flags() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; they override the YAML file."""
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("configuration")
    group.add_argument("-c", "--config", type=Path, help="YAML experiment file")
    group.add_argument("--n-t", type=int, nargs="+", help="TX antenna count(s)")
    group.add_argument("--n-e", type=int, nargs="+", help="rectenna count(s)")
    group.add_argument(
        "--p-x", type=_power, nargs="+", help="power budget(s), e.g. 10, '10 W', '40 dBm'"
    )
    group.add_argument("--distance", type=float, help="TX-EH distance in meter")
    group.add_argument("--rician-k", type=float, help="Rician factor")
    group.add_argument("--realizations", type=int, help="number of channel realizations")
    group.add_argument("--seed", type=int, help="master seed")
    group.add_argument("--grid-step", type=float, help="power grid step in watt")
    group.add_argument("--grid-size", type=int, help="number of power grid steps")
    group.add_argument("--eps-sca", type=float, help="relative SCA stopping threshold")
    group.add_argument("--restarts", type=int, help="SCA restarts per power level")
    group.add_argument("-o", "--output", type=Path, help="output table path")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _config_flags()
    parser = argparse.ArgumentParser(
        prog="mimowpt",
        description="Two-beam transmit strategies for MIMO wireless power transfer",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-format", choices=("json", "console"))
    parser.add_argument("--workers", type=int, help="worker processes (default MIMOWPT_WORKERS)")

    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("phi-curve", parents=[parent], help="export the rectenna curve")
    curve.add_argument("--points", type=int, default=401, help="samples on [0, 4 A_s^2]")

    opt = sub.add_parser("optimize", parents=[parent], help="optimize one channel")
    opt.add_argument("--channel", type=Path, help="channel file (default: generate from seed)")
    opt.add_argument("--policy-out", type=Path, help="policy record path")
    opt.add_argument("--report-out", type=Path, help="JSON report path (default: stdout)")

    exp = sub.add_parser("experiment", parents=[parent], help="Monte Carlo sweep")
    exp.add_argument("--kind", choices=[k.value for k in ExperimentKind])

    sub.add_parser("selftest", parents=[parent], help="fast acceptance checks")
    return parser


def _build_config(args: argparse.Namespace, settings: Settings) -> ExperimentConfig:
    cfg = load_config(args.config, settings)
    solver_flags = {"eps_sca": args.eps_sca, "n_restarts": args.restarts}
    grid_flags = {"step": args.grid_step, "size": args.grid_size}
    solver = replace(cfg.solver, **{k: v for k, v in solver_flags.items() if v is not None})
    grid = replace(cfg.grid, **{k: v for k, v in grid_flags.items() if v is not None})
    kind = getattr(args, "kind", None)
    return cfg.with_overrides(
        kind=ExperimentKind(kind) if kind else None,
        n_t=tuple(args.n_t) if args.n_t else None,
        n_e=tuple(args.n_e) if args.n_e else None,
        p_x=tuple(args.p_x) if args.p_x else None,
        distance=args.distance,
        rician_k=args.rician_k,
        realizations=args.realizations,
        seed=args.seed,
        grid=grid,
        solver=solver,
        output=args.output,
        workers=args.workers,
    )


def _dispatch(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    if args.command == "phi-curve":
        rows = run_phi_curve(cfg, points=args.points)
        if cfg.output is None:
            print("z_sq_W,phi_W")
            for z, phi in rows:
                print(f"{z:.12g},{phi:.12g}")
        return EXIT_OK

    if args.command == "optimize":
        channel = load_channel(args.channel) if args.channel else None
        result = run_optimize(
            cfg,
            channel=channel,
            channel_path=args.channel,
            policy_path=args.policy_out,
            report_path=args.report_out,
        )
        if args.report_out is None:
            sys.stdout.write(dumps_report(result.report))
        return EXIT_OK if result.ok else EXIT_FAILED

    if args.command == "experiment":
        experiment = run_experiment(cfg)
        if experiment.output is None:
            print(f"{len(experiment.rows)} rows, {experiment.failed_rows} failed")
        return EXIT_OK if experiment.failed_rows == 0 else EXIT_FAILED

    results = run_selftest(cfg)
    print(format_selftest(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = Settings.from_env()
    overrides: dict[str, object] = {}
    logging_overrides = {
        k: v for k, v in (("level", args.log_level), ("format", args.log_format)) if v
    }
    if logging_overrides:
        overrides["logging"] = logging_overrides
    if args.workers is not None:
        overrides["workers"] = args.workers
    settings = settings.merge(overrides)
    configure_logging(settings.logging, force=True)
    logger = get_logger("mimowpt.cli")

    try:
        cfg = _build_config(args, settings)
        return _dispatch(args, cfg)
    except (ConfigurationError, ChannelFormatError, ValidationError) as e:
        print(f"mimowpt: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except WptError as e:
        logger.error("command_failed", command=args.command, error=str(e))
        print(f"mimowpt: error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
ddsim - Main Entry Point

Dynamical decoupling with imperfect pulses: fidelity curves for UDD and
QDD sequences, plus an acceptance suite against closed-form results.
"""

import sys
import argparse
from pathlib import Path

from dotenv import load_dotenv
from loguru import logger

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from core.config import Config
from core.application import Application, EXIT_CONFIG
from core.errors import ConfigError
from utils.system_check import SystemCheck

DEFAULT_CONFIG_PATH = "config/config.yml"

# flag -> dotted config key
OVERRIDES = {
    "protocol": "run.protocol",
    "level": "run.level",
    "output": "run.output",
    "t_min": "time_grid.start",
    "t_max": "time_grid.stop",
    "points": "time_grid.count",
    "spacing": "time_grid.spacing",
    "b": "bath.b",
    "eps0": "errors.epsilon0",
    "n0": "errors.n0",
    "mx": "errors.in_plane_mx",
    "ny": "errors.in_plane_ny",
    "error_mode": "errors.mode",
    "method": "ensemble.method",
    "samples": "ensemble.n_samples",
    "seed": "ensemble.seed",
    "nodes_b": "ensemble.nodes_b",
    "nodes_eps": "ensemble.nodes_eps",
    "nodes_nz": "ensemble.nodes_nz",
    "bath_rule": "ensemble.bath_rule",
    "pi_z_order": "ensemble.pi_z_order",
}


def setup_logging(config: Config):
    """Configure logging with loguru."""
    log_level = config.get("logging.level", "INFO")
    log_file = config.get("logging.file")

    # Remove default handler
    logger.remove()

    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=log_level,
        colorize=True
    )

    if log_file:
        logger.add(
            log_file,
            rotation="10 MB",
            retention="1 week",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level=log_level
        )


def _add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--protocol", choices=["udd", "qdd", "qdd-zy"], help="Pulse sequence family")
    parser.add_argument("--level", type=int, help="Sequence level")


def _add_physics_options(parser: argparse.ArgumentParser):
    parser.add_argument("--b", type=float, help="Bath width in rad per time unit")
    parser.add_argument("--eps0", type=float, help="Rotation-angle error scale")
    parser.add_argument("--n0", type=float, help="Axis-tilt error scale")
    parser.add_argument("--mx", type=float, help="In-plane tilt of π_Y pulses")
    parser.add_argument("--ny", type=float, help="In-plane tilt of π_X pulses")
    parser.add_argument("--error-mode", choices=["independent", "correlated_spatial"])
    parser.add_argument("--method", choices=["quadrature", "monte_carlo"])
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    parser.add_argument("--nodes-b", type=int, help="Bath quadrature nodes")
    parser.add_argument("--nodes-eps", type=int, help="Angle-error quadrature nodes")
    parser.add_argument("--nodes-nz", type=int, help="Tilt-error quadrature nodes")
    parser.add_argument("--bath-rule", choices=["auto", "hermite", "uniform"])
    parser.add_argument("--pi-z-order", choices=["xy", "yx"], help="Which pulse of a composite π_Z acts first")


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool = False):
    """--config, --preset and --debug, accepted before or after the subcommand."""

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--config",
        type=str,
        default=default(DEFAULT_CONFIG_PATH),
        help="Path to configuration file"
    )

    parser.add_argument(
        "--preset",
        type=str,
        choices=sorted(Config.PRESETS),
        default=default(None),
        help="Named parameter bundle (applied over the config file)"
    )

    parser.add_argument(
        "--debug",
        action="store_true",
        default=default(False),
        help="Enable debug mode"
    )


def parse_arguments(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="ddsim - Dynamical decoupling with imperfect pulses"
    )
    _add_global_options(parser)

    # sub-level copies are suppressed when absent so they never mask the top-level values
    common = argparse.ArgumentParser(add_help=False)
    _add_global_options(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="Compute a fidelity curve and write CSV + metadata")
    _add_run_options(simulate)
    _add_physics_options(simulate)
    simulate.add_argument("--t-min", type=float, help="Grid start time")
    simulate.add_argument("--t-max", type=float, help="Grid stop time")
    simulate.add_argument("--points", type=int, help="Grid points after t=0")
    simulate.add_argument("--spacing", choices=["linear", "log-with-zero"])
    simulate.add_argument("--output", type=str, help="CSV output path")
    simulate.add_argument("--sequence", type=str, help="Event list from export-sequence to simulate instead of the built schedule")

    validate = sub.add_parser("validate", parents=[common], help="Run the acceptance suite")
    _add_physics_options(validate)

    export = sub.add_parser("export-sequence", parents=[common], help="Dump the pulse schedule as text")
    _add_run_options(export)
    export.add_argument("--t", type=float, default=1.0, help="Total time")
    export.add_argument("--output", type=str, help="Write to file instead of stdout")

    return parser.parse_args(argv)


def apply_overrides(config: Config, args: argparse.Namespace):
    """Flags override the preset and the config file."""
    for flag, key in OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None and not (flag == "output" and args.command == "export-sequence"):
            config.set(key, value)
    if args.debug:
        config.set("logging.level", "DEBUG")


def main(argv=None):
    """Main entry point."""
    load_dotenv()
    args = parse_arguments(argv)

    try:
        explicit = args.config != DEFAULT_CONFIG_PATH
        config = Config(args.config, preset=args.preset, required=explicit)
        apply_overrides(config, args)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    setup_logging(config)

    try:
        logger.info("Running system checks...")
        system_check = SystemCheck(config)
        if not system_check.run_all_checks(write_output=args.command == "simulate"):
            logger.error("System checks failed. Please fix the issues and try again.")
            return 1

        app = Application(config=config)
        if args.command == "simulate":
            return app.run_sweep(args.sequence)
        if args.command == "validate":
            return app.run_validate()
        return app.export_sequence(args.t, args.output)

    except KeyboardInterrupt:
        logger.info("Shutdown requested by user")
        return 0

    except Exception as e:
        logger.exception(f"Fatal error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

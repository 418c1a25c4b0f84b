"""
Main application class for the decoupling simulator.
"""

from pathlib import Path
from typing import Optional

from loguru import logger
from rich.console import Console

from . import __version__
from .config import Config
from .ensemble.ensemble_sim import FidelityCurve, sweep
from .errors import ConfigError, DDSimError
from .reporting.curve_io import write_curve
from .reporting.validation import Validator, render_report
from .sequences.sequence_builder import PulseSequence, build_sequence, parse_sequence_text, zy_structure_report

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


class Application:
    """Runs one command against a resolved configuration."""

    def __init__(self, config: Config, console: Optional[Console] = None):
        """Initialize application.

        Args:
            config: Configuration object
            console: Rich console for tables (stdout by default)
        """
        self.config = config
        self.console = console or Console()
        self.last_curve: Optional[FidelityCurve] = None

    def _guard(self, action, name: str) -> int:
        """Run an action and map its outcome to an exit code."""
        try:
            return action()
        except ConfigError as e:
            logger.error(f"Invalid configuration: {e}")
            return EXIT_CONFIG
        except DDSimError as e:
            logger.error(f"{name} failed: {e}")
            return EXIT_FAILURE
        except KeyboardInterrupt:
            logger.info("Shutdown requested")
            return EXIT_FAILURE
        except Exception as e:
            logger.exception(f"{name} error: {e}")
            return EXIT_FAILURE

    def run_sweep(self, sequence_path: Optional[str] = None) -> int:
        """Simulate the configured protocol over the time grid and write the curve.

        Args:
            sequence_path: Event list written by export-sequence, used instead of the built schedule
        """
        return self._guard(lambda: self._run_sweep(sequence_path), "simulate")

    def _run_sweep(self, sequence_path: Optional[str]) -> int:
        protocol, level = self.config.protocol, self.config.level
        ensemble = self.config.to_ensemble_config()
        times = self.config.time_grid()
        output = Path(str(self.config.get("run.output")))

        seq = self._load_sequence(sequence_path) if sequence_path else build_sequence(protocol, level, 1.0)
        structure = zy_structure_report(seq)
        logger.info(f"{protocol.value.upper()}-{level}: {seq.pulse_count} pulses ({seq.physical_pulse_count} physical)")

        curve = sweep(protocol, level, times, ensemble, sequence=seq)
        curve.metadata.update(
            {
                "pulse_count": seq.pulse_count,
                "physical_pulse_count": seq.physical_pulse_count,
                "merged_pairs": structure.merged_count,
                "t2_star": ensemble.bath.t2_star,
                "workers": ensemble.workers,
                "code_version": __version__,
            }
        )
        if sequence_path:
            curve.metadata["sequence_file"] = str(sequence_path)

        write_curve(curve, output, self.config.to_dict())
        self.last_curve = curve
        logger.success(f"Simulation complete: {len(curve.rows)} rows")
        return EXIT_OK

    def _load_sequence(self, path: str) -> PulseSequence:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError("sequence", f"cannot read sequence file {path}: {e}") from e

        seq = parse_sequence_text(text, self.config.protocol, self.config.level)
        if seq.total_time <= 0:
            raise ConfigError("sequence", f"sequence file {path} has zero total time and cannot be stretched")
        logger.info(f"Loaded {len(seq.events)} events from {path} (exported at t={seq.total_time:g})")
        return seq

    def run_validate(self) -> int:
        """Run the acceptance suite; exit 0 iff every check passes."""
        return self._guard(self._run_validate, "validate")

    def _run_validate(self) -> int:
        validator = Validator(self.config.to_ensemble_config())
        checks = validator.run()
        render_report(checks, self.console)

        failed = [c for c in checks if not c.passed]
        if failed:
            logger.error(f"{len(failed)} of {len(checks)} checks failed:")
            for check in failed:
                logger.error(f"  • {check.name}: target {check.target}, computed {check.computed}")
            return EXIT_FAILURE

        logger.success(f"All {len(checks)} checks passed")
        return EXIT_OK

    def export_sequence(self, t: float, output: Optional[str] = None) -> int:
        """Dump the event list of the configured sequence at total time t."""
        return self._guard(lambda: self._export_sequence(t, output), "export-sequence")

    def _export_sequence(self, t: float, output: Optional[str]) -> int:
        seq = build_sequence(self.config.protocol, self.config.level, t)
        text = seq.to_text()
        if output:
            path = Path(output)
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text)
            except OSError as e:
                raise DDSimError(f"cannot write sequence to {path}: {e}") from e
            logger.info(f"Wrote {len(seq.events)} events to {path}")
        else:
            self.console.print(text, end="", markup=False, highlight=False)

        logger.info(zy_structure_report(seq).summary())
        return EXIT_OK

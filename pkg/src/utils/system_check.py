"""
Environment checks run before a simulation.
"""

import os
import platform
import sys
import tempfile
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Tuple

import psutil
from loguru import logger
from packaging.version import InvalidVersion, Version

from core.config import Config
from core.errors import ConfigError

# bytes held per ensemble member while a chunk is propagated (U, pulse stacks, samples)
BYTES_PER_MEMBER = 512

# distribution name -> (import name, minimum version)
REQUIRED: Dict[str, Tuple[str, str]] = {
    "numpy": ("numpy", "1.24"),
    "scipy": ("scipy", "1.10"),
    "pyyaml": ("yaml", "6.0"),
    "loguru": ("loguru", "0.7"),
    "rich": ("rich", "13.0"),
    "psutil": ("psutil", "5.9"),
    "python-dotenv": ("dotenv", "1.0"),
    "packaging": ("packaging", "21.0"),
}


class SystemCheck:
    """Pre-run environment checks.

    Each check appends to `errors` (fatal) or `warnings` and returns
    whether it passed.
    """

    def __init__(self, config: Config):
        self.config = config
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def check_interpreter(self) -> bool:
        """Python 3.9+ on a platform the numerics have been run on."""
        major, minor = sys.version_info[:2]
        if (major, minor) < (3, 9):
            self.errors.append(f"Python 3.9+ required, found {major}.{minor}")
            return False

        system = platform.system()
        if system not in ("Linux", "Darwin", "Windows"):
            self.warnings.append(f"Untested platform: {system}")
        logger.debug(f"Python {major}.{minor} on {system} {platform.machine()}")
        return True

    def check_dependencies(self) -> bool:
        """Numerical and runtime packages at their minimum versions."""
        problems = []
        for dist, (module, minimum) in REQUIRED.items():
            try:
                __import__(module)
                found = metadata.version(dist)
            except (ImportError, metadata.PackageNotFoundError):
                problems.append(f"{dist} missing")
                continue
            try:
                too_old = Version(found) < Version(minimum)
            except InvalidVersion:
                self.warnings.append(f"Cannot parse {dist} version {found!r}")
                continue
            if too_old:
                problems.append(f"{dist} {found} < {minimum}")
            else:
                logger.debug(f"{dist} {found}")

        if problems:
            self.errors.append(f"Dependencies: {'; '.join(problems)}. Run: pip install -r requirements.txt")
            return False
        return True

    def check_workers(self) -> bool:
        """DDSIM_WORKERS, when set, must be a positive integer."""
        try:
            count = self.config.workers()
        except ConfigError as e:
            self.errors.append(str(e))
            return False

        cpus = os.cpu_count() or 1
        if count > cpus:
            self.warnings.append(f"DDSIM_WORKERS={count} exceeds the {cpus} available CPUs")
        logger.debug(f"Workers: {count}")
        return True

    def check_ensemble_size(self) -> bool:
        """Check that one propagation chunk per worker fits in memory."""
        method = self.config.get("ensemble.method", "quadrature")
        chunk = int(self.config.get("ensemble.chunk_size", 65536))
        if method == "quadrature":
            members = int(self.config.get("ensemble.nodes_b", 32)) * int(self.config.get("ensemble.nodes_eps", 16))
            if self.config.get("errors.mode", "independent") == "independent":
                members *= int(self.config.get("ensemble.nodes_nz", 16))
        else:
            members = int(self.config.get("ensemble.n_samples", 100000))

        try:
            workers = self.config.workers()
        except ConfigError:
            # reported by check_workers
            workers = 1
        needed = min(members, chunk) * BYTES_PER_MEMBER * workers
        available = psutil.virtual_memory().available

        if needed > available:
            self.errors.append(
                f"Chunk needs {needed / 1024**2:.0f}MB, only {available / 1024**2:.0f}MB available. "
                "Lower ensemble.chunk_size"
            )
            return False

        if members > 2_000_000:
            self.warnings.append(f"Large ensemble: {members} members per time point (before bath refinement)")
        logger.debug(f"Ensemble: {members} members per time point")
        return True

    def check_output_dir(self) -> bool:
        """The directory of run.output exists (or can be created) and is writable."""
        directory = Path(str(self.config.get("run.output", "output/curve.csv"))).parent
        try:
            directory.mkdir(parents=True, exist_ok=True)
            with tempfile.NamedTemporaryFile(dir=directory):
                pass
        except OSError as e:
            self.errors.append(f"Cannot write curves to {directory}: {e}")
            return False
        return True

    def run_all_checks(self, write_output: bool = True) -> bool:
        """Run every check and log one summary.

        Args:
            write_output: Include the output directory check

        Returns:
            True if no check reported an error
        """
        checks = [self.check_interpreter, self.check_dependencies, self.check_workers, self.check_ensemble_size]
        if write_output:
            checks.append(self.check_output_dir)

        passed = True
        for check in checks:
            try:
                passed &= check()
            except Exception as e:
                self.errors.append(f"{check.__name__} raised {e!r}")
                passed = False

        for warning in self.warnings:
            logger.warning(f"System check: {warning}")
        for error in self.errors:
            logger.error(f"System check: {error}")

        if passed and not self.errors:
            logger.success(f"System checks passed ({len(checks)} run, {len(self.warnings)} warnings)")
            return True
        return False

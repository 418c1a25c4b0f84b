"""
Configuration management for the decoupling simulator.
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import yaml
from loguru import logger

from .errors import ConfigError, DDSimError
from .ensemble.ensemble_sim import EnsembleConfig, Method
from .pulses.pulse_model import BathParams, ErrorMode, PiZOrder, PulseErrorParams
from .pulses.quadrature import BATH_RULES
from .sequences.sequence_builder import Protocol

WORKERS_ENV = "DDSIM_WORKERS"
SPACINGS = ("linear", "log-with-zero")

# sections written by sidecars and ignored on load
PASSIVE_SECTIONS = ("metadata",)


class Config:
    """Configuration manager."""

    DEFAULT_CONFIG = {
        "run": {
            "protocol": "udd",
            "level": 2,
            "output": "output/curve.csv",
        },
        "time_grid": {
            "start": 0.0,
            "stop": 60.0,
            "count": 120,
            "spacing": "linear",
        },
        "bath": {
            "b": 1.0,
        },
        "errors": {
            "epsilon0": 0.3,
            "n0": -0.12,
            "in_plane_mx": 0.0,
            "in_plane_ny": 0.0,
            "mode": "independent",
        },
        "ensemble": {
            "method": "quadrature",
            "nodes_b": 32,
            "nodes_eps": 16,
            "nodes_nz": 16,
            "n_samples": 100000,
            "seed": 0,
            "bath_rule": "auto",
            "pi_z_order": "xy",
            "chunk_size": 65536,
        },
        "logging": {
            "level": "INFO",
            "file": None,
        },
    }

    # Si:P donor ensemble: b in rad/µs, times in µs
    PRESETS = {
        "si-p": {
            "bath": {"b": 0.8804},
            "errors": {"epsilon0": 0.3, "n0": -0.12},
            "time_grid": {"start": 0.0, "stop": 2000.0, "count": 200},
        },
    }

    def __init__(self, config_path: Optional[str] = None, preset: Optional[str] = None, required: bool = False):
        """Initialize configuration.

        Defaults, then the file, then the preset. Command-line flags are
        applied afterwards with set().

        Args:
            config_path: Path to YAML configuration file
            preset: Named parameter bundle applied over the file
            required: Treat a missing file as an error instead of using defaults
        """
        self._config = copy.deepcopy(self.DEFAULT_CONFIG)
        self._config_path = Path(config_path) if config_path else None

        if self._config_path and self._config_path.exists():
            self._load_from_file()
        elif self._config_path and required:
            raise ConfigError("config", f"file not found: {self._config_path}")
        elif self._config_path:
            logger.warning(f"Config file not found: {config_path}, using defaults")

        if preset:
            self.apply_preset(preset)

    def apply_preset(self, name: str):
        if name not in self.PRESETS:
            raise ConfigError("preset", f"unknown preset {name!r}, expected one of {sorted(self.PRESETS)}")
        self._deep_update(self._config, copy.deepcopy(self.PRESETS[name]))
        logger.info(f"Applied preset {name}")

    def _load_from_file(self):
        """Load configuration from YAML file."""
        try:
            with open(self._config_path, "r") as f:
                user_config = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError("config", f"cannot read {self._config_path}: {e}") from e

        if user_config is None:
            return
        if not isinstance(user_config, dict):
            raise ConfigError("config", f"{self._config_path} must contain a mapping")

        user_config = {k: v for k, v in user_config.items() if k not in PASSIVE_SECTIONS}
        self._check_keys(user_config)
        self._deep_update(self._config, user_config)
        logger.info(f"Loaded configuration from {self._config_path}")

    def _check_keys(self, update: Dict, prefix: str = "", base: Optional[Dict] = None):
        """Reject keys that are not part of DEFAULT_CONFIG."""
        base = self.DEFAULT_CONFIG if base is None else base
        for key, value in update.items():
            dotted = f"{prefix}{key}"
            if key not in base:
                raise ConfigError(dotted, "unknown key")
            if isinstance(base[key], dict):
                if not isinstance(value, dict):
                    raise ConfigError(dotted, "expected a section")
                self._check_keys(value, dotted + ".", base[key])

    def _deep_update(self, base_dict: Dict, update_dict: Dict) -> Dict:
        """Recursively update nested dictionary."""
        for key, value in update_dict.items():
            if isinstance(value, dict) and key in base_dict:
                self._deep_update(base_dict[key], value)
            else:
                base_dict[key] = value
        return base_dict

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation.

        Args:
            key: Dot-separated key path (e.g., 'errors.epsilon0')
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value = self._config
        try:
            for k in key.split("."):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """Set configuration value using dot notation.

        Raises:
            ConfigError: if the key is not a known setting
        """
        keys = key.split(".")
        node = self.DEFAULT_CONFIG
        for k in keys:
            if not isinstance(node, dict) or k not in node:
                raise ConfigError(key, "unknown key")
            node = node[k]

        config = self._config
        for k in keys[:-1]:
            config = config[k]
        config[keys[-1]] = value

    def save(self, path: Optional[str] = None):
        """Save configuration to file.

        Args:
            path: Path to save to (uses original path if not specified)
        """
        save_path = Path(path) if path else self._config_path
        if not save_path:
            raise ConfigError("config", "no path specified for saving configuration")

        try:
            save_path.parent.mkdir(parents=True, exist_ok=True)
            with open(save_path, "w") as f:
                yaml.safe_dump(self._config, f, default_flow_style=False, sort_keys=True)
        except OSError as e:
            raise DDSimError(f"cannot save configuration to {save_path}: {e}") from e

        logger.info(f"Configuration saved to {save_path}")

    def to_dict(self) -> Dict:
        """Get full configuration as dictionary."""
        return copy.deepcopy(self._config)

    def _number(self, key: str, kind=float, minimum: Optional[float] = None):
        value = self.get(key)
        try:
            number = kind(value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected {kind.__name__}, got {value!r}")
        if kind is int and number != value:
            raise ConfigError(key, f"expected an integer, got {value!r}")
        if not np.isfinite(number):
            raise ConfigError(key, f"must be finite, got {value!r}")
        if minimum is not None and number < minimum:
            raise ConfigError(key, f"must be at least {minimum}, got {value!r}")
        return number

    def _choice(self, key: str, choices) -> str:
        value = str(self.get(key))
        if value not in choices:
            raise ConfigError(key, f"expected one of {list(choices)}, got {value!r}")
        return value

    @property
    def protocol(self) -> Protocol:
        return Protocol(self._choice("run.protocol", [p.value for p in Protocol]))

    @property
    def level(self) -> int:
        return self._number("run.level", int, minimum=1)

    @staticmethod
    def workers() -> int:
        """Worker threads from DDSIM_WORKERS (default 1)."""
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            count = int(raw)
        except ValueError:
            raise ConfigError(WORKERS_ENV, f"expected a positive integer, got {raw!r}")
        if count < 1:
            raise ConfigError(WORKERS_ENV, f"expected a positive integer, got {raw!r}")
        return count

    def to_ensemble_config(self) -> EnsembleConfig:
        """Resolve a complete EnsembleConfig.

        Raises:
            ConfigError: naming the first offending key
        """
        b = self._number("bath.b")
        if b <= 0:
            raise ConfigError("bath.b", f"must be positive, got {b!r}")

        n0 = self._number("errors.n0")
        if abs(2 * n0) >= 1:
            raise ConfigError("errors.n0", f"|n0| must stay below 0.5, got {n0!r}")
        for key in ("errors.in_plane_mx", "errors.in_plane_ny"):
            if abs(self._number(key)) >= 1:
                raise ConfigError(key, "in-plane tilt must stay below 1")

        seed = self._number("ensemble.seed", int, minimum=0)
        if seed >= 1 << 128:
            raise ConfigError("ensemble.seed", "must be below 2**128")

        return EnsembleConfig(
            bath=BathParams(b=b),
            errors=PulseErrorParams(
                epsilon0=self._number("errors.epsilon0"),
                n0=n0,
                in_plane_mx=self._number("errors.in_plane_mx"),
                in_plane_ny=self._number("errors.in_plane_ny"),
            ),
            method=Method(self._choice("ensemble.method", [m.value for m in Method])),
            nodes_b=self._number("ensemble.nodes_b", int, minimum=2),
            nodes_eps=self._number("ensemble.nodes_eps", int, minimum=2),
            nodes_nz=self._number("ensemble.nodes_nz", int, minimum=2),
            n_samples=self._number("ensemble.n_samples", int, minimum=1),
            seed=seed,
            error_mode=ErrorMode(self._choice("errors.mode", [m.value for m in ErrorMode])),
            bath_rule=self._choice("ensemble.bath_rule", BATH_RULES),
            pi_z_order=PiZOrder(self._choice("ensemble.pi_z_order", [o.value for o in PiZOrder])),
            chunk_size=self._number("ensemble.chunk_size", int, minimum=1),
            workers=self.workers(),
        )

    def time_grid(self) -> List[float]:
        """Grid times with the explicit t = 0 point first.

        linear: 0 and start + k(stop − start)/count for k = 1..count.
        log-with-zero: 0 and count log-spaced points from start (or
        stop/1000 when start is 0) to stop.
        """
        start = self._number("time_grid.start", minimum=0.0)
        stop = self._number("time_grid.stop")
        count = self._number("time_grid.count", int, minimum=1)
        spacing = self._choice("time_grid.spacing", SPACINGS)
        if stop <= start:
            raise ConfigError("time_grid.stop", f"must exceed start ({start}), got {stop!r}")

        if spacing == "linear":
            points = start + np.arange(1, count + 1) * (stop - start) / count
        else:
            low = start if start > 0 else stop / 1000.0
            points = np.geomspace(low, stop, count)

        return [0.0] + [float(t) for t in points if t > 0]

    def __repr__(self) -> str:
        return f"Config(path={self._config_path})"

"""Shared fixtures; puts src/ on the import path the way main.py does."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from core.ensemble import EnsembleConfig  # noqa: E402
from core.pulses import BathParams, PulseErrorParams  # noqa: E402


@pytest.fixture
def zero_config():
    """Perfect pulses; only the bath remains."""
    return EnsembleConfig(errors=PulseErrorParams(epsilon0=0.0, n0=0.0), nodes_eps=2, nodes_nz=2)


@pytest.fixture
def default_config():
    return EnsembleConfig(bath=BathParams(b=1.0))


@pytest.fixture
def reduced_config():
    """Default error shape scaled into the perturbative regime."""
    return EnsembleConfig(errors=PulseErrorParams(epsilon0=0.2, n0=-0.08))


@pytest.fixture
def quick_config():
    return EnsembleConfig(nodes_b=8, nodes_eps=4, nodes_nz=4)

"""
Core package of the decoupling simulator.

Exact single-spin propagation through UDD and QDD pulse sequences with
imperfect pulses, ensemble averaging, and perturbative cross-checks.
"""

__version__ = "0.1.0"

from .application import Application
from .config import Config

__all__ = ["Application", "Config", "__version__"]

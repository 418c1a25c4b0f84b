"""
Quadrature rules for the ensemble averages.

The error integrals are taken in the spatial coordinate u = |l| ∈ [0, 1]
(Gauss–Legendre), where ε = scale·(1 − 3u²) is a polynomial and the
endpoint singularity of P(ε) disappears.

The bath integral over B ~ N(0, b²) uses Gauss–Hermite nodes while that
rule resolves the highest frequency present, and an equispaced Gaussian-
weighted rule beyond. Fidelities are trigonometric polynomials in B with
frequencies up to the total time t, so ω = b·t in units of the standard
normal variable.
"""

import math
from typing import Tuple

import numpy as np
from loguru import logger

from ..errors import ValidationError

BATH_RULES = ("auto", "hermite", "uniform")

# equispaced rule: ±UNIFORM_HALF_WIDTH standard deviations, alias margin UNIFORM_MARGIN
UNIFORM_HALF_WIDTH = 9.0
UNIFORM_MARGIN = 12.0


def spatial_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights on u ∈ [0, 1], weights summing to 1."""
    if n < 1:
        raise ValidationError(f"need at least one spatial node, got {n}")
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def hermite_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Probabilists' Gauss–Hermite rule for the standard normal density."""
    if n < 1:
        raise ValidationError(f"need at least one bath node, got {n}")
    x, w = np.polynomial.hermite_e.hermegauss(n)
    return x, w / np.sqrt(2 * np.pi)


def uniform_rule(n_min: int, omega: float) -> Tuple[np.ndarray, np.ndarray]:
    """Equispaced Gaussian-weighted rule resolving frequencies up to omega."""
    spacing = 2 * np.pi / (abs(omega) + UNIFORM_MARGIN)
    n = max(int(n_min), int(math.ceil(2 * UNIFORM_HALF_WIDTH / spacing)) + 1)
    x = np.linspace(-UNIFORM_HALF_WIDTH, UNIFORM_HALF_WIDTH, n)
    w = np.exp(-(x**2) / 2)
    return x, w / w.sum()


def hermite_resolves(n: int, omega: float) -> bool:
    """True while an n-node Gauss–Hermite rule integrates cos(ωx) to round-off."""
    return abs(omega) <= 0.6 * math.sqrt(2 * n / math.e)


def standard_normal_rule(n: int, omega: float, rule: str = "auto") -> Tuple[np.ndarray, np.ndarray, str]:
    """Pick the bath rule for highest frequency omega.

    Returns:
        nodes, weights and the name of the rule actually used
    """
    if rule not in BATH_RULES:
        raise ValidationError(f"unknown bath rule {rule!r}, expected one of {BATH_RULES}")

    if rule == "hermite" or (rule == "auto" and hermite_resolves(n, omega)):
        x, w = hermite_rule(n)
        return x, w, "hermite"

    x, w = uniform_rule(n, omega)
    logger.debug(f"Equispaced bath rule: {x.size} nodes for omega={omega:.3g}")
    return x, w, "uniform"


def bath_nodes(bath, n: int, t: float, rule: str = "auto") -> Tuple[np.ndarray, np.ndarray, str]:
    """Field values B_k = b·x_k and weights for a sequence of total time t."""
    x, w, used = standard_normal_rule(n, bath.b * t, rule)
    return bath.b * x, w, used

"""Single-spin SU(2) arithmetic."""

from .spin_core import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochState,
    Unitary2,
    bloch_vector,
    compose,
    expectation,
    phase_aligned_distance,
    rotation,
)

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "BlochState",
    "Unitary2",
    "bloch_vector",
    "compose",
    "expectation",
    "phase_aligned_distance",
    "rotation",
]

"""Pulse operators, error distributions and ensemble sampling rules."""

from .pulse_model import (
    BathParams,
    ErrorMode,
    PiZOrder,
    PulseAxis,
    PulseErrorParams,
    PulseErrorSample,
    composite_pi_z,
    draw_bath_field,
    draw_error_sample,
    error_cdf,
    error_from_spatial,
    error_inverse_cdf,
    free_evolution,
    pulse_unitary,
)

__all__ = [
    "BathParams",
    "ErrorMode",
    "PiZOrder",
    "PulseAxis",
    "PulseErrorParams",
    "PulseErrorSample",
    "composite_pi_z",
    "draw_bath_field",
    "draw_error_sample",
    "error_cdf",
    "error_from_spatial",
    "error_inverse_cdf",
    "free_evolution",
    "pulse_unitary",
]

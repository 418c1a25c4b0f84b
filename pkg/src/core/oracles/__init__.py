"""Perturbative cross-checks of the exact simulator."""

from .analytic_oracles import (
    PerturbativeOperator,
    error_moment,
    error_second_moment,
    qdd3_t0_second_order,
    qdd_t0_operator,
    qddzy_odd_t0_operator,
    udd2_fy_curve,
    udd2_fy_saturation,
    udd2_fy_stationary,
    udd2_operator,
    udd2_revival_fidelity,
    udd3_fy_long_time,
    udd3_fy_saturation,
    udd3_fy_stationary,
    udd3_operator,
    udd_t0_operator,
)

__all__ = [
    "PerturbativeOperator",
    "error_moment",
    "error_second_moment",
    "qdd3_t0_second_order",
    "qdd_t0_operator",
    "qddzy_odd_t0_operator",
    "udd2_fy_curve",
    "udd2_fy_saturation",
    "udd2_fy_stationary",
    "udd2_operator",
    "udd2_revival_fidelity",
    "udd3_fy_long_time",
    "udd3_fy_saturation",
    "udd3_fy_stationary",
    "udd3_operator",
    "udd_t0_operator",
]

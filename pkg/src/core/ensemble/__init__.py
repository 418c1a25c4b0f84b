"""Ensemble averaging and fidelity curves."""

from .ensemble_sim import (
    CurveRow,
    EnsembleAverage,
    EnsembleConfig,
    FidelityCurve,
    Method,
    TailSaturation,
    ensemble_average,
    evolve_once,
    fidelity_at,
    sweep,
)

__all__ = [
    "CurveRow",
    "EnsembleAverage",
    "EnsembleConfig",
    "FidelityCurve",
    "Method",
    "TailSaturation",
    "ensemble_average",
    "evolve_once",
    "fidelity_at",
    "sweep",
]

"""Pulse schedule generation."""

from .sequence_builder import (
    Delay,
    MergedPair,
    Protocol,
    Pulse,
    PulseSequence,
    StructureReport,
    build_qdd,
    build_sequence,
    build_udd,
    expected_pulse_count,
    parse_sequence_text,
    udd_fractions,
    udd_times,
    zy_structure_report,
)

__all__ = [
    "Delay",
    "MergedPair",
    "Protocol",
    "Pulse",
    "PulseSequence",
    "StructureReport",
    "build_qdd",
    "build_sequence",
    "build_udd",
    "expected_pulse_count",
    "parse_sequence_text",
    "udd_fractions",
    "udd_times",
    "zy_structure_report",
]

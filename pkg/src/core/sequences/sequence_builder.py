"""
UDD, QDD(XY) and QDD(ZY) pulse schedules.

UDD-ℓ places π pulses at t_j = t·sin²(jπ/(2ℓ+2)), j = 1..ℓ for even ℓ and
j = 1..ℓ+1 for odd ℓ (the last one at t). QDD-ℓ nests an inner UDD-ℓ of
π_Y pulses into every interval τ_j = t_j − t_{j−1}, j = 1..ℓ+1, of an outer
UDD-ℓ skeleton of π_X (or composite π_Z) pulses; the outer pulse after the
last block is present for odd ℓ only.

Sequences are materialized as event lists. Every delay remembers its share
of the total time, so a schedule can be rescaled to another t and
structural zero-length delays (two pulses back to back) stay recognizable
even when t = 0.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from ..errors import ValidationError
from ..pulses.pulse_model import PulseAxis


class Protocol(str, Enum):
    UDD = "udd"
    QDD = "qdd"
    QDD_ZY = "qdd-zy"


@dataclass(frozen=True)
class Delay:
    """Free evolution for duration = fraction·t."""

    duration: float
    fraction: float


@dataclass(frozen=True)
class Pulse:
    axis: PulseAxis


Event = Union[Delay, Pulse]


@dataclass(frozen=True)
class PulseSequence:
    """Immutable time-ordered schedule of delays and nominal π pulses."""

    total_time: float
    events: Tuple[Event, ...]
    protocol: Protocol
    level: int

    @property
    def pulses(self) -> List[Pulse]:
        return [e for e in self.events if isinstance(e, Pulse)]

    @property
    def delays(self) -> List[Delay]:
        return [e for e in self.events if isinstance(e, Delay)]

    @property
    def pulse_count(self) -> int:
        """Logical pulse count; a composite π_Z counts once."""
        return len(self.pulses)

    @property
    def physical_pulse_count(self) -> int:
        return sum(2 if p.axis is PulseAxis.Z else 1 for p in self.pulses)

    def axis_counts(self) -> dict:
        counts = {axis.value: 0 for axis in PulseAxis}
        for p in self.pulses:
            counts[p.axis.value] += 1
        return counts

    def at_time(self, t: float) -> "PulseSequence":
        """Same schedule stretched to total time t."""
        _check_time(t)
        events = tuple(
            Delay(duration=e.fraction * t, fraction=e.fraction) if isinstance(e, Delay) else e
            for e in self.events
        )
        return PulseSequence(total_time=float(t), events=events, protocol=self.protocol, level=self.level)

    def to_text(self) -> str:
        """One event per line: `D <duration>` or `P <axis>`."""
        lines = []
        for e in self.events:
            if isinstance(e, Delay):
                lines.append(f"D {float(e.duration)!r}")
            else:
                lines.append(f"P {e.axis.value}")
        return "\n".join(lines) + "\n"


def parse_sequence_text(text: str, protocol: Protocol, level: int) -> PulseSequence:
    """Inverse of PulseSequence.to_text."""
    events: List[Event] = []
    durations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        kind, _, value = line.partition(" ")
        if kind == "D":
            durations.append(float(value))
            events.append(Delay(duration=float(value), fraction=0.0))
        elif kind == "P":
            events.append(Pulse(PulseAxis(value.strip().upper())))
        else:
            raise ValidationError(f"line {lineno}: unrecognized event {line!r}")

    total = float(sum(durations))
    if total > 0:
        events = [Delay(e.duration, e.duration / total) if isinstance(e, Delay) else e for e in events]
    return PulseSequence(total_time=total, events=tuple(events), protocol=Protocol(protocol), level=level)


def _check_level(level: int):
    if int(level) != level or level < 1:
        raise ValidationError(f"level must be a positive integer, got {level!r}")


def _check_time(t: float):
    if not np.isfinite(t) or t < 0:
        raise ValidationError(f"total time must be finite and non-negative, got {t!r}")


def udd_fractions(level: int) -> np.ndarray:
    """sin²(jπ/(2ℓ+2)) for the pulse indices of UDD-ℓ."""
    _check_level(level)
    count = level if level % 2 == 0 else level + 1
    j = np.arange(1, count + 1)
    fractions = np.sin(j * np.pi / (2 * level + 2)) ** 2
    if level % 2 == 1:
        fractions[-1] = 1.0
    return fractions


def udd_times(level: int, t: float) -> List[float]:
    """Pulse times of UDD-ℓ over total time t."""
    _check_time(t)
    return [float(f * t) for f in udd_fractions(level)]


def _interval_fractions(level: int) -> np.ndarray:
    """τ_j / t for j = 1..ℓ+1 of the UDD-ℓ skeleton (the last ends at t)."""
    _check_level(level)
    j = np.arange(0, level + 2)
    edges = np.sin(j * np.pi / (2 * level + 2)) ** 2
    edges[0], edges[-1] = 0.0, 1.0
    return np.diff(edges)


def _udd_events(level: int, span: float, t: float, axis: PulseAxis) -> List[Event]:
    """Events of UDD-ℓ occupying a share `span` of the total time t."""
    pulse_fractions = udd_fractions(level)
    events: List[Event] = []
    previous = 0.0
    for f in pulse_fractions:
        share = (f - previous) * span
        events.append(Delay(duration=share * t, fraction=share))
        events.append(Pulse(axis))
        previous = f
    if level % 2 == 0:
        share = (1.0 - previous) * span
        events.append(Delay(duration=share * t, fraction=share))
    return events


def build_udd(level: int, t: float, axis: PulseAxis = PulseAxis.X) -> PulseSequence:
    """UDD-ℓ over total time t with π pulses about `axis`."""
    _check_level(level)
    _check_time(t)
    events = _udd_events(level, 1.0, t, PulseAxis(axis))
    seq = PulseSequence(total_time=float(t), events=tuple(events), protocol=Protocol.UDD, level=level)
    logger.debug(f"Built UDD-{level}: {seq.pulse_count} pulses, t={t}")
    return seq


def build_qdd(
    level: int,
    t: float,
    outer: PulseAxis = PulseAxis.X,
    inner: PulseAxis = PulseAxis.Y,
) -> PulseSequence:
    """QDD-ℓ: inner UDD-ℓ(inner) blocks inside an outer UDD-ℓ(outer) skeleton.

    Back-to-back pulses (the trailing inner pulse of an odd level followed by
    the outer pulse) are joined by an explicit zero-length delay.
    """
    _check_level(level)
    _check_time(t)
    outer, inner = PulseAxis(outer), PulseAxis(inner)
    if outer is inner:
        raise ValidationError("outer and inner axes of QDD must differ")

    intervals = _interval_fractions(level)
    events: List[Event] = []
    for j, span in enumerate(intervals, start=1):
        events.extend(_udd_events(level, float(span), t, inner))
        if level % 2 == 1 or j <= level:
            if isinstance(events[-1], Pulse):
                events.append(Delay(duration=0.0, fraction=0.0))
            events.append(Pulse(outer))

    protocol = Protocol.QDD_ZY if outer is PulseAxis.Z else Protocol.QDD
    seq = PulseSequence(total_time=float(t), events=tuple(events), protocol=protocol, level=level)
    logger.debug(f"Built {protocol.value.upper()}-{level}: {seq.pulse_count} logical pulses, t={t}")
    return seq


def build_sequence(protocol: Union[Protocol, str], level: int, t: float) -> PulseSequence:
    """Dispatch on protocol name."""
    protocol = Protocol(protocol)
    if protocol is Protocol.UDD:
        return build_udd(level, t)
    if protocol is Protocol.QDD:
        return build_qdd(level, t, outer=PulseAxis.X, inner=PulseAxis.Y)
    return build_qdd(level, t, outer=PulseAxis.Z, inner=PulseAxis.Y)


def expected_pulse_count(protocol: Union[Protocol, str], level: int) -> int:
    """Closed-form logical pulse counts."""
    _check_level(level)
    protocol = Protocol(protocol)
    if protocol is Protocol.UDD:
        return level if level % 2 == 0 else level + 1
    if level % 2 == 0:
        return level * (level + 2)
    return (level + 1) * (level + 2)


@dataclass(frozen=True)
class MergedPair:
    """Two pulses with no delay between them, acting as one effective pulse."""

    position: int
    first: PulseAxis
    second: PulseAxis
    effective: Optional[PulseAxis]


@dataclass
class StructureReport:
    """Zero-delay adjacency summary of a sequence."""

    protocol: Protocol
    level: int
    merged_pairs: List[MergedPair] = field(default_factory=list)
    effective_axes: List[PulseAxis] = field(default_factory=list)

    @property
    def merged_count(self) -> int:
        return len(self.merged_pairs)

    def summary(self) -> str:
        counts = {}
        for axis in self.effective_axes:
            counts[axis.value] = counts.get(axis.value, 0) + 1
        parts = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        return (
            f"{self.protocol.value.upper()}-{self.level}: {self.merged_count} merged pairs; "
            f"effective pulses {parts}"
        )


def _merged_axis(first: PulseAxis, second: PulseAxis) -> Optional[PulseAxis]:
    # two π rotations about distinct perpendicular axes equal a π rotation about the third
    if first is second:
        return None
    (remaining,) = set(PulseAxis) - {first, second}
    return remaining


def zy_structure_report(seq: PulseSequence) -> StructureReport:
    """Find pulse pairs separated only by structural zero-length delays.

    Each pair is replaced by its effective single π pulse; for QDD(ZY) of odd
    level every outer π_Z follows the inner block's trailing π_Y, giving an
    effective π_X.
    """
    report = StructureReport(protocol=seq.protocol, level=seq.level)

    pulses: List[Tuple[int, PulseAxis, bool]] = []  # (event index, axis, joined to previous pulse)
    gap_is_zero = True
    seen_pulse = False
    for index, event in enumerate(seq.events):
        if isinstance(event, Delay):
            if event.fraction > 0:
                gap_is_zero = False
            continue
        pulses.append((index, event.axis, seen_pulse and gap_is_zero))
        seen_pulse = True
        gap_is_zero = True

    k = 0
    while k < len(pulses):
        index, axis, _ = pulses[k]
        if k + 1 < len(pulses) and pulses[k + 1][2]:
            second = pulses[k + 1][1]
            effective = _merged_axis(axis, second)
            report.merged_pairs.append(MergedPair(position=index, first=axis, second=second, effective=effective))
            if effective is not None:
                report.effective_axes.append(effective)
            k += 2
            continue
        report.effective_axes.append(axis)
        k += 1

    logger.debug(report.summary())
    return report

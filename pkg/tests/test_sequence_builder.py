import numpy as np
import pytest

from core.errors import ValidationError
from core.pulses import PulseAxis
from core.sequences import (
    Delay,
    Protocol,
    Pulse,
    build_qdd,
    build_sequence,
    build_udd,
    expected_pulse_count,
    parse_sequence_text,
    udd_times,
    zy_structure_report,
)


def test_udd_times_examples():
    assert udd_times(2, 1.0) == pytest.approx([0.25, 0.75])
    assert udd_times(3, 1.0) == pytest.approx([0.146447, 0.5, 0.853553, 1.0], abs=1e-6)
    assert udd_times(1, 2.0) == pytest.approx([1.0, 2.0])


def test_udd_odd_level_ends_exactly_at_t():
    assert udd_times(5, 3.7)[-1] == 3.7


@pytest.mark.parametrize("level", [0, -1, 2.5])
def test_invalid_level(level):
    with pytest.raises(ValidationError):
        udd_times(level, 1.0)


def test_negative_time():
    with pytest.raises(ValidationError):
        build_udd(2, -1.0)


@pytest.mark.parametrize("level", [2, 4, 6, 20])
def test_even_udd_times_are_mirror_symmetric(level):
    times = udd_times(level, 1.0)
    for j in range(level):
        assert times[j] + times[level - 1 - j] == pytest.approx(1.0, abs=1e-15)


def test_udd2_events():
    seq = build_udd(2, 1.0)
    kinds = [type(e) for e in seq.events]
    assert kinds == [Delay, Pulse, Delay, Pulse, Delay]
    assert [d.duration for d in seq.delays] == pytest.approx([0.25, 0.5, 0.25])
    assert all(p.axis is PulseAxis.X for p in seq.pulses)


@pytest.mark.parametrize("level,count", [(1, 2), (2, 2), (3, 4), (19, 20), (20, 20)])
def test_udd_pulse_counts(level, count):
    seq = build_udd(level, 1.0)
    assert seq.pulse_count == count == expected_pulse_count("udd", level)
    assert isinstance(seq.events[-1], Pulse if level % 2 else Delay)


@pytest.mark.parametrize("level,count", [(1, 6), (2, 8), (3, 20), (4, 24), (5, 42)])
def test_qdd_pulse_counts(level, count):
    for protocol in (Protocol.QDD, Protocol.QDD_ZY):
        assert build_sequence(protocol, level, 1.0).pulse_count == count == expected_pulse_count(protocol, level)


def test_qdd_zy_level2_axes():
    seq = build_sequence("qdd-zy", 2, 1.0)
    assert seq.axis_counts() == {"X": 0, "Y": 6, "Z": 2}
    assert seq.physical_pulse_count == 10


@pytest.mark.parametrize("protocol", list(Protocol))
@pytest.mark.parametrize("level", range(1, 7))
def test_delays_sum_to_total_time(protocol, level):
    t = 2.3
    seq = build_sequence(protocol, level, t)
    assert sum(d.duration for d in seq.delays) == pytest.approx(t, abs=1e-12 * t)
    assert sum(d.fraction for d in seq.delays) == pytest.approx(1.0, abs=1e-12)
    assert all(d.duration >= 0 for d in seq.delays)


def test_qdd_inner_blocks_fill_outer_intervals():
    t = 1.0
    seq = build_qdd(2, t)
    outer = udd_times(2, t)
    elapsed, outer_times = 0.0, []
    for event in seq.events:
        if isinstance(event, Delay):
            elapsed += event.duration
        elif event.axis is PulseAxis.X:
            outer_times.append(elapsed)
    assert outer_times == pytest.approx(outer)


def test_qdd_axes_must_differ():
    with pytest.raises(ValidationError):
        build_qdd(2, 1.0, outer=PulseAxis.Y, inner=PulseAxis.Y)


@pytest.mark.parametrize("level,merged", [(2, 0), (3, 4), (4, 0), (5, 6)])
def test_zy_structure(level, merged):
    report = zy_structure_report(build_sequence(Protocol.QDD_ZY, level, 1.0))
    assert report.merged_count == merged
    for pair in report.merged_pairs:
        assert (pair.first, pair.second, pair.effective) == (PulseAxis.Y, PulseAxis.Z, PulseAxis.X)


def test_zy_structure_at_zero_time():
    report = zy_structure_report(build_sequence(Protocol.QDD_ZY, 3, 0.0))
    assert report.merged_count == 4
    assert report.effective_axes.count(PulseAxis.X) == 4


def test_xy_odd_level_merges_into_z():
    report = zy_structure_report(build_qdd(3, 1.0))
    assert report.merged_count == 4
    assert all(pair.effective is PulseAxis.Z for pair in report.merged_pairs)


def test_rescaling_matches_direct_build():
    stretched = build_udd(3, 1.0).at_time(2.0)
    direct = build_udd(3, 2.0)
    assert [d.duration for d in stretched.delays] == pytest.approx([d.duration for d in direct.delays])


def test_text_export_round_trip():
    seq = build_qdd(3, 1.5)
    text = seq.to_text()
    assert text.splitlines()[0].startswith("D ")
    assert "P X" in text and "P Y" in text

    parsed = parse_sequence_text(text, Protocol.QDD, 3)
    assert parsed.pulse_count == 20
    assert parsed.total_time == pytest.approx(1.5)
    assert [d.duration for d in parsed.delays] == [d.duration for d in seq.delays]
    assert zy_structure_report(parsed).merged_count == 4


def test_parse_rejects_unknown_events():
    with pytest.raises(ValidationError):
        parse_sequence_text("D 0.5\nQ X\n", Protocol.UDD, 1)


def test_fractions_are_exact_at_zero_time():
    seq = build_udd(4, 0.0)
    assert all(d.duration == 0 for d in seq.delays)
    assert np.sum([d.fraction for d in seq.delays]) == pytest.approx(1.0)

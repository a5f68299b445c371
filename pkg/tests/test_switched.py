import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dipoledm.errors import DomainError, ValidationError
from dipoledm.fields import DipoleSpec, FarFieldPattern, default_angles
from dipoledm.switched import (
    DynamicPattern,
    SwitchingSchedule,
    asymmetry,
    assign_states,
    gain_at,
    mirrored_states,
)

SPEC = DipoleSpec.half_wave()
GRID = default_angles()
BROADSIDE = GRID[179]


@pytest.fixture(scope="module")
def quarter():
    return mirrored_states(SPEC, math.pi / 4)


def test_zero_imbalance_states_identical():
    p = mirrored_states(SPEC, 0.0)
    np.testing.assert_array_equal(p.state1.field, p.state2.field)


def test_broadside_equal(quarter):
    p = mirrored_states(SPEC, math.pi / 2)
    for pat in (quarter, p):
        g1, g2 = gain_at(pat.state1, math.pi / 2), gain_at(pat.state2, math.pi / 2)
        assert abs(g1) / abs(g2) == pytest.approx(1.0, abs=1e-9)


def test_mirror_identity_off_broadside(quarter):
    a = abs(gain_at(quarter.state1, math.radians(60)))
    b = abs(gain_at(quarter.state2, math.radians(120)))
    assert a == pytest.approx(b, abs=1e-9)
    np.testing.assert_allclose(quarter.state1.magnitude, quarter.state2.magnitude[::-1], atol=1e-9)


def test_joint_normalization(quarter):
    peak = max(quarter.state1.magnitude.max(), quarter.state2.magnitude.max())
    assert peak == pytest.approx(1.0, abs=1e-15)
    assert quarter.state1.scale == quarter.state2.scale == quarter.shared_scale


def test_asymmetry_grows_and_peak_falls():
    pats = [mirrored_states(SPEC, math.radians(d)) for d in (0, 45, 90)]
    asym = [asymmetry(p) for p in pats]
    assert asym[0] == 0.0
    assert asym[0] < asym[1] < asym[2]
    scales = [p.shared_scale for p in pats]
    assert scales[0] > scales[1] > scales[2]


def test_peak_strictly_decreasing_on_fine_imbalance_grid():
    coarse = default_angles(1.0)
    scales = [mirrored_states(SPEC, math.radians(d), coarse).shared_scale for d in range(0, 91, 5)]
    assert np.all(np.diff(scales) < 0)


def test_phase_bias_rotates_state2_only():
    plain = mirrored_states(SPEC, 0.5)
    biased = mirrored_states(SPEC, 0.5, phase_bias=0.3)
    np.testing.assert_array_equal(plain.state1.field, biased.state1.field)
    np.testing.assert_allclose(biased.state2.field, plain.state2.field * np.exp(0.3j), atol=1e-15)


def test_imbalance_range():
    with pytest.raises(ValidationError):
        mirrored_states(SPEC, math.pi)
    with pytest.raises(ValidationError):
        mirrored_states(SPEC, -0.1)


def test_states_must_share_grid():
    a = FarFieldPattern([0.5, 1.0], [1, 1])
    b = FarFieldPattern([0.5, 1.1], [1, 1])
    with pytest.raises(ValidationError):
        DynamicPattern(a, b)


def _pattern(values, angles=(1.0, 1.2)):
    return FarFieldPattern(np.array(angles), np.array(values, dtype=complex))


def test_gain_at_grid_point_exact(quarter):
    assert gain_at(quarter.state1, GRID[100]) == quarter.state1.field[100]
    assert gain_at(quarter.state1, GRID[-1]) == quarter.state1.field[-1]


def test_gain_at_linear_magnitude():
    p = _pattern([1.0, 3.0])
    assert gain_at(p, 1.1) == pytest.approx(2.0)


def test_gain_at_unwraps_phase():
    p = _pattern([np.exp(1j * math.radians(170)), np.exp(-1j * math.radians(170))])
    g = gain_at(p, 1.1)
    assert abs(g) == pytest.approx(1.0)
    assert abs(math.degrees(np.angle(g))) == pytest.approx(180.0)


def test_gain_at_outside_span():
    p = _pattern([1.0, 1.0])
    with pytest.raises(DomainError):
        gain_at(p, 0.9)
    with pytest.raises(DomainError):
        gain_at(p, 1.3)


def test_gain_at_vectorized(quarter):
    out = gain_at(quarter.state2, GRID[:5])
    np.testing.assert_array_equal(out, quarter.state2.field[:5])


def test_schedule_examples():
    np.testing.assert_array_equal(assign_states(SwitchingSchedule.uniform(), 4), [1, 2, 1, 2])
    np.testing.assert_array_equal(
        assign_states(SwitchingSchedule.block(3, start_state=2), 7), [2, 2, 2, 1, 1, 1, 2]
    )
    states = assign_states(SwitchingSchedule.block(167), 30000)
    assert abs(np.count_nonzero(states == 1) - np.count_nonzero(states == 2)) <= 167


def test_schedule_from_rates():
    # 1 MS/s symbols over a 3 kHz square wave
    assert SwitchingSchedule.from_rates(1e6, 3e3).block_length == 167


def test_uniform_equals_block_one():
    a = assign_states(SwitchingSchedule.uniform(start_state=2), 11)
    b = assign_states(SwitchingSchedule.block(1, start_state=2), 11)
    np.testing.assert_array_equal(a, b)


@given(st.integers(1, 5000), st.sampled_from([1, 2]))
def test_uniform_balance(n, start):
    states = assign_states(SwitchingSchedule.uniform(start), n)
    first = np.count_nonzero(states == start)
    assert first == (n + 1) // 2
    assert n - first == n // 2


def test_duty_schedule():
    states = assign_states(SwitchingSchedule.duty(0.25, 8), 16)
    np.testing.assert_array_equal(states, [1, 1, 2, 2, 2, 2, 2, 2] * 2)


@pytest.mark.parametrize("text, expected", [
    ("uniform", SwitchingSchedule.uniform()),
    ("block:5", SwitchingSchedule.block(5)),
    ("duty:0.5:10", SwitchingSchedule.duty(0.5, 10)),
])
def test_schedule_parse_roundtrip(text, expected):
    parsed = SwitchingSchedule.parse(text)
    assert parsed == expected
    assert SwitchingSchedule.parse(str(parsed)) == parsed


@pytest.mark.parametrize("text", ["", "block", "block:0", "block:x", "duty:1.5:4", "alt"])
def test_schedule_parse_rejects(text):
    with pytest.raises(ValidationError):
        SwitchingSchedule.parse(text)


def test_assign_states_rejects_empty():
    with pytest.raises(ValidationError):
        assign_states(SwitchingSchedule.uniform(), 0)

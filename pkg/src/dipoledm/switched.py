"""Two-state switched antenna: mirrored patterns and switching schedules."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .fields import (
    ArmExcitation,
    FarFieldPattern,
    default_angles,
    excite_arms,
    radiation_integral,
    wrap_phase,
)

__all__ = [
    "DynamicPattern",
    "SwitchingSchedule",
    "mirrored_states",
    "gain_at",
    "assign_states",
    "asymmetry",
]


@dataclass(frozen=True, eq=False)
class DynamicPattern:
    """A pair of far-field patterns the antenna toggles between.

    ``source`` is ``"analytic"`` (built from an arm-phase ``imbalance``) or
    ``"measured"`` (loaded from ``path``).
    """

    state1: FarFieldPattern
    state2: FarFieldPattern
    source: str = "analytic"
    imbalance: float | None = None
    path: str | None = None

    def __post_init__(self):
        if not np.array_equal(self.state1.angles, self.state2.angles):
            raise ValidationError("both states must share an identical angle grid")
        if self.source not in ("analytic", "measured"):
            raise ValidationError(f"unknown pattern source {self.source!r}")

    @property
    def angles(self):
        return self.state1.angles

    @property
    def shared_scale(self):
        return self.state1.scale


@dataclass(frozen=True)
class SwitchingSchedule:
    """Which antenna state each symbol is sent in.

    ``mode`` is one of ``"uniform"`` (alternate every symbol), ``"block"``
    (alternate every ``block_length`` symbols) or ``"duty"`` (the first
    ``round(duty_fraction * period)`` symbols of every period use
    ``start_state``, the rest use the other state).
    """

    mode: str = "uniform"
    block_length: int = 1
    duty_fraction: float = 0.5
    period: int = 2
    start_state: int = 1

    def __post_init__(self):
        if self.mode not in ("uniform", "block", "duty"):
            raise ValidationError(f"unknown schedule mode {self.mode!r}")
        if self.start_state not in (1, 2):
            raise ValidationError("start_state must be 1 or 2")
        if self.mode == "uniform" and self.block_length != 1:
            raise ValidationError("uniform alternation has block_length 1")
        if int(self.block_length) != self.block_length or self.block_length < 1:
            raise ValidationError("block_length must be an integer >= 1")
        if self.mode == "duty":
            if not 0 < self.duty_fraction < 1:
                raise ValidationError("duty fraction must lie in (0, 1)")
            if int(self.period) != self.period or self.period < 2:
                raise ValidationError("duty period must be an integer >= 2")

    @classmethod
    def uniform(cls, start_state=1):
        return cls("uniform", start_state=start_state)

    @classmethod
    def block(cls, block_length, start_state=1):
        return cls("block", block_length=int(block_length), start_state=start_state)

    @classmethod
    def duty(cls, fraction, period, start_state=1):
        return cls("duty", duty_fraction=float(fraction), period=int(period),
                   start_state=start_state)

    @classmethod
    def from_rates(cls, symbol_rate, switch_rate, start_state=1):
        """Square-wave switching at ``switch_rate`` Hz seen at ``symbol_rate``.

        Each half period of the switch clock holds the state for
        ``round(symbol_rate / (2 * switch_rate))`` symbols.
        """
        if symbol_rate <= 0 or switch_rate <= 0:
            raise ValidationError("rates must be > 0")
        return cls.block(max(1, round(symbol_rate / (2 * switch_rate))), start_state)

    @classmethod
    def parse(cls, text):
        """Parse ``"uniform"``, ``"block:N"`` or ``"duty:F:P"``."""
        parts = str(text).strip().split(":")
        try:
            if parts == ["uniform"]:
                return cls.uniform()
            if parts[0] == "block" and len(parts) == 2:
                return cls.block(int(parts[1]))
            if parts[0] == "duty" and len(parts) == 3:
                return cls.duty(float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValidationError(f"bad schedule {text!r}: {exc}") from None
        raise ValidationError(f"bad schedule {text!r}; expected uniform, block:N or duty:F:P")

    def __str__(self):
        if self.mode == "uniform":
            return "uniform"
        if self.mode == "block":
            return f"block:{self.block_length}"
        return f"duty:{self.duty_fraction!r}:{self.period}"


def mirrored_states(spec, imbalance, angles=None, phase_bias=0.0):
    """Patterns for arm excitations (0, imbalance) and (imbalance, 0).

    Both states are divided by one shared constant, the larger of their two
    raw peaks, so the ratio between them keeps its physical meaning.
    ``phase_bias`` rotates state 2 by a constant, emulating an uncalibrated
    switch path.
    """
    if not (np.isfinite(imbalance) and 0 <= imbalance < np.pi):
        raise ValidationError(f"imbalance must lie in [0, pi), got {imbalance!r}")
    if angles is None:
        angles = default_angles()
    angles = np.asarray(angles, dtype=float)
    raw1 = radiation_integral(excite_arms(spec, ArmExcitation(0.0, imbalance)), angles)
    raw2 = radiation_integral(excite_arms(spec, ArmExcitation(imbalance, 0.0)), angles)
    shared = float(max(np.max(np.abs(raw1)), np.max(np.abs(raw2))))
    if not shared > 0:
        raise ValidationError("far field vanishes on the whole grid")
    raw2 = raw2 * np.exp(1j * phase_bias)
    return DynamicPattern(
        FarFieldPattern(angles, raw1 / shared, shared),
        FarFieldPattern(angles, raw2 / shared, shared),
        source="analytic",
        imbalance=float(imbalance),
    )


def gain_at(pattern, angle):
    """Complex gain of ``pattern`` at ``angle`` (radians, scalar or array).

    Magnitude is interpolated linearly between the bracketing grid points;
    phase is interpolated linearly along the shorter arc between them.
    Grid points return the stored value exactly.
    """
    grid = pattern.angles
    theta = np.asarray(angle, dtype=float)
    if np.any(~np.isfinite(theta)) or np.any(theta < grid[0]) or np.any(theta > grid[-1]):
        raise DomainError(
            f"angle outside pattern span [{grid[0]!r}, {grid[-1]!r}] rad"
        )
    idx = np.clip(np.searchsorted(grid, theta, side="right") - 1, 0, grid.size - 2)
    a0, a1 = grid[idx], grid[idx + 1]
    f0, f1 = pattern.field[idx], pattern.field[idx + 1]
    t = (theta - a0) / (a1 - a0)
    mag = (1 - t) * np.abs(f0) + t * np.abs(f1)
    p0 = np.angle(f0)
    phase = p0 + t * wrap_phase(np.angle(f1) - p0)
    out = np.where(t == 0, f0, np.where(t == 1, f1, mag * np.exp(1j * phase)))
    if out.ndim == 0:
        return complex(out)
    return out


def assign_states(schedule, n_symbols):
    """State label (1 or 2) for each of ``n_symbols`` consecutive symbols."""
    if int(n_symbols) != n_symbols or n_symbols < 1:
        raise ValidationError("n_symbols must be an integer >= 1")
    i = np.arange(int(n_symbols))
    if schedule.mode == "duty":
        on = min(max(round(schedule.duty_fraction * schedule.period), 1), schedule.period - 1)
        other = (i % schedule.period) >= on
    else:
        other = (i // schedule.block_length) % 2 == 1
    first = schedule.start_state
    return np.where(other, 3 - first, first).astype(np.int8)


def asymmetry(pattern):
    """Largest difference between the two state magnitudes over the grid."""
    return float(np.max(np.abs(pattern.state1.magnitude - pattern.state2.magnitude)))

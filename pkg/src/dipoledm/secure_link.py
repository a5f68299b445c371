"""Per-angle directional-modulation link simulation.

A symbol sent while the antenna is in state ``s`` leaves towards angle
theta scaled by that state's complex pattern gain.  A receiver calibrated at
the central direction divides by the mean of the two state gains there; away
from that direction the two states no longer agree and the received
constellation smears into two scaled copies.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction

import numpy as np

from .errors import CalibrationError, ValidationError
from .fields import DipoleSpec, wrap_phase
from .modem import awgn, error_metrics, make_constellation, make_stream
from .switched import SwitchingSchedule, assign_states, gain_at, mirrored_states

__all__ = [
    "SweepConfig",
    "LinkRow",
    "LinkReport",
    "BerBelow",
    "RatioBelow",
    "InformationBeam",
    "transmit_at_angle",
    "calibrate_central",
    "amplitude_ratio",
    "ratio_threshold",
    "row_seed",
    "build_pattern",
    "received_at_angle",
    "angle_sweep",
    "information_beam",
]

PRBS_DEGREE = 11


@dataclass(frozen=True)
class SweepConfig:
    """Everything that determines an angle sweep.

    Angles are in degrees.  ``pattern``, when given, replaces the analytic
    mirrored pattern built from ``spec`` and ``imbalance`` (radians).

    ``receiver`` selects how received symbols are normalized:
    ``"central"`` divides every row by the calibration constant taken at
    ``calibration_angle``; ``"tracking"`` divides each row by the mean state
    gain at that row's own angle, i.e. a receiver that follows the
    time-averaged constellation and only sees the state-to-state dynamics.
    """

    angle_start: float = 52.0
    angle_stop: float = 128.0
    angle_step: float = 2.0
    order: int = 256
    n_bits: int = 72_000
    schedule: SwitchingSchedule = field(default_factory=SwitchingSchedule.uniform)
    imbalance: float = math.radians(45.0)
    pattern: object = None
    calibration_angle: float = 90.0
    snr_db: float | None = None
    master_seed: int = 2047
    spec: DipoleSpec = field(default_factory=DipoleSpec.half_wave)
    receiver: str = "central"

    def __post_init__(self):
        if self.receiver not in ("central", "tracking"):
            raise ValidationError(f"receiver must be 'central' or 'tracking', got {self.receiver!r}")
        if not self.angle_start < self.angle_stop:
            raise ValidationError("angle_start must be below angle_stop")
        if not self.angle_step > 0:
            raise ValidationError("angle_step must be > 0")
        constellation = make_constellation(self.order)
        k = constellation.bits_per_symbol
        if int(self.n_bits) != self.n_bits or self.n_bits < k or self.n_bits % k:
            raise ValidationError(f"n_bits must be a positive multiple of log2(M) = {k}")
        if int(self.master_seed) != self.master_seed or self.master_seed < 0:
            raise ValidationError("master_seed must be a non-negative integer")

    @property
    def angles_deg(self):
        n = int(math.floor((self.angle_stop - self.angle_start) / self.angle_step + 1e-9)) + 1
        return self.angle_start + self.angle_step * np.arange(n)


@dataclass(frozen=True)
class LinkRow:
    angle_deg: float
    gain1_abs: float
    gain2_abs: float
    ratio: float
    phase_diff_deg: float
    mag_err_rms: float
    phase_err_rad: float
    evm: float
    ber: float
    ser: float


REPORT_COLUMNS = tuple(f.name for f in fields(LinkRow))


@dataclass(frozen=True)
class LinkReport:
    """Sweep results, one :class:`LinkRow` per angle in ascending order."""

    rows: tuple = ()
    calibration_angle_deg: float = 90.0

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        angles = [r.angle_deg for r in self.rows]
        if any(b <= a for a, b in zip(angles, angles[1:])):
            raise ValidationError("report rows must be sorted by strictly increasing angle")

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        if name not in REPORT_COLUMNS:
            raise KeyError(name)
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


@dataclass(frozen=True)
class BerBelow:
    threshold: float = 1e-3

    def passes(self, row):
        return row.ber < self.threshold


@dataclass(frozen=True)
class RatioBelow:
    threshold: float = 8 / 7

    def passes(self, row):
        # an infinite ratio fails any finite threshold
        return row.ratio < float(self.threshold)


@dataclass(frozen=True)
class InformationBeam:
    """Angular window (degrees) around the calibration angle that passes.

    An empty beam has ``lower_edge`` and ``upper_edge`` set to ``None``.
    ``passing_angles`` lists every passing row, contiguous or not.
    """

    criterion: object
    lower_edge: float | None
    upper_edge: float | None
    width: float
    contiguous: bool
    passing_angles: tuple = ()

    @property
    def is_empty(self):
        return self.lower_edge is None


def transmit_at_angle(stream, pattern, schedule, angle, snr_db=None, rng=None):
    """Symbols of ``stream`` as seen at ``angle`` (radians).

    Each symbol is multiplied by the complex gain of the state it is sent in.
    Optional AWGN is added afterwards.
    """
    gains = np.array([gain_at(pattern.state1, angle), gain_at(pattern.state2, angle)])
    states = assign_states(schedule, len(stream.symbols))
    y = gains[states - 1] * stream.symbols
    if snr_db is not None:
        y = awgn(y, snr_db, rng)
    return y


def calibrate_central(pattern, calibration_angle):
    """Mean of the two state gains at ``calibration_angle`` (radians)."""
    c = (gain_at(pattern.state1, calibration_angle) + gain_at(pattern.state2, calibration_angle)) / 2
    if abs(c) < 1e-12:
        raise CalibrationError(f"calibration constant {c!r} is degenerate")
    return complex(c)


def amplitude_ratio(pattern):
    """Larger over smaller state magnitude at every grid angle (``inf`` at a null)."""
    m1, m2 = pattern.state1.magnitude, pattern.state2.magnitude
    hi, lo = np.maximum(m1, m2), np.minimum(m1, m2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(lo > 0, hi / np.where(lo > 0, lo, 1.0), np.inf)


def ratio_threshold(order):
    """Smallest state ratio at which calibrated QAM suffers decision errors.

    With mean-gain calibration the two states reach the receiver scaled by
    ``2r/(1+r)`` and ``2/(1+r)``.  Every point coordinate and every decision
    boundary is visited to find the first ``r`` at which a scaled
    coordinate lands in a neighbouring decision region.  Returns a
    :class:`fractions.Fraction`, or ``math.inf`` when no boundary can be
    reached (QPSK).
    """
    constellation = make_constellation(order)
    boundaries = [int(lv) + 1 for lv in constellation.levels[:-1]]
    unscaled = constellation.points / constellation.scale
    coords = {int(c) for c in np.rint(np.concatenate([unscaled.real, unscaled.imag]))}
    best = math.inf
    for lv in coords:
        for beta in boundaries:
            # grow: lv * 2r/(1+r) sweeps (lv, 2 lv) as r goes 1 -> inf
            if _strictly_between(beta, lv, 2 * lv):
                best = min(best, Fraction(beta, 2 * lv - beta))
            # shrink: lv * 2/(1+r) sweeps (0, lv)
            if beta != 0 and _strictly_between(beta, 0, lv):
                best = min(best, Fraction(2 * lv, beta) - 1)
    return best


def _strictly_between(x, a, b):
    return min(a, b) < x < max(a, b)


def row_seed(master_seed, row):
    """Per-row seed: ``master_seed`` XOR the row index."""
    return int(master_seed) ^ int(row)


def _prbs_seed(seed):
    reg = seed & ((1 << PRBS_DEGREE) - 1)
    return reg or (1 << PRBS_DEGREE) - 1


def build_pattern(config):
    if config.pattern is not None:
        return config.pattern
    return mirrored_states(config.spec, config.imbalance)


def received_at_angle(config, angle_deg, row=0, pattern=None):
    """Calibrated received symbols at one angle.

    Returns ``(stream, states, received)`` where ``received`` has already
    been divided by the central-direction calibration constant.
    """
    if pattern is None:
        pattern = build_pattern(config)
    constellation = make_constellation(config.order)
    reference = config.calibration_angle if config.receiver == "central" else angle_deg
    c = calibrate_central(pattern, math.radians(reference))
    seed = row_seed(config.master_seed, row)
    stream = make_stream(config.n_bits, constellation, _prbs_seed(seed), PRBS_DEGREE)
    y = transmit_at_angle(stream, pattern, config.schedule, math.radians(angle_deg),
                          config.snr_db, np.random.default_rng(seed))
    states = assign_states(config.schedule, len(stream))
    return stream, states, y / c


def _sweep_row(config, pattern, row, angle_deg):
    try:
        stream, _, y = received_at_angle(config, angle_deg, row, pattern)
        theta = math.radians(angle_deg)
        g1 = gain_at(pattern.state1, theta)
        g2 = gain_at(pattern.state2, theta)
    except ValidationError as exc:
        raise type(exc)(f"at angle {angle_deg!r} deg: {exc}") from exc
    constellation = make_constellation(config.order)
    metrics = error_metrics(y, stream.symbols, stream.bits, constellation)
    a1, a2 = abs(g1), abs(g2)
    lo = min(a1, a2)
    return LinkRow(
        angle_deg=float(angle_deg),
        gain1_abs=a1,
        gain2_abs=a2,
        ratio=max(a1, a2) / lo if lo > 0 else math.inf,
        phase_diff_deg=math.degrees(wrap_phase(np.angle(g2) - np.angle(g1))),
        mag_err_rms=metrics.magnitude_error_rms,
        phase_err_rad=metrics.phase_error_mean,
        evm=metrics.evm_rms,
        ber=metrics.ber,
        ser=metrics.ser,
    )


def angle_sweep(config, workers=None):
    """Simulate the link at every sweep angle.

    Rows are independent; ``workers > 1`` evaluates them on a thread pool.
    The report is identical for any worker count.
    """
    pattern = build_pattern(config)
    angles = [float(a) for a in config.angles_deg]
    jobs = list(enumerate(angles))
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _sweep_row(config, pattern, *job), jobs))
    else:
        rows = [_sweep_row(config, pattern, i, a) for i, a in jobs]
    return LinkReport(rows, float(config.calibration_angle))


def information_beam(report, criterion=None):
    """Contiguous run of passing rows around the calibration angle.

    Edges sit halfway between the last passing and first failing rows, or on
    the outermost row when the run reaches the end of the sweep.
    """
    if criterion is None:
        criterion = BerBelow()
    rows = report.rows
    if not rows:
        raise ValidationError("cannot extract a beam from an empty report")
    angles = np.array([r.angle_deg for r in rows])
    passing = np.array([bool(criterion.passes(r)) for r in rows])
    passing_angles = tuple(float(a) for a in angles[passing])
    centre = int(np.argmin(np.abs(angles - report.calibration_angle_deg)))
    if not passing[centre]:
        return InformationBeam(criterion, None, None, 0.0, False, passing_angles)
    lo = hi = centre
    while lo > 0 and passing[lo - 1]:
        lo -= 1
    while hi < len(rows) - 1 and passing[hi + 1]:
        hi += 1
    lower = angles[0] if lo == 0 else (angles[lo - 1] + angles[lo]) / 2
    upper = angles[-1] if hi == len(rows) - 1 else (angles[hi] + angles[hi + 1]) / 2
    contiguous = int(passing.sum()) == hi - lo + 1
    return InformationBeam(criterion, float(lower), float(upper), float(upper - lower),
                           contiguous, passing_angles)

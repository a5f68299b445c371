"""CSV pattern/report files and JSON run configuration.

All numbers are written with 9 significant digits, comma separated, with a
mandatory header row and LF line endings.  Magnitudes are field dB
(20 log10) and phases degrees.
"""

import json
import math
import os
from pathlib import Path

import numpy as np

from .errors import PatternFormatError, ValidationError
from .fields import FarFieldPattern
from .secure_link import REPORT_COLUMNS, LinkReport, LinkRow, SweepConfig
from .switched import DynamicPattern, SwitchingSchedule

PATTERN_HEADER = "angle_deg,mag_s1_db,phase_s1_deg,mag_s2_db,phase_s2_deg"
REPORT_HEADER = ",".join(REPORT_COLUMNS)

CONFIG_DEFAULTS = {
    "angle_start_deg": 52.0,
    "angle_stop_deg": 128.0,
    "angle_step_deg": 2.0,
    "order": 256,
    "n_bits": 72_000,
    "imbalance_deg": 45.0,
    "pattern_file": None,
    "calibration_angle_deg": 90.0,
    "schedule": "uniform",
    "snr_db": None,
    "seed": 2047,
    "receiver": "central",
}


def fmt(value):
    """Format one number with 9 significant digits (no negative zero)."""
    value = float(value)
    if value == 0:
        value = 0.0
    return f"{value:.9g}"


def to_db(magnitude):
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(magnitude)


def from_db(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 20.0)


def csv_text(header, rows):
    lines = [header]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_rows(path, header, ncols):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != header:
        raise PatternFormatError(f"expected header {header!r}", line=1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != ncols:
            raise PatternFormatError(f"expected {ncols} columns, got {len(cells)}", line=lineno)
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise PatternFormatError(str(exc), line=lineno) from None
    return rows


def format_pattern_csv(pattern):
    angles = np.degrees(pattern.angles)
    # round off float noise so that 0 dB stays 0 across save/load cycles
    cols = [
        to_db(pattern.state1.magnitude),
        np.degrees(np.angle(pattern.state1.field)),
        to_db(pattern.state2.magnitude),
        np.degrees(np.angle(pattern.state2.field)),
    ]
    rows = zip(angles, *(np.round(c, 12) for c in cols))
    return csv_text(PATTERN_HEADER, rows)


def save_pattern_csv(pattern, path):
    write_text(path, format_pattern_csv(pattern))


def load_pattern_csv(path):
    """Read a two-state pattern file into a measured :class:`DynamicPattern`."""
    rows = _read_rows(path, PATTERN_HEADER, 5)
    if len(rows) < 2:
        raise ValidationError(f"{path}: a pattern file needs at least 2 rows")
    data = np.array(rows)
    if np.any(np.diff(data[:, 0]) <= 0):
        bad = int(np.flatnonzero(np.diff(data[:, 0]) <= 0)[0]) + 3
        raise ValidationError(f"{path}: angles must be strictly increasing (line {bad})")
    angles = np.radians(data[:, 0])
    g1 = from_db(data[:, 1]) * np.exp(1j * np.radians(data[:, 2]))
    g2 = from_db(data[:, 3]) * np.exp(1j * np.radians(data[:, 4]))
    return DynamicPattern(
        FarFieldPattern(angles, g1),
        FarFieldPattern(angles, g2),
        source="measured",
        path=str(path),
    )


def format_report_csv(report):
    return csv_text(REPORT_HEADER, ([getattr(r, c) for c in REPORT_COLUMNS] for r in report.rows))


def save_report_csv(report, path):
    write_text(path, format_report_csv(report))


def load_report_csv(path, calibration_angle_deg=90.0):
    rows = _read_rows(path, REPORT_HEADER, len(REPORT_COLUMNS))
    return LinkReport(tuple(LinkRow(*r) for r in rows), calibration_angle_deg)


def load_run_config(path):
    """Parse a flat JSON run config into a :class:`SweepConfig`.

    Unknown keys are rejected; a relative ``pattern_file`` is resolved
    against the config file's directory.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PatternFormatError(f"{path}: {exc.msg}", line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    pattern_file = raw.get("pattern_file")
    if pattern_file is not None and not os.path.isabs(pattern_file):
        raw = dict(raw, pattern_file=str(Path(path).parent / pattern_file))
    return config_from_dict(raw)


def config_from_dict(raw):
    unknown = sorted(set(raw) - set(CONFIG_DEFAULTS))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    cfg = dict(CONFIG_DEFAULTS, **raw)
    pattern = None
    if cfg["pattern_file"] is not None:
        pattern = load_pattern_csv(cfg["pattern_file"])
    snr = cfg["snr_db"]
    try:
        return SweepConfig(
            angle_start=float(cfg["angle_start_deg"]),
            angle_stop=float(cfg["angle_stop_deg"]),
            angle_step=float(cfg["angle_step_deg"]),
            order=int(cfg["order"]),
            n_bits=int(cfg["n_bits"]),
            schedule=SwitchingSchedule.parse(cfg["schedule"]),
            imbalance=math.radians(float(cfg["imbalance_deg"])),
            pattern=pattern,
            calibration_angle=float(cfg["calibration_angle_deg"]),
            snr_db=None if snr is None else float(snr),
            master_seed=int(cfg["seed"]),
            receiver=str(cfg["receiver"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad config value: {exc}") from None


def config_to_dict(config, pattern_file=None):
    return {
        "angle_start_deg": config.angle_start,
        "angle_stop_deg": config.angle_stop,
        "angle_step_deg": config.angle_step,
        "order": config.order,
        "n_bits": config.n_bits,
        "imbalance_deg": math.degrees(config.imbalance),
        "pattern_file": pattern_file,
        "calibration_angle_deg": config.calibration_angle,
        "schedule": str(config.schedule),
        "snr_db": config.snr_db,
        "seed": config.master_seed,
        "receiver": config.receiver,
    }

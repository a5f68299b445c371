"""Command-line entry point producing plot-ready CSV.

Exit status is 0 on success, 1 on invalid input or usage and 2 on file
system errors.
"""

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import io
from .errors import ValidationError
from .fields import DipoleSpec, default_angles
from .modem import make_constellation
from .secure_link import (
    BerBelow,
    RatioBelow,
    SweepConfig,
    amplitude_ratio,
    angle_sweep,
    information_beam,
    ratio_threshold,
    received_at_angle,
)
from .switched import mirrored_states


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        io.write_text(output, text)


def _analytic(args):
    spec = DipoleSpec.half_wave(args.frequency)
    return mirrored_states(spec, math.radians(args.imbalance_deg), default_angles(args.step_deg))


def _config(args):
    config = io.load_run_config(args.config) if args.config else SweepConfig()
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    return config


def cmd_pattern(args):
    pattern = _analytic(args)
    if args.state == "both":
        return io.format_pattern_csv(pattern)
    state = pattern.state1 if args.state == "1" else pattern.state2
    rows = zip(np.degrees(state.angles), io.to_db(state.magnitude), np.degrees(np.angle(state.field)))
    return io.csv_text("angle_deg,mag_db,phase_deg", rows)


def cmd_ratio(args):
    pattern = io.load_pattern_csv(args.pattern_file) if args.pattern_file else _analytic(args)
    rows = zip(
        np.degrees(pattern.angles),
        io.to_db(pattern.state1.magnitude),
        io.to_db(pattern.state2.magnitude),
        amplitude_ratio(pattern),
    )
    return io.csv_text("angle_deg,mag_s1_db,mag_s2_db,ratio", rows)


def cmd_sweep(args):
    return io.format_report_csv(angle_sweep(_config(args), workers=args.workers))


def cmd_constellation(args):
    config = _config(args)
    stream, states, y = received_at_angle(config, args.angle_deg)
    n = min(args.count, len(y))
    rows = zip(range(n), states[:n], y.real[:n], y.imag[:n])
    return io.csv_text("index,state,i,q", rows)


def cmd_beam(args):
    if args.report:
        report = io.load_report_csv(args.report, args.calibration_angle_deg)
    else:
        config = _config(args)
        report = angle_sweep(config, workers=args.workers)
    if args.criterion == "ber":
        criterion = BerBelow(1e-3 if args.threshold is None else args.threshold)
    else:
        threshold = args.threshold
        if threshold is None:
            threshold = float(ratio_threshold(args.order))
        criterion = RatioBelow(threshold)
    beam = information_beam(report, criterion)
    lines = [
        f"criterion={args.criterion}<{io.fmt(criterion.threshold)}",
        f"lower_edge_deg={'' if beam.is_empty else io.fmt(beam.lower_edge)}",
        f"upper_edge_deg={'' if beam.is_empty else io.fmt(beam.upper_edge)}",
        f"width_deg={io.fmt(beam.width)}",
        f"contiguous={str(beam.contiguous).lower()}",
    ]
    return "\n".join(lines) + "\n"


def cmd_threshold(args):
    make_constellation(args.order)
    rho = ratio_threshold(args.order)
    if rho == math.inf:
        return "inf\n"
    return f"{rho} ≈ {float(rho):.6f}\n"


def build_parser():
    parser = _Parser(prog="dipoledm", description="Switched-dipole directional modulation simulator.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def analytic_opts(p):
        p.add_argument("--imbalance-deg", type=float, default=45.0, help="arm phase imbalance (deg)")
        p.add_argument("--frequency", type=float, default=1.86e9, help="operating frequency (Hz)")
        p.add_argument("--step-deg", type=float, default=0.5, help="pattern grid step (deg)")

    def sweep_opts(p):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--workers", type=int, default=None, help="threads for the sweep")

    def out_opt(p):
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("pattern", help="state amplitude/phase patterns")
    analytic_opts(p)
    p.add_argument("--state", choices=("1", "2", "both"), default="both")
    out_opt(p)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("ratio", help="amplitude ratio of the two states")
    analytic_opts(p)
    p.add_argument("--pattern-file", help="measured pattern CSV instead of the analytic model")
    out_opt(p)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("sweep", help="link metrics versus angle")
    sweep_opts(p)
    out_opt(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("constellation", help="calibrated received I/Q at one angle")
    sweep_opts(p)
    p.add_argument("--angle-deg", type=float, required=True)
    p.add_argument("--count", type=int, default=900, help="symbols to emit")
    out_opt(p)
    p.set_defaults(func=cmd_constellation)

    p = sub.add_parser("beam", help="information-beam edges")
    sweep_opts(p)
    p.add_argument("--report", help="read an existing report CSV instead of sweeping")
    p.add_argument("--calibration-angle-deg", type=float, default=90.0)
    p.add_argument("--criterion", choices=("ber", "ratio"), default="ber")
    p.add_argument("--threshold", type=float, help="criterion threshold")
    p.add_argument("--order", type=int, default=256, help="QAM order for the ratio criterion")
    out_opt(p)
    p.set_defaults(func=cmd_beam)

    p = sub.add_parser("threshold", help="smallest error-inducing state ratio for M-QAM")
    p.add_argument("--order", type=int, default=256)
    out_opt(p)
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        _emit(args.func(args), args.output)
    except ValidationError as exc:
        print(f"dipoledm: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dipoledm: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

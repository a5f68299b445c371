"""Bit error rate across angle for the switched dipole link."""
# %%
import math
from dataclasses import replace
from fractions import Fraction

from dipoledm import BerBelow, RatioBelow, SweepConfig, angle_sweep, information_beam

config = SweepConfig()
report = angle_sweep(config)
print(f"{len(report)} angles, {config.n_bits} bits of {config.order}-QAM each")
print(" angle   ratio      BER     EVM")
for row in report.rows[::3]:
    print(f"{row.angle_deg:6.1f}  {row.ratio:6.4f}  {row.ber:7.4f}  {row.evm:6.4f}")

# %%
# The window where data survives, by BER and by the amplitude-ratio limit.
for criterion in (BerBelow(1e-3), RatioBelow(Fraction(8, 7))):
    beam = information_beam(report, criterion)
    print(f"{type(criterion).__name__}: {beam.lower_edge} .. {beam.upper_edge} deg (width {beam.width})")

# %%
# Stronger imbalance narrows the window at the price of radiated power.
for deg in (15, 30, 45, 60, 90):
    r = angle_sweep(replace(config, imbalance=math.radians(deg), n_bits=8 * 1000))
    print(f"imbalance {deg:2d} deg -> BER window {information_beam(r).width:4.1f} deg")

"""How much amplitude imbalance a QAM receiver can tolerate.

Two calibrated states scale every symbol by ``2r/(1+r)`` or ``2/(1+r)``.
Once the ratio ``r`` passes a constellation-specific limit the outermost
points cross a decision boundary.
"""
# %%
import numpy as np

from dipoledm import demodulate_labels, make_constellation, ratio_threshold

for order in (4, 16, 64, 256, 1024):
    limit = ratio_threshold(order)
    print(f"{order:5d}-QAM: tolerates ratios up to {limit} ({float(limit):.6f})")


# %%
# Check the 256-QAM limit by brute force around 8/7.
def symbol_errors(rho, c):
    sent = np.arange(c.order)
    return sum(
        int(np.count_nonzero(demodulate_labels(g * c.points, c) != sent))
        for g in (2 * rho / (1 + rho), 2 / (1 + rho))
    )


c = make_constellation(256)
for rho in (1.10, 1.14, 1.142, 1.143, 1.15, 1.2):
    print(f"ratio {rho:.3f}: {symbol_errors(rho, c):3d} of {2 * c.order} decisions wrong")

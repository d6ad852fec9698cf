"""
Lyapunov spectrum by Legendre transform
=======================================

For the same diagonal pair, the points with top exponent ``alpha`` are
those whose symbol frequencies are ``p = (1 + alpha/log 2)/2`` and
``1 - p``, so the entropy spectrum is the binary entropy ``H(p)``.

The numerical spectrum takes slopes of the pressure curve, then
``h = P(t) - t * alpha_t``.  The result is written as CSV for plotting.
"""

import math
import sys

import numpy as np

from matcocycle import butler, pressure_curve, spectrum_curve
from matcocycle.spectrum import concavity_violations, write_spectrum_csv


def binary_entropy(p):
    return -sum(x * math.log(x) for x in (p, 1 - p) if x > 0)


spec = butler(2.0)
grid = np.arange(-8, 8.001, 0.25)
curve = pressure_curve(spec, grid, 14)
points = spectrum_curve(spec, grid, 14, curve=curve)

# %%
# Compare with the analytic curve.

print(f"{'alpha':>8} {'h':>8} {'H(p)':>8} {'+/-':>7}")
for p in points[::4]:
    ref = binary_entropy(min(1.0, (1 + p.alpha / math.log(2)) / 2))
    print(f"{p.alpha:8.4f} {p.h:8.4f} {ref:8.4f} {p.h_uncertainty:7.4f}")

print("concavity violations:", concavity_violations(points))

# %%
# The CSV schema is ``alpha, h, uncertainty, t_source, region_flag``.

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", newline="") as fh:
        write_spectrum_csv(points, fh)

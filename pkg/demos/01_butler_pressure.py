"""
Pressure of a diagonal pair
===========================

The pair ``diag(2, 1/2)``, ``diag(1/2, 2)`` on the full 2-shift has a
closed-form pressure: a word with ``a`` zeros and ``b`` ones has norm
``2^|a-b|``, so for ``t >= 0`` the cylinder sum grows like
``(2^t + 2^-t)^n`` and ``P(t) = log(2^t + 2^-t)``.  For ``t <= 0`` the
balanced words dominate and ``P(t) = log 2``.

We compare certified brackets at several depths with the exact curve.
"""

import math

import numpy as np

from matcocycle import butler, pressure_bracket

spec = butler(2.0)


def exact(t):
    return math.log(2.0 ** t + 2.0 ** -t) if t >= 0 else math.log(2.0)


# %%
# Brackets at increasing depth.  The lower side at ``t = 1`` comes from a
# Bernoulli measure whose exponent along the common invariant axes is exact,
# so it sits on ``log 2.5`` already; the upper side closes like ``1/n``.

print(f"{'t':>5} {'n':>3} {'lower':>10} {'upper':>10} {'exact':>10}  source")
for t in (-2.0, 0.0, 1.0, 3.0):
    for n in (6, 10, 14):
        b = pressure_bracket(spec, t, n)
        print(f"{t:5.1f} {n:3d} {b.lower:10.6f} {b.upper:10.6f} {exact(t):10.6f}  {b.lower_source}")

# %%
# The curve is convex with slope ``log 2 * tanh(t log 2)`` for ``t > 0``.

grid = np.linspace(0, 4, 9)
mids = [pressure_bracket(spec, t, 12).mid for t in grid]
print("\nsecond differences of bracket midpoints (convexity):")
print(np.round(np.diff(mids, 2), 5))

"""
Continuity under perturbation
=============================

Perturb every generator multiplicatively by ``eps`` and watch the spectrum
curve and the exponent brackets move.  The changes shrink with ``eps``,
roughly linearly.
"""

import numpy as np

from matcocycle import positive_pair
from matcocycle.cli import perturb_table

rows = perturb_table(positive_pair(), [1e-1, 1e-2, 1e-3], n=10, grid=np.arange(-2, 4.01, 0.5))
print(f"{'eps':>7} {'spectrum change':>16} {'alpha diff':>11} {'beta diff':>10}")
for r in rows:
    print(f"{r['eps']:7.0e} {r['spectrum_change']:16.3e} {r['alpha_diff']:11.3e} {r['beta_diff']:10.3e}")

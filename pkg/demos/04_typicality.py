"""
Pinching and twisting
=====================

A cocycle is typical when some periodic orbit has a product with simple
eigenvalues of distinct moduli, and a homoclinic loop moves each
eigenvector off every hyperplane spanned by the others.  The loop here
starts at the fixed point ``000...`` and makes one excursion through ``1``.
"""

import numpy as np

from matcocycle import CocycleSpec, HomoclinicSpec, TransitionMatrix, butler, identity_cocycle, rotation
from matcocycle import typicality_report

loop = HomoclinicSpec(p_word="0", insert="1", offset=0)
cases = {
    "diag(2,1/2) with rotation(1)": CocycleSpec(TransitionMatrix.full(2), (np.diag([2.0, 0.5]), rotation(1.0))),
    "diagonal pair": butler(2.0),
    "identity": identity_cocycle(TransitionMatrix.full(2)),
}

for name, spec in cases.items():
    rep = typicality_report(spec, loop)
    level = rep.levels[0]
    print(f"{name:30s} typical={rep.typical!s:5s} pinching={level.pinching!s:5s} "
          f"twisting={level.twisting!s:5s} min coefficient={level.min_coeff}")

# %%
# The diagonal pair fails for a structural reason: the loop is
# ``diag(1/4, 4)``, which keeps both coordinate axes fixed.

print(typicality_report(butler(), loop).psi)

"""
Diagonal groups and the redundancy obstruction
==============================================

On a basis, T_t x_n = exp(i lambda_n t) x_n extends to a bounded group. For a
redundant family the lifted diagonal map would have to keep N invariant,
which a diagonal map with distinct entries cannot do.
"""

import numpy as np

from crossframes.crossframe import CrossFramePair
from crossframes.intertwine import (build_diagonal_group, diagonal_group_obstruction,
                                    group_axioms_check)

lam = [0.0, 1.0, 2.0]
print(build_diagonal_group(lam, np.pi / 2).entries.round(12))
rep = group_axioms_check(lam, np.linspace(-1, 2, 5))
print("axioms pass:", rep.passed, "law residual", rep.law_residual)

basis = CrossFramePair.from_arrays(np.eye(2), np.eye(2))
print(diagonal_group_obstruction(basis, [0.0, 1.0], 0.5).verdict)

s = np.sqrt(3) / 2
x = np.array([[1.0, 0.0], [-0.5, s], [-0.5, -s]])
v = diagonal_group_obstruction(CrossFramePair.from_arrays(x, 2 / 3 * x), lam, 0.5)
print(v.verdict, "off-N residual", v.evidence)

"""
Equivalent dual families
========================

Any other co-frame that reconstructs against the same frame is the image of
the original under an invertible operator U on X, and likewise V on the dual
side. Here we recover U, V from rescaled and rotated candidates.
"""

import numpy as np

from crossframes.crossframe import (CrossFramePair, equivalence_operator_U,
                                    equivalence_operator_V, transform_pair,
                                    verify_reconstruction)

s = np.sqrt(3) / 2
x = np.array([[1.0, 0.0], [-0.5, s], [-0.5, -s]])
pair = CrossFramePair.from_arrays(x, 2 / 3 * x)

res = equivalence_operator_U(pair, 2 * x)
print("U for a doubled co-frame:\n", res.operator.entries, "\ncond", res.cond)

res = equivalence_operator_V(pair, -pair.y)
print("V for a negated frame:\n", res.operator.entries)

# a rank-deficient candidate has no invertible U
res = equivalence_operator_U(pair, np.array([[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0]]))
print("flat candidate:", res.verdict, "cond", res.cond)

# moving both families by T keeps the pair reconstructing
th = np.pi / 6
T = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]]) @ np.diag([1.0, 3.0])
moved = transform_pair(pair, T)
print("after T:", verify_reconstruction(moved).residual)

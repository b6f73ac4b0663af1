"""
Intertwining operators
======================

For a reconstructing pair the synthesis map S sends coefficient sequences to
vectors. An operator A on sequences pushes forward to B on vectors with
S A = B S exactly when A keeps the null series N = Ker S invariant; going
back, every such A is Rt B S plus a piece with range in N.
"""

import numpy as np

from crossframes.crossframe import CrossFramePair, build_operators
from crossframes.intertwine import (InvarianceError, completeness_check, lift_A,
                                    push_forward_B)
from crossframes.linmap import kernel_basis, projector_pair

s = np.sqrt(3) / 2
x = np.array([[1.0, 0.0], [-0.5, s], [-0.5, -s]])
ops = build_operators(CrossFramePair.from_arrays(x, 2 / 3 * x))

N = kernel_basis(ops.S)
P = projector_pair(ops.S, ops.Rt).P.entries
print("N spanned by", N.vectors.ravel())
print("P =\n", P)

print("B for A = P:\n", push_forward_B(P, ops).partner.entries.round(12))

try:
    push_forward_B(np.diag([1.0, 2.0, 3.0]), ops)
except InvarianceError as exc:
    print("diag(1,2,3):", exc, "vector", exc.vector)

B = np.array([[0.0, -1.0], [1.0, 0.0]])
res = lift_A(B, ops, "random-in-N", seed=42)
print("lifted A residual", res.residual)
rep = completeness_check(res.partner, B, ops)
print("A0 recovered:", np.allclose(rep.A0, res.decomposition[1].entries),
      "formula residual", rep.formula_residual)

"""
Frame bounds in l^p
===================

Three unit vectors at 120 degrees form a tight frame of the plane. We measure
its bounds in a few l^p geometries and compare the Euclidean case with the
eigenvalues of the frame operator.
"""

import numpy as np

from crossframes.frames import FrameFamily, frame_bounds, hilbert_frame_bounds

s = np.sqrt(3) / 2
mercedes = np.array([[1.0, 0.0], [-0.5, s], [-0.5, -s]])

# Euclidean: both bounds equal sqrt(3/2), the squared constants are 3/2
F = FrameFamily.from_rows(mercedes, p=2, r=2)
fb = frame_bounds(F)
print("p = r = 2      A = %.9f  B = %.9f" % (fb.A, fb.B))
print("squared        ", hilbert_frame_bounds(F))
print("eigenvalues    ", np.linalg.eigvalsh(mercedes.T @ mercedes))

# other geometries keep the family a frame but break tightness
for p, r in [(1, 1), (2, np.inf), (np.inf, 1), (3, 1.5)]:
    fb = frame_bounds(FrameFamily.from_rows(mercedes, p=p, r=r))
    print(f"p = {p:<4g} r = {r:<4g} A = {fb.A:.6f}  B = {fb.B:.6f}  witness {fb.lower.witness}")

# a single vector in the plane is Bessel but not a frame
fb = frame_bounds(FrameFamily.from_rows([[1.0, 0.0]]))
print("one vector: A =", fb.A, "is_frame =", fb.is_frame)

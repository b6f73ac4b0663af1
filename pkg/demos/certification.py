"""
Certifying a cross-frame pair
=============================

A pair of families reconstructs when x = sum (x, y_n) x_n for every x. The
canonical dual of the Mercedes frame does; the frame paired with itself
misses by a factor 3/2.
"""

import numpy as np

from crossframes.crossframe import (CrossFramePair, certify_cross_frame, random_cross_frame,
                                    verify_reconstruction)

s = np.sqrt(3) / 2
x = np.array([[1.0, 0.0], [-0.5, s], [-0.5, -s]])

good = CrossFramePair.from_arrays(x, 2 / 3 * x)
cert = certify_cross_frame(good)
print(cert.reason, cert.constants)

bad = CrossFramePair.from_arrays(x, x)
print("unscaled residual:", verify_reconstruction(bad).residual)
print("certified:", certify_cross_frame(bad).certified)

# a non-canonical dual in l^3 / l^1.5, complex scalars
rng = np.random.default_rng(0)
pair = random_cross_frame(3, 6, rng, p=3, r=1.5, scalar="complex")
cert = certify_cross_frame(pair, restarts=16)
print("random pair:", cert.certified, {k: round(v, 4) for k, v in cert.constants.items()})

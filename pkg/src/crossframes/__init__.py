"""Frames, co-frames and cross-frames in finite-dimensional lp spaces."""

from .crossframe import CrossFramePair, certify_cross_frame, verify_reconstruction
from .frames import COFRAME, FRAME, FrameFamily, coframe_bounds, frame_bounds
from .linmap import LinearMap, kernel_basis
from .spaces import NormedSpace, Scalar

__version__ = "0.1.0"

__all__ = [
    "COFRAME", "FRAME", "CrossFramePair", "FrameFamily", "LinearMap", "NormedSpace", "Scalar",
    "certify_cross_frame", "coframe_bounds", "frame_bounds", "kernel_basis",
    "verify_reconstruction",
]

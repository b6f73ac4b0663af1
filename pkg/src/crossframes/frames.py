"""Frame and co-frame families and their bounds.

A frame ``{y_n}`` in X* is measured through its analysis map
``x -> {(x, y_n)}`` from ``(X, p)`` to ``(X_d, r)``; a co-frame ``{x_n}`` in X
through ``y -> {(x_n, y)}`` from ``(X*, q)`` to ``(X_d*, r')`` with the
conjugate exponents. The bounds are the extremal values of these maps over
the unit sphere, reported unsquared. :func:`hilbert_frame_bounds` gives the
squared Hilbert-space constants at ``p = r = 2``.
"""

from dataclasses import dataclass

import numpy as np

from . import optim
from .linmap import LinearMap, adjoint
from .spaces import DomainError, NormedSpace, Scalar, ShapeError

FRAME = "frame"
COFRAME = "coframe"


class InvalidFamilyError(ValueError):
    """The family has a zero vector or a degenerate shape."""


@dataclass(frozen=True, eq=False)
class FrameFamily:
    """``n`` vectors of length ``m`` stored as the rows of ``vectors``.

    ``ambient`` is X with exponent ``p`` and ``coeff`` is X_d with exponent
    ``r``; for a co-frame the rows live in X, for a frame in X*.
    """

    vectors: np.ndarray
    ambient: NormedSpace
    coeff: NormedSpace
    side: str = FRAME

    def __post_init__(self):
        v = np.array(self.vectors, dtype=self.ambient.dtype)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise InvalidFamilyError(f"a family needs an n x m array with n, m >= 1, got {v.shape}")
        if v.shape != (self.coeff.dim, self.ambient.dim):
            raise ShapeError(f"family of shape {v.shape} does not match "
                             f"n={self.coeff.dim}, m={self.ambient.dim}")
        if self.side not in (FRAME, COFRAME):
            raise ValueError(f"side must be {FRAME!r} or {COFRAME!r}")
        zero = np.flatnonzero(~np.any(v, axis=1))
        if zero.size:
            raise InvalidFamilyError(f"family contains the zero vector at row {zero[0]}")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def from_rows(cls, rows, p=2.0, r=2.0, side=FRAME, scalar=None):
        rows = np.asarray(rows)
        if rows.ndim != 2:
            raise InvalidFamilyError(f"a family needs a 2-d array, got {rows.ndim}-d")
        if scalar is None:
            scalar = Scalar.COMPLEX if np.iscomplexobj(rows) else Scalar.REAL
        n, m = rows.shape
        return cls(rows, NormedSpace(max(m, 1), p, scalar), NormedSpace(max(n, 1), r, scalar), side)

    @property
    def n(self):
        return self.vectors.shape[0]

    @property
    def m(self):
        return self.vectors.shape[1]

    @property
    def p(self):
        return self.ambient.p

    @property
    def r(self):
        return self.coeff.p

    def with_vectors(self, rows, side=None):
        return FrameFamily(rows, self.ambient, self.coeff, side or self.side)

    def scaled(self, c):
        return self.with_vectors(c * self.vectors)

    def analysis(self):
        """The map ``x -> {(x, v_n)}`` (frame) or ``y -> {(x_n, y)}`` (co-frame).

        For a co-frame this is the adjoint of the synthesis map, acting
        between the dual spaces.
        """
        if self.side == FRAME:
            return LinearMap(self.vectors.conj(), self.ambient, self.coeff)
        return adjoint(self.synthesis())

    def synthesis(self):
        """``a -> sum a_n v_n`` from X_d (or X_d*) to X (or X*)."""
        if self.side == FRAME:
            return adjoint(self.analysis())
        return LinearMap(self.vectors.T, self.coeff, self.ambient)


@dataclass(frozen=True, eq=False)
class FrameBounds:
    lower: optim.ExtremalResult
    upper: optim.ExtremalResult
    exponents: tuple
    is_frame: bool
    side: str = FRAME

    @property
    def A(self):
        return self.lower.value

    @property
    def B(self):
        return self.upper.value


def _bounds(F, side, restarts, seed):
    if F.side != side:
        raise InvalidFamilyError(f"expected a {side} family, got a {F.side} family")
    M = F.analysis()
    lo = optim.extremal(M, M.domain.p, M.codomain.p, "min", restarts, seed)
    hi = optim.extremal(M, M.domain.p, M.codomain.p, "max", restarts, seed)
    return FrameBounds(lo, hi, (F.p, F.r), optim.is_positive(lo.value, hi.value), side)


def frame_bounds(F, restarts=optim.DEFAULT_RESTARTS, seed=0):
    """Constants ``A, B`` with ``A ||x||_p <= ||{(x, y_n)}||_r <= B ||x||_p``.

    ``is_frame`` is true when the lower value is positive relative to the
    upper one.
    """
    return _bounds(F, FRAME, restarts, seed)


def coframe_bounds(F, restarts=optim.DEFAULT_RESTARTS, seed=0):
    """Constants for ``||{(x_n, y)}||_{r'}`` against ``||y||_q`` on X*."""
    return _bounds(F, COFRAME, restarts, seed)


def family_bounds(F, restarts=optim.DEFAULT_RESTARTS, seed=0):
    """Bounds of either side, dispatching on ``F.side``."""
    return _bounds(F, F.side, restarts, seed)


def is_bessel(F, restarts=optim.DEFAULT_RESTARTS, seed=0):
    """Every finite family is Bessel; returns ``(True, upper bound)``."""
    M = F.analysis()
    hi = optim.extremal(M, M.domain.p, M.codomain.p, "max", restarts, seed)
    return bool(np.isfinite(hi.value)), hi.value


def hilbert_frame_bounds(F):
    """Squared bounds ``(A, B)`` of ``A ||f||^2 <= sum |(f, v_n)|^2 <= B ||f||^2``.

    Only defined for ``p = r = 2``.
    """
    if F.p != 2 or F.r != 2:
        raise DomainError(f"Hilbert frame bounds need p = r = 2, got p={F.p:g}, r={F.r:g}")
    M = F.analysis()
    lo = optim.svd_oracle(M, "min").value
    hi = optim.svd_oracle(M, "max").value
    return lo**2, hi**2

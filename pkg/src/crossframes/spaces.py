"""Finite-dimensional lp spaces, dual exponents and the duality bracket.

A Banach space X is modelled as ``scalar**dim`` with the lp norm; its dual
X* is the same coordinate space under the dual exponent. Vectors are plain
numpy arrays.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ShapeError(ValueError):
    """Raised when array dimensions disagree with the declared spaces."""


class DomainError(ValueError):
    """Raised for out-of-range parameters such as an exponent p < 1."""


class Scalar(str, Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is Scalar.REAL else np.complex128


def check_exponent(p):
    """Return `p` as a float in [1, inf], raising DomainError otherwise."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"exponent must be a number, got {p!r}") from None
    if np.isnan(p) or p < 1:
        raise DomainError(f"exponent must lie in [1, inf], got {p}")
    return p


def dual_exponent(p):
    """Conjugate exponent q with 1/p + 1/q = 1.

    >>> dual_exponent(4)
    1.3333333333333333
    >>> dual_exponent(1)
    inf
    """
    p = check_exponent(p)
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True)
class NormedSpace:
    """The coordinate space ``scalar**dim`` with the lp norm."""

    dim: int
    p: float = 2.0
    scalar: Scalar = Scalar.REAL

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", check_exponent(self.p))
        object.__setattr__(self, "scalar", Scalar(self.scalar))

    @property
    def dual(self):
        """The dual space, same coordinates under the conjugate exponent."""
        return NormedSpace(self.dim, dual_exponent(self.p), self.scalar)

    @property
    def dtype(self):
        return self.scalar.dtype

    def vector(self, coords):
        """Coerce `coords` to an array belonging to this space."""
        v = np.asarray(coords)
        if v.shape != (self.dim,):
            raise ShapeError(f"expected a vector of length {self.dim}, got shape {v.shape}")
        if self.scalar is Scalar.REAL and np.iscomplexobj(v):
            if np.any(v.imag != 0):
                raise ShapeError("complex coordinates in a real space")
            v = v.real
        return v.astype(self.dtype)

    def norm(self, v):
        return norm(v, self)

    def basis_vector(self, k):
        e = np.zeros(self.dim, dtype=self.dtype)
        e[k] = 1
        return e


def lp_norm(v, p):
    """lp norm of an array of scalars; ``p = inf`` gives the max norm."""
    a = np.abs(np.asarray(v))
    if a.size == 0:
        return 0.0
    if np.isinf(p):
        return float(a.max())
    if p == 1:
        return float(a.sum())
    if p == 2:
        return float(np.sqrt(np.sum(a * a)))
    # rescale by the max entry to avoid overflow for large p
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((a / scale) ** p) ** (1.0 / p))


def norm(v, space):
    """Norm of `v` in `space`."""
    v = np.asarray(v)
    if v.shape != (space.dim,):
        raise ShapeError(f"vector of shape {v.shape} does not belong to a space of dim {space.dim}")
    return lp_norm(v, space.p)


def pairing(x, y):
    """Duality bracket ``(x, y) = sum x_i conj(y_i)``, linear in `x`.

    For real data this is the plain bilinear form.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeError(f"cannot pair vectors of shapes {x.shape} and {y.shape}")
    return np.vdot(y, x)

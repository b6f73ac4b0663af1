"""Dense linear maps between lp spaces.

Adjoints are conjugate transposes acting between the dual spaces. Kernels
and invertibility are decided numerically through the SVD, with a relative
threshold on the singular values.
"""

from dataclasses import dataclass

import numpy as np

from .spaces import NormedSpace, Scalar, ShapeError

DEFAULT_COND_CAP = 1e12


class InvertibilityError(np.linalg.LinAlgError):
    """A map that should be inverted is singular or too ill-conditioned."""

    def __init__(self, message, cond=np.inf):
        super().__init__(message)
        self.cond = cond


class PreconditionError(ValueError):
    """An operation was called on inputs violating its precondition."""


def _common_scalar(*spaces):
    if any(s.scalar is Scalar.COMPLEX for s in spaces):
        return Scalar.COMPLEX
    return Scalar.REAL


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Matrix of a linear map ``domain -> codomain``.

    ``entries`` has shape ``(codomain.dim, domain.dim)``.
    """

    entries: np.ndarray
    domain: NormedSpace
    codomain: NormedSpace

    def __post_init__(self):
        scalar = _common_scalar(self.domain, self.codomain)
        a = np.array(self.entries, dtype=scalar.dtype if not np.iscomplexobj(self.entries)
                     else np.complex128)
        if a.shape != (self.codomain.dim, self.domain.dim):
            raise ShapeError(
                f"entries of shape {a.shape} do not match "
                f"{self.domain.dim} -> {self.codomain.dim}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_array(cls, entries, p_in=2.0, p_out=2.0, scalar=None):
        """Wrap a plain array, inferring the spaces from its shape."""
        a = np.asarray(entries)
        if a.ndim != 2:
            raise ShapeError(f"a linear map needs a 2-d array, got {a.ndim}-d")
        if scalar is None:
            scalar = Scalar.COMPLEX if np.iscomplexobj(a) else Scalar.REAL
        return cls(a, NormedSpace(a.shape[1], p_in, scalar), NormedSpace(a.shape[0], p_out, scalar))

    @classmethod
    def identity(cls, space):
        return cls(np.eye(space.dim, dtype=space.dtype), space, space)

    @classmethod
    def zero(cls, domain, codomain):
        return cls(np.zeros((codomain.dim, domain.dim), dtype=codomain.dtype), domain, codomain)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def is_square(self):
        return self.domain.dim == self.codomain.dim

    def __call__(self, v):
        return apply(self, v)

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return compose(self, other)
        return apply(self, other)

    def __add__(self, other):
        _check_same_spaces(self, other)
        return LinearMap(self.entries + other.entries, self.domain, self.codomain)

    def __sub__(self, other):
        _check_same_spaces(self, other)
        return LinearMap(self.entries - other.entries, self.domain, self.codomain)

    def __neg__(self):
        return LinearMap(-self.entries, self.domain, self.codomain)

    def __mul__(self, c):
        return LinearMap(c * self.entries, self.domain, self.codomain)

    __rmul__ = __mul__

    @property
    def H(self):
        return adjoint(self)

    def opnorm(self):
        """Euclidean operator norm (largest singular value)."""
        return opnorm(self.entries)

    def __repr__(self):
        return (f"LinearMap({self.domain.dim}->{self.codomain.dim}, "
                f"p={self.domain.p:g}->{self.codomain.p:g}, {self.codomain.scalar.value})")


def _check_same_spaces(a, b):
    if a.shape != b.shape:
        raise ShapeError(f"maps of shapes {a.shape} and {b.shape} cannot be combined")


def opnorm(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def apply(M, v):
    v = np.asarray(v)
    if v.shape != (M.domain.dim,):
        raise ShapeError(f"vector of shape {v.shape} is not in the domain (dim {M.domain.dim})")
    return M.entries @ v


def compose(M, N):
    """``M @ N``: first N, then M."""
    if N.codomain.dim != M.domain.dim:
        raise ShapeError(f"cannot compose {M!r} after {N!r}")
    return LinearMap(M.entries @ N.entries, N.domain, M.codomain)


def adjoint(M):
    """Conjugate transpose, acting ``codomain* -> domain*``.

    Satisfies ``pairing(M v, w) == pairing(v, adjoint(M) w)``.
    """
    return LinearMap(M.entries.conj().T, M.codomain.dual, M.domain.dual)


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Orthonormal basis of a numerical null space, stored as columns."""

    vectors: np.ndarray
    tolerance: float

    @property
    def dim(self):
        return self.vectors.shape[1]

    @property
    def ambient_dim(self):
        return self.vectors.shape[0]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.vectors.T)

    def projector(self):
        """Orthogonal projector onto the span of the basis."""
        K = self.vectors
        return K @ K.conj().T

    def contains(self, v, tol=None):
        """Whether `v` lies in the span, relative to its norm."""
        tol = self.tolerance if tol is None else tol
        v = np.asarray(v)
        off = v - self.projector() @ v
        return np.linalg.norm(off) <= tol * max(np.linalg.norm(v), np.finfo(float).tiny)


def kernel_basis(M, tol=1e-10):
    """Numerical null space of `M`.

    Right singular vectors whose singular value is at most ``tol * sigma_max``
    (plus the ones beyond the rank of a wide matrix) span the kernel.

    Parameters
    ----------
    M : LinearMap or array_like
    tol : float
        Relative singular value threshold, must be positive.

    Returns
    -------
    KernelBasis
        Orthonormal columns; may have zero columns.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = M.entries if isinstance(M, LinearMap) else np.asarray(M)
    cols = a.shape[1]
    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    if a.size == 0 or not np.any(a):
        return KernelBasis(np.eye(cols, dtype=dtype), tol)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol * s[0]))
    return KernelBasis(np.ascontiguousarray(vh[rank:].conj().T), tol)


def singular_values(M):
    a = M.entries if isinstance(M, LinearMap) else np.asarray(M)
    return np.linalg.svd(a, compute_uv=False)


def is_invertible(M, cond_cap=DEFAULT_COND_CAP):
    """Return ``(invertible, cond)`` for a square map.

    Invertible means the smallest singular value is positive and the
    condition number ``sigma_max / sigma_min`` does not exceed `cond_cap`.
    """
    a = M.entries if isinstance(M, LinearMap) else np.asarray(M)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"invertibility needs a square map, got shape {a.shape}")
    if cond_cap <= 1:
        raise ValueError("cond_cap must exceed 1")
    s = singular_values(a)
    if s[-1] == 0:
        return False, np.inf
    cond = float(s[0] / s[-1])
    return bool(cond <= cond_cap), cond


def inverse(M, cond_cap=DEFAULT_COND_CAP):
    """Inverse map ``codomain -> domain``; raises InvertibilityError."""
    ok, cond = is_invertible(M, cond_cap)
    if not ok:
        raise InvertibilityError(f"map is not invertible (condition number {cond:.3g})", cond)
    return LinearMap(np.linalg.inv(M.entries), M.codomain, M.domain)


@dataclass(frozen=True, eq=False)
class ProjectorPair:
    """``Q = Rt S`` onto Im(Rt) along N = Ker(S), and ``P = I - Q``."""

    Q: LinearMap
    P: LinearMap
    tol: float

    def residuals(self, S=None):
        """Entrywise max residuals of the projector identities."""
        n = self.P.shape[0]
        I = np.eye(n)
        P, Q = self.P.entries, self.Q.entries
        out = {
            "sum": float(np.max(np.abs(P + Q - I))),
            "P_idempotent": float(np.max(np.abs(P @ P - P))),
            "Q_idempotent": float(np.max(np.abs(Q @ Q - Q))),
            "PQ": float(np.max(np.abs(P @ Q))),
        }
        if S is not None:
            out["SP"] = float(np.max(np.abs(S.entries @ P), initial=0.0))
        return out


def projector_pair(S, Rt, tol=1e-10):
    """Build the complementary projectors of a reconstructing pair.

    Requires ``S @ Rt = I`` within `tol` (operator 2-norm).
    """
    if S.shape[::-1] != Rt.shape:
        raise ShapeError(f"synthesis {S.shape} and analysis {Rt.shape} are incompatible")
    m = S.shape[0]
    resid = opnorm(S.entries @ Rt.entries - np.eye(m))
    if resid > tol:
        raise PreconditionError(f"S Rt differs from the identity by {resid:.3g} > tol={tol:g}")
    Q = compose(Rt, S)
    P = LinearMap.identity(Q.domain) - Q
    return ProjectorPair(Q, P, tol)

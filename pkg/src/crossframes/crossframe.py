"""Cross-frame pairs: reconstruction, certification, equivalence, transforms.

A pair ``({x_n}, {y_n})`` with ``x_n`` in X and ``y_n`` in X* reconstructs
when ``x = sum (x, y_n) x_n`` for every x, i.e. ``S Rt = I_X`` for the
synthesis ``S a = sum a_n x_n`` and analysis ``Rt x = {(x, y_n)}``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import optim
from .frames import COFRAME, FRAME, FrameBounds, FrameFamily, coframe_bounds, frame_bounds
from .linmap import (DEFAULT_COND_CAP, InvertibilityError, LinearMap, adjoint, compose,
                     inverse, is_invertible, kernel_basis, opnorm)
from .spaces import NormedSpace, Scalar, ShapeError, pairing

DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CrossFramePair:
    """Co-frame ``{x_n}`` (rows of ``coframe.vectors``) and frame ``{y_n}``."""

    coframe: FrameFamily
    frame: FrameFamily
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.coframe.side != COFRAME or self.frame.side != FRAME:
            raise ValueError("expected a (coframe, frame) pair of families")
        if self.coframe.vectors.shape != self.frame.vectors.shape:
            raise ShapeError(f"families of shapes {self.coframe.vectors.shape} and "
                             f"{self.frame.vectors.shape} cannot pair")
        if (self.coframe.p, self.coframe.r) != (self.frame.p, self.frame.r):
            raise ShapeError("the two families must live over the same X and X_d")

    @classmethod
    def from_arrays(cls, x, y, p=2.0, r=2.0, tol=DEFAULT_TOL, scalar=None):
        x = np.asarray(x)
        y = np.asarray(y)
        if scalar is None:
            scalar = Scalar.COMPLEX if (np.iscomplexobj(x) or np.iscomplexobj(y)) else Scalar.REAL
        return cls(FrameFamily.from_rows(x, p, r, COFRAME, scalar),
                   FrameFamily.from_rows(y, p, r, FRAME, scalar), tol)

    @property
    def x(self):
        return self.coframe.vectors

    @property
    def y(self):
        return self.frame.vectors

    @property
    def n(self):
        return self.coframe.n

    @property
    def m(self):
        return self.coframe.m

    def replace(self, x=None, y=None):
        return CrossFramePair(
            self.coframe if x is None else self.coframe.with_vectors(x),
            self.frame if y is None else self.frame.with_vectors(y),
            self.tol)


@dataclass(frozen=True, eq=False)
class OperatorBundle:
    """``S: X_d -> X``, ``Rt: X -> X_d``, ``R = S*``, ``St = Rt*``."""

    S: LinearMap
    Rt: LinearMap
    R: LinearMap
    St: LinearMap


def build_operators(pair):
    S = pair.coframe.synthesis()
    Rt = pair.frame.analysis()
    return OperatorBundle(S=S, Rt=Rt, R=adjoint(S), St=adjoint(Rt))


@dataclass(frozen=True, eq=False)
class ReconstructionReport:
    identity: str
    residual: float
    sample_residuals: np.ndarray
    tol: float
    passed: bool


def _sample_batch(dim, dtype, count, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, dim))
    if np.issubdtype(dtype, np.complexfloating):
        z = z + 1j * rng.standard_normal((count, dim))
    return z


def verify_reconstruction(pair, samples=16, seed=0):
    """Residual of ``x = sum (x, y_n) x_n``.

    ``residual`` is ``||S Rt - I_X||`` (operator 2-norm); the per-sample
    residuals evaluate the series term by term on a seeded batch of x,
    relative to ``||x||``.
    """
    ops = build_operators(pair)
    m = pair.m
    residual = opnorm(ops.S.entries @ ops.Rt.entries - np.eye(m))
    per = []
    for x in _sample_batch(m, pair.coframe.ambient.dtype, samples, seed):
        rebuilt = sum(pairing(x, yn) * xn for xn, yn in zip(pair.x, pair.y))
        per.append(np.linalg.norm(x - rebuilt) / np.linalg.norm(x))
    return ReconstructionReport("x = sum (x, y_n) x_n", residual, np.array(per), pair.tol,
                                bool(residual <= pair.tol))


def derived_dual_reconstruction(pair, samples=16, seed=7):
    """Residual of the dual expansion ``y = sum (x_n, y)~ y_n`` on X*.

    With the sesquilinear bracket the coefficients of ``St R y`` are
    ``conj((x_n, y)) = (y, x_n)``; for real data this is ``(x_n, y)``.
    When the primal reconstruction fails its report is returned unchanged.
    """
    primal = verify_reconstruction(pair, samples, seed)
    if not primal.passed:
        return primal
    ops = build_operators(pair)
    m = pair.m
    residual = opnorm(ops.St.entries @ ops.R.entries - np.eye(m))
    per = []
    for y in _sample_batch(m, pair.frame.ambient.dtype, samples, seed):
        rebuilt = sum(pairing(y, xn) * yn for xn, yn in zip(pair.x, pair.y))
        per.append(np.linalg.norm(y - rebuilt) / np.linalg.norm(y))
    return ReconstructionReport("y = sum (y, x_n) y_n", residual, np.array(per), pair.tol,
                                bool(residual <= pair.tol))


@dataclass(frozen=True, eq=False)
class Certificate:
    certified: bool
    reason: str
    reconstruction: ReconstructionReport
    dual_reconstruction: ReconstructionReport | None = None
    frame: FrameBounds | None = None
    coframe: FrameBounds | None = None

    @property
    def constants(self):
        """``{'A', 'B', 'At', 'Bt'}``: frame bounds of y, co-frame bounds of x."""
        if self.frame is None:
            return {}
        return {"A": self.frame.A, "B": self.frame.B,
                "At": self.coframe.A, "Bt": self.coframe.B}


def certify_cross_frame(pair, restarts=optim.DEFAULT_RESTARTS, seed=0):
    """Check reconstruction, then certify both two-sided inequalities.

    Reconstruction together with the finite-dimensional membership of the
    coefficient sequences forces positive lower bounds for both families;
    this computes them and records all four constants.
    """
    rec = verify_reconstruction(pair, seed=seed)
    if not rec.passed:
        return Certificate(False, f"reconstruction residual {rec.residual:.3g} exceeds "
                                  f"tol={pair.tol:g}", rec)
    dual = derived_dual_reconstruction(pair, seed=seed)
    fb = frame_bounds(pair.frame, restarts, seed)
    cb = coframe_bounds(pair.coframe, restarts, seed)
    problems = []
    if not fb.is_frame:
        problems.append("frame lower bound is not positive")
    if not cb.is_frame:
        problems.append("co-frame lower bound is not positive")
    if not dual.passed:
        problems.append("dual reconstruction failed")
    ok = not problems
    return Certificate(ok, "cross-frame" if ok else "; ".join(problems), rec, dual, fb, cb)


@dataclass(frozen=True, eq=False)
class EquivalenceResult:
    """Outcome of the U (or V) test against a candidate family."""

    operator: LinearMap
    invertible: bool
    cond: float
    verdict: str
    transformed: FrameFamily | None = None
    checks: dict = field(default_factory=dict)

    @property
    def equivalent(self):
        return self.verdict == "equivalent"


def _as_family(candidate, like, side):
    if isinstance(candidate, FrameFamily):
        if candidate.vectors.shape != like.vectors.shape:
            raise ShapeError(f"candidate of shape {candidate.vectors.shape} does not match "
                             f"{like.vectors.shape}")
        return candidate if candidate.side == side else candidate.with_vectors(
            candidate.vectors, side)
    return like.with_vectors(np.asarray(candidate), side)


def equivalence_operator_U(pair, candidate, cond_cap=DEFAULT_COND_CAP):
    """Test whether co-frame `candidate` is equivalent to an alternate dual of ``{y_n}``.

    Builds ``U x = sum (x, y_n) x'_n`` on X. When U is invertible the family
    ``{U^-1 x'_n}`` is returned and must reconstruct with ``{y_n}``.
    """
    cand = _as_family(candidate, pair.coframe, COFRAME)
    U = compose(cand.synthesis(), pair.frame.analysis())
    ok, cond = is_invertible(U, cond_cap)
    if not ok:
        return EquivalenceResult(U, False, cond, "not equivalent")
    U_inv = inverse(U, cond_cap)
    new_x = (U_inv.entries @ cand.vectors.T).T
    new_pair = pair.replace(x=new_x)
    rec = verify_reconstruction(new_pair)
    verdict = "equivalent" if rec.passed else "not equivalent"
    return EquivalenceResult(U, True, cond, verdict, new_pair.coframe,
                             {"reconstruction": rec})


def equivalence_operator_V(pair, candidate, cond_cap=DEFAULT_COND_CAP):
    """Test whether frame `candidate` is equivalent to an alternate dual of ``{x_n}``.

    Builds ``V y = sum (y, x_n) y'_n`` on X*. When V is invertible the family
    ``{V^-1 y'_n}`` is returned; both its dual expansion and the primal
    reconstruction ``x = sum (x, V^-1 y'_n) x_n`` are checked.
    """
    cand = _as_family(candidate, pair.frame, FRAME)
    V = compose(cand.synthesis(), pair.coframe.analysis())
    ok, cond = is_invertible(V, cond_cap)
    if not ok:
        return EquivalenceResult(V, False, cond, "not equivalent")
    V_inv = inverse(V, cond_cap)
    new_y = (V_inv.entries @ cand.vectors.T).T
    new_pair = pair.replace(y=new_y)
    ops = build_operators(new_pair)
    dual_residual = opnorm(ops.St.entries @ ops.R.entries - np.eye(pair.m))
    rec = verify_reconstruction(new_pair)
    passed = rec.passed and dual_residual <= pair.tol
    return EquivalenceResult(V, True, cond, "equivalent" if passed else "not equivalent",
                             new_pair.frame,
                             {"reconstruction": rec, "dual_residual": dual_residual})


def transform_pair(pair, T, cond_cap=DEFAULT_COND_CAP):
    """The pair ``({T x_n}, {(T^-1)* y_n})`` for an invertible T on X."""
    if not isinstance(T, LinearMap):
        T = LinearMap(np.asarray(T), pair.coframe.ambient, pair.coframe.ambient)
    if T.shape != (pair.m, pair.m):
        raise ShapeError(f"T must act on X (dim {pair.m}), got shape {T.shape}")
    T_inv = inverse(T, cond_cap)
    new_x = pair.x @ T.entries.T
    new_y = pair.y @ T_inv.entries.conj()
    return pair.replace(x=new_x, y=new_y)


def canonical_dual(x, p=2.0, r=2.0, tol=DEFAULT_TOL):
    """Pair ``{x_n}`` with its canonical dual ``y_n = F^-1 x_n``, ``F = S S*``."""
    x = np.asarray(x)
    S = x.T
    F = S @ S.conj().T
    ok, cond = is_invertible(F)
    if not ok:
        raise InvertibilityError("the family does not span X", cond)
    y = np.linalg.solve(F, S).T
    return CrossFramePair.from_arrays(x, y, p, r, tol)


def random_cross_frame(m, n, rng, p=2.0, r=2.0, scalar=Scalar.REAL, perturb=1.0,
                       tol=DEFAULT_TOL):
    """A random reconstructing pair with ``n >= m`` vectors in dimension m.

    S is a random surjection and ``Rt = pinv(S) + K G`` with K spanning
    Ker(S) and G random, so ``S Rt = I`` while the dual is not canonical.
    """
    if n < m:
        raise ValueError("a reconstructing pair needs n >= m")
    cplx = Scalar(scalar) is Scalar.COMPLEX

    def draw(*shape):
        a = rng.standard_normal(shape)
        return a + 1j * rng.standard_normal(shape) if cplx else a

    S = draw(m, n)
    Rt = np.linalg.pinv(S)
    K = kernel_basis(S).vectors
    if K.shape[1]:
        Rt = Rt + perturb * K @ draw(K.shape[1], m)
    space = NormedSpace(m, p, scalar)
    coeff = NormedSpace(n, r, scalar)
    return CrossFramePair(FrameFamily(S.T, space, coeff, COFRAME),
                          FrameFamily(Rt.conj(), space, coeff, FRAME), tol)

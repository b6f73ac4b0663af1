"""Intertwining operators of the synthesis map and diagonal one-parameter groups.

The synthesis ``S: X_d -> X`` intertwines ``A`` on X_d and ``B`` on X when
``S A = B S``. Such a B exists (and is then unique) exactly when A maps the
null-series space ``N = Ker(S)`` into itself; every A intertwining a given B
has the form ``Rt B S + A0`` with the range of A0 inside N.
"""

from dataclasses import dataclass, field

import numpy as np

from .crossframe import CrossFramePair, build_operators
from .linmap import LinearMap, PreconditionError, kernel_basis, opnorm, projector_pair
from .spaces import DomainError, NormedSpace, Scalar, ShapeError, lp_norm

DEFAULT_TOL = 1e-10
KERNEL_RTOL = 1e-10


class InvarianceError(PreconditionError):
    """A does not map N into N; carries the offending kernel vector."""

    def __init__(self, message, vector, residual):
        super().__init__(message)
        self.vector = vector
        self.residual = residual


class SeparationError(PreconditionError):
    """The exponents lambda_n are not separated by more than delta."""

    def __init__(self, message, pair, gap):
        super().__init__(message)
        self.pair = pair
        self.gap = gap


def _entries(M):
    return M.entries if isinstance(M, LinearMap) else np.asarray(M)


def _kernel(bundle):
    return kernel_basis(bundle.S, KERNEL_RTOL)


@dataclass(frozen=True, eq=False)
class InvarianceReport:
    holds: bool
    worst_residual: float
    worst_vector: np.ndarray | None
    residuals: np.ndarray


def check_invariance(A, N, tol=DEFAULT_TOL):
    """Whether ``A(N)`` lies in N, measured as ``||(I - Pi_N) A v||`` over the basis.

    The inclusion holds when the worst residual is at most ``tol * ||A||``.
    """
    a = _entries(A)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"A must be square, got shape {a.shape}")
    if a.shape[0] != N.ambient_dim:
        raise ShapeError(f"A acts on dim {a.shape[0]} but N sits in dim {N.ambient_dim}")
    if N.dim == 0:
        return InvarianceReport(True, 0.0, None, np.zeros(0))
    K = N.vectors
    off = a @ K - K @ (K.conj().T @ (a @ K))
    res = np.linalg.norm(off, axis=0)
    k = int(np.argmax(res))
    holds = bool(res[k] <= tol * max(opnorm(a), 1.0))
    return InvarianceReport(holds, float(res[k]), K[:, k].copy(), res)


@dataclass(frozen=True, eq=False)
class IntertwineResult:
    partner: LinearMap
    residual: float
    decomposition: tuple | None = None
    checks: dict = field(default_factory=dict)


def _intertwining_residual(S, A, B):
    return opnorm(S @ A - B @ S)


def push_forward_B(A, bundle, tol=DEFAULT_TOL, seed=0):
    """The unique B on X with ``S A = B S``, namely ``B = S A Rt``.

    Uniqueness is exercised by pushing a random x through two different
    preimages ``Rt x`` and ``Rt x + k`` with k in N.
    """
    a = _entries(A)
    S, Rt = bundle.S.entries, bundle.Rt.entries
    if a.shape != (S.shape[1], S.shape[1]):
        raise ShapeError(f"A must act on X_d (dim {S.shape[1]}), got shape {a.shape}")
    N = _kernel(bundle)
    inv = check_invariance(a, N, tol)
    if not inv.holds:
        raise InvarianceError(
            f"A does not preserve N: ||(I - Pi_N) A v|| = {inv.worst_residual:.3g}",
            inv.worst_vector, inv.worst_residual)
    B = S @ a @ Rt
    residual = _intertwining_residual(S, a, B)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(S.shape[0])
    if np.iscomplexobj(S):
        x = x + 1j * rng.standard_normal(S.shape[0])
    a1 = Rt @ x
    a2 = a1
    if N.dim:
        c = rng.standard_normal(N.dim)
        a2 = a1 + N.vectors @ c
    uniq = max(np.linalg.norm(S @ a @ a1 - S @ a @ a2), np.linalg.norm(B @ x - S @ a @ a2))
    preimage = np.linalg.norm(S @ a2 - x)
    dom = bundle.S.codomain
    return IntertwineResult(LinearMap(B, dom, dom), residual,
                            checks={"uniqueness": float(uniq), "preimage": float(preimage),
                                    "invariance": inv})


def random_in_kernel(bundle, seed=0):
    """A rank-one ``A0 = d f^T`` with d a random direction in N."""
    S = bundle.S.entries
    n = S.shape[1]
    N = _kernel(bundle)
    rng = np.random.default_rng(seed)
    if N.dim == 0:
        return np.zeros((n, n), dtype=S.dtype)
    d = N.vectors @ rng.standard_normal(N.dim)
    f = rng.standard_normal(n)
    return np.outer(d, f)


def lift_A(B, bundle, A0=None, seed=0, tol=DEFAULT_TOL):
    """An operator A on X_d with ``S A = B S``: ``A = Rt B S + A0``.

    Parameters
    ----------
    B : LinearMap or array_like
        Operator on X.
    bundle : OperatorBundle
        Operators of a reconstructing pair.
    A0 : None, 'zero', 'random-in-N', LinearMap or array_like
        Free part; its range must lie in N.
    seed : int
        Seed for ``'random-in-N'``.
    """
    S, Rt = bundle.S.entries, bundle.Rt.entries
    b = _entries(B)
    m, n = S.shape
    if b.shape != (m, m):
        raise ShapeError(f"B must act on X (dim {m}), got shape {b.shape}")
    if A0 is None or (isinstance(A0, str) and A0 == "zero"):
        a0 = np.zeros((n, n), dtype=np.result_type(S, b))
    elif isinstance(A0, str):
        if A0 != "random-in-N":
            raise ValueError(f"unknown A0 choice {A0!r}")
        a0 = random_in_kernel(bundle, seed)
    else:
        a0 = _entries(A0)
        if a0.shape != (n, n):
            raise ShapeError(f"A0 must act on X_d (dim {n}), got shape {a0.shape}")
    leak = opnorm(S @ a0)
    if leak > tol * max(1.0, opnorm(a0)):
        raise PreconditionError(f"range of A0 leaves N: ||S A0|| = {leak:.3g}")
    base = Rt @ b @ S
    a = base + a0
    dom = bundle.S.domain
    return IntertwineResult(LinearMap(a, dom, dom), _intertwining_residual(S, a, b),
                            decomposition=(LinearMap(base, dom, dom), LinearMap(a0, dom, dom)),
                            checks={"range_of_A0": leak})


@dataclass(frozen=True, eq=False)
class CompletenessReport:
    ok: bool
    intertwining_residual: float
    range_residual: float
    formula_residual: float | None
    A0: np.ndarray


def completeness_check(A, B, bundle, tol=DEFAULT_TOL):
    """Check that an intertwining A splits as ``Rt B S + A0`` with A0 into N.

    When A preserves N the free part also matches ``A P + P A - P A P``
    where ``P = I - Rt S``.
    """
    S, Rt = bundle.S.entries, bundle.Rt.entries
    a, b = _entries(A), _entries(B)
    inter = _intertwining_residual(S, a, b)
    a0 = a - Rt @ b @ S
    rng_res = opnorm(S @ a0)
    formula = None
    if check_invariance(a, _kernel(bundle), tol).holds:
        P = projector_pair(bundle.S, bundle.Rt, max(tol, 1e-8)).P.entries
        formula = opnorm(a0 - (a @ P + P @ a - P @ a @ P))
    scale = max(1.0, opnorm(a))
    ok = inter <= tol * scale and rng_res <= tol * scale
    if formula is not None:
        ok = ok and formula <= tol * scale
    return CompletenessReport(bool(ok), inter, rng_res, formula, a0)


def check_separated(lambdas, delta):
    """Raise SeparationError unless ``|l_i - l_j| > delta > 0`` for all i != j."""
    lam = np.asarray(lambdas, dtype=float)
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if lam.size < 2:
        return
    gaps = np.abs(lam[:, None] - lam[None, :]) + np.diag(np.full(lam.size, np.inf))
    i, j = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    if gaps[i, j] <= delta:
        i, j = sorted((int(i), int(j)))
        raise SeparationError(
            f"lambda[{i}] = {lam[i]:g} and lambda[{j}] = {lam[j]:g} are not separated by "
            f"delta = {delta:g}", (i, j), float(gaps[i, j]))


@dataclass(frozen=True)
class DiagonalGroup:
    """``t -> diag(exp(i lambda_n t))`` on complex coordinate space."""

    lambdas: tuple
    delta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if self.delta is not None:
            check_separated(self.lambdas, self.delta)

    @property
    def separated(self):
        return self.delta is not None

    def at(self, t, p=2.0):
        return build_diagonal_group(self.lambdas, t, NormedSpace(len(self.lambdas), p,
                                                                 Scalar.COMPLEX))


def build_diagonal_group(lambdas, t, space=None):
    """The diagonal map with entries ``exp(i lambda_n t)``."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ShapeError("lambdas must be a non-empty 1-d sequence")
    if space is None:
        space = NormedSpace(lam.size, 2.0, Scalar.COMPLEX)
    if space.dim != lam.size:
        raise ShapeError(f"{lam.size} exponents for a space of dim {space.dim}")
    if space.scalar is not Scalar.COMPLEX:
        raise DomainError("the diagonal group needs complex scalars")
    return LinearMap(np.diag(np.exp(1j * lam * t)), space, space)


@dataclass(frozen=True, eq=False)
class GroupReport:
    passed: bool
    identity_residual: float
    law_residual: float
    isometry_residuals: dict
    uniform_bound: float


def group_axioms_check(lambdas, t_samples, tol=1e-12, p_values=(1.0, 2.0, np.inf), seed=0,
                       samples=8):
    """Check ``T_0 = I``, ``T_{t+s} = T_t T_s`` and ``||T_t x||_p = ||x||_p``."""
    lam = np.asarray(lambdas, dtype=float)
    n = lam.size
    ts = [float(t) for t in t_samples]

    def T(t):
        return build_diagonal_group(lam, t).entries

    identity = float(np.max(np.abs(T(0.0) - np.eye(n))))
    law = 0.0
    for t in ts:
        for s in ts:
            law = max(law, float(np.max(np.abs(T(t + s) - T(t) @ T(s)))))
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    iso = {}
    for p in p_values:
        worst = 0.0
        for t in ts:
            for x in xs:
                nx = lp_norm(x, p)
                worst = max(worst, abs(lp_norm(T(t) @ x, p) - nx) / nx)
        iso[float(p)] = worst
    bound = max((opnorm(T(t)) for t in ts), default=1.0)
    passed = (identity <= tol and law <= tol and all(v <= tol for v in iso.values())
              and bound <= 1 + tol)
    return GroupReport(bool(passed), identity, law, iso, bound)


def lifted_diagonal(bundle, lambdas, t):
    """The lift ``V_t = Rt T_t S + P D_t`` of a would-be group to X_d.

    ``D_t = diag(exp(i lambda_n t))`` and ``P = I - Rt S``. A group with
    ``T_t x_n = exp(i lambda_n t) x_n`` satisfies ``T_t S = S D_t``, which is
    used in place of T_t; the free part ``P D_t`` has range in N. The result
    equals ``D_t`` up to rounding.
    """
    S, Rt = bundle.S.entries, bundle.Rt.entries
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (S.shape[1],):
        raise ShapeError(f"expected {S.shape[1]} exponents, got {lam.size}")
    D = np.diag(np.exp(1j * lam * t))
    P = projector_pair(bundle.S, bundle.Rt).P.entries
    return Rt @ (S @ D) + P @ D


@dataclass(frozen=True, eq=False)
class ObstructionVerdict:
    verdict: str
    kernel_dim: int
    t: float
    evidence: np.ndarray
    details: dict = field(default_factory=dict)

    @property
    def obstructed(self):
        return self.verdict == "obstructed"


def diagonal_group_obstruction(pair, lambdas, delta, tol=DEFAULT_TOL, t=1.0):
    """Decide whether ``T_t x_n = exp(i lambda_n t) x_n`` can define a group on X.

    With N = Ker(S) nonzero the group is obstructed: the lifted operators
    act on X_d as ``V_t = diag(exp(i lambda_n t))`` and would have to keep
    N invariant, but a diagonal map with distinct eigenvalues only keeps
    coordinate subspaces invariant, and a coordinate vector in N would mean
    some ``x_k = 0``. ``evidence`` holds ``||(I - Pi_N) V_t v||`` per kernel
    vector. With N = {0} the family is a basis of its span and
    ``T_t = S V_t S^+`` there, extended by the identity on the complement.

    Only the co-frame enters, so `pair` may also be a co-frame FrameFamily.
    """
    family = pair.coframe if isinstance(pair, CrossFramePair) else pair
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (family.n,):
        raise ShapeError(f"expected {family.n} exponents, got {lam.size}")
    check_separated(lam, delta)
    synthesis = family.synthesis()
    S = synthesis.entries.astype(complex)
    N = kernel_basis(synthesis, KERNEL_RTOL)
    V = np.diag(np.exp(1j * lam * t))

    if N.dim == 0:
        # independent family: act diagonally on its span, identity off it
        Sp = np.linalg.pinv(S)
        T = S @ V @ Sp + (np.eye(S.shape[0]) - S @ Sp)
        eig = max(np.linalg.norm(T @ xn - np.exp(1j * ln * t) * xn)
                  for xn, ln in zip(family.vectors.astype(complex), lam))
        lifted = Sp @ T @ S
        return ObstructionVerdict("group exists", 0, float(t), np.zeros(0),
                                  {"eigen_residual": float(eig),
                                   "lift_residual": float(np.max(np.abs(lifted - V)))})

    Pi = N.projector()
    coords = [k for k in range(family.n) if N.contains(np.eye(family.n)[k], tol)]
    if coords:
        # S e_k = x_k = 0 is excluded by FrameFamily
        raise PreconditionError(f"coordinate vector e_{coords[0]} lies in N")
    K = N.vectors.astype(complex)
    evidence = np.linalg.norm(V @ K - Pi @ (V @ K), axis=0)
    details = {"kernel": N.vectors}
    if isinstance(pair, CrossFramePair):
        try:
            lifted = lifted_diagonal(build_operators(pair), lam, t)
            details["lift_residual"] = float(np.max(np.abs(lifted - V)))
        except PreconditionError:
            pass
    return ObstructionVerdict("obstructed", N.dim, float(t), evidence, details)

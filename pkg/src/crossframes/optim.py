"""Extremal values of ``||M x||_r`` over the unit sphere of ``||.||_p``.

The minimum over the sphere is a nonconvex problem for general exponents,
so :func:`extremal` runs a seeded multi-start local search on the
scale-invariant ratio ``||M z||_r / ||z||_p``. Every returned value is
attained by its witness, which makes min-mode values upper bounds on the
true minimum and max-mode values lower bounds on the true maximum.
At ``p = r = 2`` :func:`svd_oracle` gives the exact answer.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar

from .linmap import LinearMap
from .spaces import DomainError, check_exponent, lp_norm

DEFAULT_RESTARTS = 64
# l1 facets are enumerated up to this many coordinates (2**(n-1) convex solves)
ENUM_MAX_DIM = 8
_VERTEX_MAX_DIM = 16
POSITIVITY_RTOL = 1e-8

_MODES = ("min", "max")


@dataclass(frozen=True, eq=False)
class ExtremalResult:
    value: float
    witness: np.ndarray
    mode: str
    restarts_used: int
    seed: int | None
    p_in: float = 2.0
    p_out: float = 2.0
    method: str = "multistart"
    history: tuple = field(default=(), repr=False)


def _entries(M):
    return M.entries if isinstance(M, LinearMap) else np.asarray(M)


def _unit_witness(z, M, p_in, p_out, mode, **kw):
    z = np.asarray(z)
    nz = lp_norm(z, p_in)
    w = z / nz
    # exact renormalisation of the rounding left by the division
    w = w / lp_norm(w, p_in)
    return ExtremalResult(lp_norm(M @ w, p_out), w, mode, p_in=p_in, p_out=p_out, **kw)


def _norm_grad(u, p):
    """A (sub)gradient of ``||u||_p`` as a complex/real array like `u`."""
    a = np.abs(u)
    nrm = lp_norm(u, p)
    if nrm == 0:
        return np.zeros_like(u)
    phase = np.zeros_like(u)
    nz = a > 0
    phase[nz] = u[nz] / a[nz]
    if np.isinf(p):
        g = np.zeros_like(u)
        k = int(np.argmax(a))
        g[k] = phase[k]
        return g
    if p == 1:
        return phase
    return (a / nrm) ** (p - 1) * phase


class _Ratio:
    """``z -> sign * ||M z||_r / ||z||_p`` on a real parameter vector."""

    def __init__(self, a, p_in, p_out, sign):
        self.a = a
        self.p_in = p_in
        self.p_out = p_out
        self.sign = sign
        self.complex = np.iscomplexobj(a)
        self.n = a.shape[1]

    def unpack(self, x):
        if self.complex:
            return x[: self.n] + 1j * x[self.n:]
        return x

    def pack(self, z):
        if self.complex:
            return np.concatenate([z.real, z.imag])
        return np.asarray(z, dtype=float)

    def value(self, x):
        z = self.unpack(x)
        den = lp_norm(z, self.p_in)
        if den == 0:
            return np.inf if self.sign > 0 else 0.0
        return self.sign * lp_norm(self.a @ z, self.p_out) / den

    def value_and_grad(self, x):
        z = self.unpack(x)
        u = self.a @ z
        num = lp_norm(u, self.p_out)
        den = lp_norm(z, self.p_in)
        if den == 0:
            return (np.inf if self.sign > 0 else 0.0), np.zeros_like(x)
        g = (self.a.conj().T @ _norm_grad(u, self.p_out)) / den
        g = g - num * _norm_grad(z, self.p_in) / den**2
        return self.sign * num / den, self.sign * self.pack(g)


def _smooth(p):
    return 1 < p < np.inf


def _local_search(ratio, x0, nonsmooth):
    res = minimize(ratio.value_and_grad, x0, jac=True, method="L-BFGS-B",
                   options={"maxiter": 3000, "ftol": 1e-15, "gtol": 1e-13})
    x = res.x
    if nonsmooth:
        res = minimize(ratio.value, x, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 200 * x.size,
                                "adaptive": True})
        if res.fun < ratio.value(x):
            x = res.x
        x = _coordinate_descent(ratio, x)
    return x


def _coordinate_descent(ratio, x, sweeps=20):
    """Greedy one-dimensional searches along each coordinate axis."""
    x = x / max(np.max(np.abs(x)), np.finfo(float).tiny)
    f = ratio.value(x)
    for _ in range(sweeps):
        f_start = f
        for j in range(x.size):
            step = np.zeros_like(x)
            step[j] = 1.0

            def along(t, x=x, step=step):
                return ratio.value(x + t * step)

            r = minimize_scalar(along, bracket=(-0.5, 0.5), options={"xtol": 1e-12})
            if r.fun < f:
                x = x + r.x * step
                x = x / np.max(np.abs(x))
                f = ratio.value(x)
        if f_start - f <= 1e-15 * max(1.0, abs(f)):
            break
    return x


def _min_norm_over_box(a, p_out, j):
    """min ||a x||_r subject to x_j = 1 and |x_i| <= 1 (one face of the cube)."""
    rows, n = a.shape
    bounds = [(-1.0, 1.0)] * n
    bounds[j] = (1.0, 1.0)
    if p_out == 1 or np.isinf(p_out):
        return _lp_min_norm(a, p_out, bounds, None)
    res = minimize(lambda x: _norm_and_grad(a, x, p_out), np.eye(n)[j], jac=True,
                   method="L-BFGS-B", bounds=bounds,
                   options={"maxiter": 3000, "ftol": 1e-15, "gtol": 1e-13})
    return res.x


def _min_norm_over_simplex(a, p_out):
    """min ||a w||_r subject to w >= 0 and sum(w) = 1."""
    n = a.shape[1]
    bounds = [(0.0, 1.0)] * n
    if p_out == 1 or np.isinf(p_out):
        return _lp_min_norm(a, p_out, bounds, np.ones(n))
    res = minimize(lambda w: _norm_and_grad(a, w, p_out), np.full(n, 1.0 / n), jac=True,
                   method="SLSQP", bounds=bounds,
                   constraints=[{"type": "eq", "fun": lambda w: np.sum(w) - 1.0,
                                 "jac": lambda w: np.ones_like(w)}],
                   options={"maxiter": 500, "ftol": 1e-15})
    w = np.clip(res.x, 0.0, None)
    return w / w.sum()


def _norm_and_grad(a, x, p):
    u = a @ x
    return lp_norm(u, p), a.T @ _norm_grad(u, p)


def _lp_min_norm(a, p_out, bounds, simplex_row):
    """Linear program for min ||a x||_r with r in {1, inf}."""
    rows, n = a.shape
    k = rows if p_out == 1 else 1
    # variables (x, t); |a x|_i <= t_i (r = 1) or <= t (r = inf)
    T = np.eye(rows) if p_out == 1 else np.ones((rows, 1))
    A_ub = np.block([[a, -T], [-a, -T]])
    b_ub = np.zeros(2 * rows)
    c = np.concatenate([np.zeros(n), np.ones(k)])
    A_eq = b_eq = None
    if simplex_row is not None:
        A_eq = np.concatenate([simplex_row, np.zeros(k)])[None, :]
        b_eq = [1.0]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=list(bounds) + [(0, None)] * k, method="highs")
    return res.x[:n]


def _face_candidates(a, p_in, p_out, mode, enum_max_dim):
    """Exact candidates on the faces of the l1 or l-inf sphere (real maps only).

    Max mode: the maximum of a convex function over a polytope sits at a
    vertex, so enumerating vertices is exact. Min mode: each face of the
    sphere carries a convex problem solved to optimality.
    """
    if np.iscomplexobj(a) or _smooth(p_in):
        return []
    n = a.shape[1]
    out = []
    if mode == "max":
        if p_in == 1:
            out.extend(np.eye(n))
        elif n <= _VERTEX_MAX_DIM:
            signs = np.array(list(itertools.product((1.0, -1.0), repeat=n - 1)))
            vertices = np.hstack([np.ones((len(signs), 1)), signs])
            vals = [lp_norm(u, p_out) for u in vertices @ a.T]
            out.append(vertices[int(np.argmax(vals))])
    elif np.isinf(p_in):
        out.extend(_min_norm_over_box(a, p_out, j) for j in range(n))
    elif n <= enum_max_dim:
        for tail in itertools.product((1.0, -1.0), repeat=n - 1):
            s = np.array((1.0,) + tail)
            out.append(s * _min_norm_over_simplex(a * s, p_out))
    return out


def _restart_rng(seed, k):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))


def extremal(M, p_in=2.0, p_out=2.0, mode="min", restarts=DEFAULT_RESTARTS, seed=0,
             enum_max_dim=ENUM_MAX_DIM, workers=1):
    """Minimize or maximize ``||M x||_r`` subject to ``||x||_p = 1``.

    Parameters
    ----------
    M : LinearMap or array_like
        The map; complex entries make the search run over complex vectors.
    p_in, p_out : float
        Exponents of the domain and codomain norms, in ``[1, inf]``.
    mode : {'min', 'max'}
    restarts : int
        Number of random starting points, at least 1.
    seed : int
        Master seed. Restart ``k`` draws from its own child stream, so the
        first ``k`` restarts are the same for every ``restarts >= k``.
    enum_max_dim : int
        Dimension up to which the ``2**(n-1)`` facets of the l1 sphere are
        solved exactly in min mode (real maps). Faces of the l-inf sphere
        are always solved; max-mode vertices are enumerated up to 16.
    workers : int
        Thread count for independent restarts. The result does not depend on it.

    Returns
    -------
    ExtremalResult
        Best value found (ties go to the lowest candidate index) and its
        unit-norm witness.
    """
    p_in = check_exponent(p_in)
    p_out = check_exponent(p_out)
    if mode not in _MODES:
        raise DomainError(f"mode must be 'min' or 'max', got {mode!r}")
    if restarts < 1:
        raise DomainError("restarts must be at least 1")
    a = _entries(M)
    n = a.shape[1]
    is_complex = np.iscomplexobj(a)
    meta = dict(restarts_used=int(restarts), seed=seed)

    if not np.any(a):
        e = np.zeros(n, dtype=a.dtype)
        e[0] = 1
        return _unit_witness(e, a, p_in, p_out, mode, method="zero-map", **meta)

    sign = 1.0 if mode == "min" else -1.0
    ratio = _Ratio(a, p_in, p_out, sign)
    nonsmooth = not (_smooth(p_in) and _smooth(p_out))

    candidates = [("face", s) for s in _face_candidates(a, p_in, p_out, mode, enum_max_dim)]
    candidates += [("random", k) for k in range(restarts)]

    def run(item):
        kind, payload = item
        if kind == "face":
            x = ratio.pack(np.asarray(payload, dtype=a.dtype))
            return x, ratio.value(x)
        rng = _restart_rng(seed, payload)
        x0 = rng.standard_normal(2 * n if is_complex else n)
        x = _local_search(ratio, x0, nonsmooth)
        # keep the start itself when the search wandered off to a worse point
        if ratio.value(x0) < ratio.value(x):
            x = x0
        return x, ratio.value(x)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, candidates))
    else:
        outcomes = [run(c) for c in candidates]

    best = min(range(len(outcomes)), key=lambda i: (outcomes[i][1], i))
    history = tuple(sign * f for _, f in outcomes)
    return _unit_witness(ratio.unpack(outcomes[best][0]), a, p_in, p_out, mode,
                         history=history, **meta)


def svd_oracle(M, mode="min"):
    """Exact extreme singular value of `M` with a singular-vector witness.

    In min mode a wide map (more columns than rows) has value 0.
    """
    if mode not in _MODES:
        raise DomainError(f"mode must be 'min' or 'max', got {mode!r}")
    a = _entries(M)
    rows, cols = a.shape
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if mode == "max":
        value, witness = s[0], vh[0].conj()
    elif cols > rows:
        value, witness = 0.0, vh[-1].conj()
    else:
        value, witness = s[cols - 1], vh[cols - 1].conj()
    return ExtremalResult(float(value), witness, mode, restarts_used=0, seed=None,
                          method="svd")


def is_positive(lower, scale):
    """Whether a min-mode value counts as a positive lower bound."""
    return bool(scale > 0 and lower > POSITIVITY_RTOL * scale)

import numpy as np
import pytest

from crossframes.linmap import LinearMap
from crossframes.optim import extremal, is_positive, svd_oracle
from crossframes.spaces import DomainError, lp_norm

S3 = np.sqrt(3) / 2
MERCEDES = np.array([[1.0, 0.0], [-0.5, S3], [-0.5, -S3]])


def _check_witness(res, a):
    assert lp_norm(res.witness, res.p_in) == pytest.approx(1, abs=1e-10)
    assert lp_norm(a @ res.witness, res.p_out) == pytest.approx(res.value,
                                                                abs=1e-8 * max(1, res.value))


def test_examples():
    q, _ = np.linalg.qr(np.random.default_rng(3).standard_normal((3, 3)))
    assert extremal(q, 2, 2, "min", 8).value == pytest.approx(1, abs=1e-9)
    assert extremal(MERCEDES, 2, 2, "min", 8).value == pytest.approx(np.sqrt(1.5), abs=1e-9)
    res = extremal(np.diag([1.0, 3.0]), 2, 2, "max", 8)
    assert res.value == pytest.approx(3)
    assert np.allclose(np.abs(res.witness), [0, 1], atol=1e-6)


def test_svd_oracle_examples():
    for mode in ("min", "max"):
        assert svd_oracle(np.eye(3), mode).value == pytest.approx(1)
        assert svd_oracle(MERCEDES, mode).value == pytest.approx(np.sqrt(1.5))
    rank1 = np.outer([1.0, 2.0, 3.0], [1.0, -1.0])
    assert svd_oracle(rank1, "min").value == pytest.approx(0, abs=1e-12)
    assert svd_oracle(np.ones((2, 3)), "min").value == 0


def test_mercedes_frame_operator_oracle():
    # oracle: eigenvalues of sum x_n x_n^T, independent of any SVD
    ev = np.linalg.eigvalsh(MERCEDES.T @ MERCEDES)
    assert np.allclose(ev, 1.5)
    assert svd_oracle(MERCEDES, "min").value ** 2 == pytest.approx(ev.min())


def test_zero_map_and_domain_errors():
    res = extremal(np.zeros((2, 3)), 2, 2, "max", 2)
    assert res.value == 0 and lp_norm(res.witness, 2) == pytest.approx(1)
    with pytest.raises(DomainError):
        extremal(np.eye(2), 0.5, 2)
    with pytest.raises(DomainError):
        extremal(np.eye(2), 2, 2, "median")
    with pytest.raises(DomainError):
        extremal(np.eye(2), 2, 2, "min", restarts=0)


@pytest.mark.parametrize("seed", range(12))
def test_agrees_with_svd(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 9, 2)
    a = rng.standard_normal((m, n))
    if seed % 3 == 0:
        a = a + 1j * rng.standard_normal((m, n))
    smax = svd_oracle(a, "max").value
    for mode in ("min", "max"):
        res = extremal(LinearMap.from_array(a), 2, 2, mode, restarts=16, seed=seed)
        assert abs(res.value - svd_oracle(a, mode).value) <= 1e-6 * smax
        _check_witness(res, a)


# closed forms for induced norms, independent of the search
@pytest.mark.parametrize("seed", range(5))
def test_induced_norm_closed_forms(seed):
    rng = np.random.default_rng(100 + seed)
    a = rng.standard_normal((4, 5))
    assert extremal(a, 1, 1, "max", 4, seed).value == pytest.approx(np.abs(a).sum(0).max())
    assert extremal(a, np.inf, np.inf, "max", 4, seed).value == pytest.approx(
        np.abs(a).sum(1).max())
    assert extremal(a, 2, np.inf, "max", 8, seed).value == pytest.approx(
        np.linalg.norm(a, axis=1).max(), rel=1e-7)
    assert extremal(a, 1, 2, "max", 4, seed).value == pytest.approx(
        np.linalg.norm(a, axis=0).max())


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("p", [1.0, np.inf])
def test_min_over_l1_and_linf_spheres_matches_inverse_norm(seed, p):
    # min ||a x||_p / ||x||_p = 1 / ||a^-1||_p for invertible a
    rng = np.random.default_rng(200 + seed)
    a = rng.standard_normal((6, 6))
    axis = 0 if p == 1 else 1
    oracle = 1 / np.abs(np.linalg.inv(a)).sum(axis).max()
    res = extremal(a, p, p, "min", 4, seed)
    assert res.value == pytest.approx(oracle, rel=1e-9)
    _check_witness(res, a)


def _grid_oracle(a, p, r, k=200001):
    th = np.linspace(0, np.pi, k)
    z = np.stack([np.cos(th), np.sin(th)])
    num = np.array([lp_norm(c, r) for c in (a @ z).T])
    den = np.array([lp_norm(c, p) for c in z.T])
    ratio = num / den
    return ratio.min(), ratio.max()


@pytest.mark.parametrize("p, r", [(3.0, 1.5), (1.0, 3.0), (np.inf, 1.0), (1.5, np.inf)])
def test_two_dimensional_grid_oracle(p, r):
    a = np.array([[2.0, -1.0], [0.5, 1.5], [1.0, 1.0]])
    # the grid only sees sampled directions: it over-estimates the minimum and
    # under-estimates the maximum by at most its resolution
    lo, hi = _grid_oracle(a, p, r)
    got_lo = extremal(a, p, r, "min", 16).value
    got_hi = extremal(a, p, r, "max", 16).value
    assert lo * (1 - 1e-5) <= got_lo <= lo * (1 + 1e-12)
    assert hi * (1 - 1e-12) <= got_hi <= hi * (1 + 1e-5)


@pytest.mark.parametrize("mode", ["min", "max"])
def test_scaling(mode, rng):
    a = rng.standard_normal((4, 3))
    c = -2.5
    base = extremal(a, 3, 1.5, mode, 8, seed=1).value
    assert extremal(c * a, 3, 1.5, mode, 8, seed=1).value == pytest.approx(abs(c) * base,
                                                                           rel=1e-6)


@pytest.mark.parametrize("mode", ["min", "max"])
def test_more_restarts_never_worse(mode, rng):
    a = rng.standard_normal((5, 5))
    values = [extremal(a, 1.5, 4, mode, k, seed=9).value for k in (1, 2, 4, 8)]
    diffs = np.diff(values)
    assert np.all(diffs <= 0) if mode == "min" else np.all(diffs >= 0)


def test_deterministic_and_worker_independent(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    r1 = extremal(a, 3, 3, "min", 6, seed=5)
    r2 = extremal(a, 3, 3, "min", 6, seed=5)
    r3 = extremal(a, 3, 3, "min", 6, seed=5, workers=3)
    assert r1.value == r2.value == r3.value
    assert np.array_equal(r1.witness, r3.witness)


def test_one_sided_bounds(rng):
    # any feasible point bounds the optimum from the appropriate side
    a = rng.standard_normal((3, 4))
    lo = extremal(a, 1.5, 3, "min", 8).value
    hi = extremal(a, 1.5, 3, "max", 8).value
    for z in rng.standard_normal((500, 4)):
        v = lp_norm(a @ z, 3) / lp_norm(z, 1.5)
        assert lo <= v * (1 + 1e-12) and v <= hi * (1 + 1e-12)


def test_is_positive():
    assert is_positive(1e-3, 1.0)
    assert not is_positive(1e-9, 1.0)
    assert not is_positive(0.0, 0.0)

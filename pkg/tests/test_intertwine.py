import numpy as np
import pytest

from crossframes.crossframe import CrossFramePair, build_operators, random_cross_frame
from crossframes.frames import COFRAME, FrameFamily
from crossframes.intertwine import (DiagonalGroup, InvarianceError, SeparationError,
                                    build_diagonal_group, check_invariance, check_separated,
                                    completeness_check, diagonal_group_obstruction,
                                    group_axioms_check, lift_A, push_forward_B,
                                    lifted_diagonal, random_in_kernel)
from crossframes.linmap import PreconditionError, kernel_basis, projector_pair
from crossframes.spaces import DomainError, NormedSpace, Scalar, ShapeError

ONES3 = np.ones((3, 3)) / 3


@pytest.fixture
def mb(mercedes_pair):
    return build_operators(mercedes_pair)


def preserving(A, N):
    """Project a random A onto the maps keeping N invariant."""
    Pi = N.projector()
    return A - (np.eye(A.shape[0]) - Pi) @ A @ Pi


def test_check_invariance_examples(mb):
    N = kernel_basis(mb.S)
    assert N.dim == 1
    assert check_invariance(np.eye(3), N).holds
    assert check_invariance(ONES3, N).holds
    rep = check_invariance(np.diag([1.0, 2.0, 3.0]), N)
    assert not rep.holds
    # (1,2,3) minus its mean direction: |(-1, 0, 1)| = sqrt 2, scaled by |v| = 1/sqrt 3 basis
    assert rep.worst_residual == pytest.approx(np.sqrt(2 / 3))


def test_check_invariance_shape(mb):
    with pytest.raises(ShapeError):
        check_invariance(np.eye(2), kernel_basis(mb.S))


def test_push_forward_examples(mb):
    res = push_forward_B(np.eye(3), mb)
    assert np.allclose(res.partner.entries, np.eye(2), atol=1e-15)
    res = push_forward_B(ONES3, mb)
    assert np.allclose(res.partner.entries, 0, atol=1e-15)
    P = projector_pair(mb.S, mb.Rt).P.entries
    assert np.allclose(P, ONES3, atol=1e-15)
    res = push_forward_B(np.eye(3) - P, mb)
    assert np.allclose(res.partner.entries, np.eye(2), atol=1e-15)
    assert res.residual <= 1e-12


def test_push_forward_rejects_violation(mb):
    with pytest.raises(InvarianceError) as err:
        push_forward_B(np.diag([1.0, 2.0, 3.0]), mb)
    v = err.value.vector
    assert np.allclose(np.abs(v), 1 / np.sqrt(3))
    assert err.value.residual > 0.1


@pytest.mark.parametrize("seed", range(10))
def test_push_forward_iff_invariant(seed):
    rng = np.random.default_rng(seed)
    pair = random_cross_frame(3, 6, rng)
    ops = build_operators(pair)
    N = kernel_basis(ops.S)
    A = rng.standard_normal((6, 6))
    good = preserving(A, N)
    res = push_forward_B(good, ops, seed=seed)
    scale = max(1, np.linalg.norm(good, 2))
    assert res.residual <= 1e-10 * scale
    assert res.checks["uniqueness"] <= 1e-10 * scale
    assert res.checks["preimage"] <= 1e-10
    # a generic A breaks invariance
    assert not check_invariance(A, N).holds
    with pytest.raises(InvarianceError):
        push_forward_B(A, ops)


def test_lift_examples(mb):
    P = projector_pair(mb.S, mb.Rt).P.entries
    res = lift_A(np.eye(2), mb, "zero")
    assert np.allclose(res.partner.entries, np.eye(3) - P, atol=1e-15)
    assert res.residual <= 1e-14
    res = lift_A(np.zeros((2, 2)), mb, P)
    assert np.allclose(res.partner.entries, P, atol=1e-15)
    assert res.residual <= 1e-14
    B = np.random.default_rng(0).standard_normal((2, 2))
    res = lift_A(B, mb, "random-in-N", seed=42)
    assert res.residual <= 1e-10
    base, a0 = res.decomposition
    assert np.linalg.norm(mb.S.entries @ a0.entries) <= 1e-12
    # oracle: direct multiplication
    A = res.partner.entries
    assert np.allclose(mb.S.entries @ A, B @ mb.S.entries, atol=1e-12)


def test_lift_rejects_escaping_A0(mb):
    with pytest.raises(PreconditionError):
        lift_A(np.eye(2), mb, np.eye(3))
    with pytest.raises(ValueError):
        lift_A(np.eye(2), mb, "bogus")


def test_random_in_kernel_is_seeded(mb):
    a = random_in_kernel(mb, 3)
    assert np.array_equal(a, random_in_kernel(mb, 3))
    assert not np.array_equal(a, random_in_kernel(mb, 4))
    assert np.linalg.matrix_rank(a) == 1


def test_completeness_examples(mb):
    P = projector_pair(mb.S, mb.Rt).P.entries
    Q = np.eye(3) - P
    rep = completeness_check(Q, np.eye(2), mb)
    assert rep.ok and np.allclose(rep.A0, 0, atol=1e-15)
    rep = completeness_check(P, np.zeros((2, 2)), mb)
    assert rep.ok and np.allclose(rep.A0, P, atol=1e-15)
    A = Q + P @ np.diag([1.0, 2.0, 3.0])
    rep = completeness_check(A, np.eye(2), mb)
    assert rep.range_residual <= 1e-10 and rep.intertwining_residual <= 1e-10
    assert rep.ok


@pytest.mark.parametrize("seed", range(10))
def test_lift_completeness_round_trip(seed):
    rng = np.random.default_rng(seed)
    pair = random_cross_frame(2, 5, rng, scalar=Scalar.COMPLEX if seed % 2 else Scalar.REAL)
    ops = build_operators(pair)
    B = rng.standard_normal((2, 2))
    res = lift_A(B, ops, "random-in-N", seed=seed)
    assert res.residual <= 1e-10 * max(1, np.linalg.norm(res.partner.entries, 2))
    rep = completeness_check(res.partner, B, ops)
    assert rep.intertwining_residual <= 1e-10 and rep.range_residual <= 1e-10
    assert np.allclose(rep.A0, res.decomposition[1].entries, atol=1e-10)


def test_check_separated():
    check_separated([0, 1, 2], 0.5)
    with pytest.raises(SeparationError) as err:
        check_separated([0, 0, 1], 0.5)
    assert err.value.pair == (0, 1)
    with pytest.raises(SeparationError):
        check_separated([0, 0.4], 0.5)
    with pytest.raises(DomainError):
        check_separated([0, 1], 0)


def test_build_diagonal_group_examples():
    assert np.array_equal(build_diagonal_group([1.0, 2.0], 0).entries, np.eye(2))
    T = build_diagonal_group([0, np.pi], 1).entries
    assert np.allclose(T, np.diag([1, -1]), atol=1e-15)
    with pytest.raises(ShapeError):
        build_diagonal_group([0, 1], 1, NormedSpace(3, 2, Scalar.COMPLEX))
    with pytest.raises(DomainError):
        build_diagonal_group([0, 1], 1, NormedSpace(2, 2, Scalar.REAL))


def test_group_law(rng):
    lam = rng.standard_normal(4)
    for t, s in rng.standard_normal((10, 2)) * 3:
        lhs = build_diagonal_group(lam, t + s).entries
        rhs = build_diagonal_group(lam, t).entries @ build_diagonal_group(lam, s).entries
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_group_axioms_examples(rng):
    rep = group_axioms_check([1.0, 2.0], [0, 1, np.pi])
    assert rep.passed and rep.identity_residual == 0
    assert rep.uniform_bound == pytest.approx(1)
    rep = group_axioms_check([1.0, 2.0], [0])
    assert rep.passed and rep.law_residual == 0
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    T = build_diagonal_group([0.3, -1, 5], 2.2).entries
    assert np.linalg.norm(T @ x) == pytest.approx(np.linalg.norm(x), rel=1e-14)


def test_diagonal_group_type():
    g = DiagonalGroup([0, 1], 0.5)
    assert g.separated
    assert np.allclose(g.at(np.pi / 2).entries, np.diag([1, 1j]))
    assert not DiagonalGroup([0, 0]).separated
    with pytest.raises(SeparationError):
        DiagonalGroup([0, 0], 0.5)


def test_obstruction_examples(mercedes_pair, ortho_pair):
    v = diagonal_group_obstruction(mercedes_pair, [0, 1, 2], 0.5)
    assert v.verdict == "obstructed" and v.kernel_dim == 1
    assert v.evidence[0] > 0.1
    # direct evaluation: V_1 (1,1,1) off its mean
    w = np.exp(1j * np.arange(3)) / np.sqrt(3)
    assert v.evidence[0] == pytest.approx(np.linalg.norm(w - w.mean()), rel=1e-12)

    v = diagonal_group_obstruction(ortho_pair, [0, 1], 0.5)
    assert v.verdict == "group exists" and v.kernel_dim == 0
    assert v.details["eigen_residual"] <= 1e-12

    with pytest.raises(SeparationError) as err:
        diagonal_group_obstruction(mercedes_pair, [0, 0, 1], 0.5)
    assert err.value.pair == (0, 1)
    with pytest.raises(ShapeError):
        diagonal_group_obstruction(mercedes_pair, [0, 1], 0.5)


def test_obstruction_accepts_coframe_family(mercedes):
    F = FrameFamily.from_rows(mercedes, side=COFRAME)
    assert diagonal_group_obstruction(F, [0, 1, 2], 0.5).obstructed


@pytest.mark.parametrize("seed", range(8))
def test_obstruction_dichotomy(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 4))
    n = m + int(rng.integers(0, 3))
    x = rng.standard_normal((n, m))
    pair = CrossFramePair.from_arrays(x, x)
    v = diagonal_group_obstruction(pair, np.arange(n, dtype=float), 0.5)
    assert v.verdict in ("obstructed", "group exists")
    assert (v.verdict == "group exists") == (np.linalg.matrix_rank(x) == n)
    if v.obstructed:
        assert np.all(v.evidence > 1e-8)


def test_lifted_diagonal_is_diagonal(mb, mercedes_pair):
    lam = [0.0, 1.0, 2.0]
    V = lifted_diagonal(mb, lam, 0.7)
    assert np.allclose(V, np.diag(np.exp(0.7j * np.array(lam))), atol=1e-14)
    v = diagonal_group_obstruction(mercedes_pair, lam, 0.5)
    assert v.details["lift_residual"] <= 1e-14
    with pytest.raises(ShapeError):
        lifted_diagonal(mb, [0.0, 1.0], 1.0)


def test_independent_but_not_spanning_family():
    x = np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    v = diagonal_group_obstruction(CrossFramePair.from_arrays(x, x), [0.0, 2.0], 0.5, t=0.3)
    assert v.verdict == "group exists"
    assert v.details["eigen_residual"] <= 1e-14 and v.details["lift_residual"] <= 1e-14

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from pypinv import algebra
from pypinv._errors import UndefinedGammaError
from pypinv._random import instance_rng, random_matrix
from pypinv.operators import Dense, Diagonal, DirectSum, adjoint, direct_sum, direct_sum_n, materialize, zero
from pypinv.pinv import gamma, operator_norm, pinv


TOL = 1e-10
SIGMA_RANGE = (0.1, 10.0)
# between rounding noise and the smallest generated singular value
RANK_TOL = 1e-8


def _pair(key: int, min_rank: int = 0) -> tuple[np.ndarray, np.ndarray]:
    rng = instance_rng(31, key)
    mats = []
    for _ in range(2):
        m, n = (int(d) for d in rng.integers(1, 7, size=2))
        r = int(rng.integers(min_rank, min(m, n) + 1))
        mats.append(random_matrix(rng, m, n, r, SIGMA_RANGE))
    return mats[0], mats[1]


def test_abs_op_examples():
    parts = algebra.abs_op(Diagonal([-2, 3]))
    assert isinstance(parts.abs, Diagonal)
    assert np.array_equal(parts.abs.diag, [2, 3])
    assert np.allclose(materialize(algebra.abs_op(zero(2, 3)).abs), np.zeros((3, 3)))
    assert np.allclose(materialize(algebra.abs_op(zero(2, 3)).abs_adj), np.zeros((2, 2)))

    a = random_matrix(instance_rng(1), 5, 3, 2, SIGMA_RANGE)
    parts = algebra.abs_op(a)
    abs_t = materialize(parts.abs)
    abs_t_adj = materialize(parts.abs_adj)
    assert np.allclose(abs_t @ abs_t, a.conj().T @ a, atol=1e-10)
    assert np.allclose(abs_t_adj @ abs_t_adj, a @ a.conj().T, atol=1e-10)
    assert np.allclose(abs_t, abs_t.conj().T)
    assert np.all(np.linalg.eigvalsh(abs_t) >= -1e-10)
    assert algebra.polar_residual(a) <= TOL

def test_pinv_direct_sum_examples():
    block = algebra.pinv_direct_sum(Diagonal([1, 2, 3]), Diagonal([0, 2, 3]))
    assert isinstance(block, DirectSum)
    assert np.allclose(materialize(block), np.diag([1, 1 / 2, 1 / 3, 0, 1 / 2, 1 / 3]))
    assert np.array_equal(materialize(algebra.pinv_direct_sum(zero(2, 1), zero(1, 3))), np.zeros((4, 3)))

    triple = algebra.pinv_direct_sum_n(Diagonal([2]), Dense([[1, 1]]), Diagonal([4]))
    assert np.allclose(materialize(triple), [[0.5, 0, 0], [0, 0.5, 0], [0, 0.5, 0], [0, 0, 0.25]])

def test_weighted_shift_pair_at_full_resolution():
    for n in (3, 8):
        k = np.arange(1, n + 1, dtype=float)
        t1 = Diagonal(k)
        t2 = Diagonal(np.where(k == 1, 0.0, k))
        p1 = materialize(pinv(t1).pinv)
        p2 = materialize(pinv(t2).pinv)
        assert np.max(np.abs(p1 - np.diag(1 / k))) <= 1e-14
        assert np.max(np.abs(p2 - np.diag(np.where(k == 1, 0.0, 1 / k)))) <= 1e-14

        dense = materialize(pinv(materialize(direct_sum(t1, t2))).pinv)
        blockwise = materialize(algebra.pinv_direct_sum(t1, t2))
        assert np.max(np.abs(dense - blockwise)) <= 1e-12
        assert np.max(np.abs(blockwise[:n, :n] - p1)) <= 1e-14

@seed(5)
@settings(max_examples=50, deadline=None)
@given(key=st.integers(min_value=0, max_value=10_000))
def test_blockwise_pseudoinverse(key):
    t1, t2 = _pair(key)
    dense = materialize(pinv(Dense(materialize(direct_sum(t1, t2))), RANK_TOL).pinv)
    blockwise = materialize(algebra.pinv_direct_sum(t1, t2, RANK_TOL))
    assert np.linalg.norm(dense - blockwise) / (1 + np.linalg.norm(dense)) <= TOL
    assert algebra.direct_sum_projector_check(t1, t2, RANK_TOL) <= TOL
    assert algebra.adjoint_direct_sum_check(t1, t2) == 0.0
    assert algebra.pinv_adjoint_direct_sum_check(t1, t2, tol=RANK_TOL) <= TOL
    assert algebra.pinv_adjoint_direct_sum_check(t1, t2, adjoint(Dense(t2)), tol=RANK_TOL) <= TOL
    assert max(algebra.abs_pinv_identities(t1, t2, RANK_TOL)) <= 1e-9

def test_gamma_and_norm_of_direct_sums():
    for key in range(100):
        t1, t2 = _pair(key, min_rank=1)
        expected = min(gamma(t1, RANK_TOL), gamma(t2, RANK_TOL))
        assert abs(algebra.gamma_direct_sum(t1, t2, RANK_TOL) - expected) <= TOL * expected
        assert algebra.gamma_min_check(t1, t2, RANK_TOL) <= TOL

        norm = max(operator_norm(pinv(t1, RANK_TOL).pinv), operator_norm(pinv(t2, RANK_TOL).pinv))
        assert algebra.norm_max_check(t1, t2, RANK_TOL) <= TOL * norm

def test_gamma_with_zero_summand():
    assert algebra.gamma_direct_sum(Diagonal([2, 3]), zero(2, 2)) == pytest.approx(2.0)
    assert algebra.gamma_min_check(zero(1, 1), Diagonal([4, 5])) == pytest.approx(0.0, abs=TOL)
    with pytest.raises(UndefinedGammaError):
        algebra.gamma_direct_sum(zero(2, 2), zero(1, 3))
    with pytest.raises(UndefinedGammaError):
        algebra.gamma_min_check(zero(2, 2), zero(1, 3))

def test_norm_max_with_zero_summands():
    assert algebra.norm_max_check(zero(2, 2), zero(3, 1)) == 0.0
    assert algebra.norm_max_check(Diagonal([0.5, 4]), zero(1, 1)) == pytest.approx(0.0, abs=TOL)

def test_absolute_value_identities():
    for key in range(20):
        rng = instance_rng(77, key)
        m, n = (int(d) for d in rng.integers(1, 8, size=2))
        a = random_matrix(rng, m, n, int(rng.integers(0, min(m, n) + 1)), SIGMA_RANGE)
        assert algebra.pinv_abs_check(a, RANK_TOL) <= 1e-9
        assert algebra.abs_square_pinv_check(a, RANK_TOL) <= 1e-9

def test_n_fold_sums_nest_to_the_right():
    ops = (Diagonal([1]), Diagonal([2]), Diagonal([4]))
    nested = direct_sum_n(*ops)
    assert isinstance(nested, DirectSum)
    assert isinstance(nested.right, DirectSum)
    assert np.allclose(materialize(algebra.pinv_direct_sum_n(*ops)), np.diag([1, 0.5, 0.25]))

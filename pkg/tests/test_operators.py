import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pypinv import operators as ops
from pypinv._errors import DimensionMismatchError, NonFiniteEntryError


small_ints = st.integers(min_value=-5, max_value=5).map(float)


def test_apply_examples():
    assert np.allclose(ops.apply(ops.Diagonal([1, 2, 3]), [1, 1, 1]), [1, 2, 3])
    assert np.allclose(ops.apply(ops.DirectSum(ops.Diagonal([2]), ops.Diagonal([3])), [1, 1]), [2, 3])
    assert np.allclose(ops.apply(ops.Dense([[1, 2], [3, 4], [5, 6]]), np.zeros(2)), np.zeros(3))

    example = ops.direct_sum(ops.Diagonal([1, 2, 3]), ops.Diagonal([0, 2, 3]))
    assert example.shape == (6, 6)
    assert np.allclose(ops.apply(example, np.ones(6)), [1, 2, 3, 0, 2, 3])

def test_apply_rejects_wrong_length():
    with pytest.raises(DimensionMismatchError):
        ops.apply(ops.Diagonal([1, 2]), [1, 2, 3])
    with pytest.raises(DimensionMismatchError):
        ops.apply(ops.direct_sum(ops.Diagonal([1]), ops.Dense([[1, 2]])), [1, 2])

def test_non_finite_entries_are_rejected():
    with pytest.raises(NonFiniteEntryError):
        ops.Dense([[1.0, np.nan]])
    with pytest.raises(NonFiniteEntryError):
        ops.Diagonal([np.inf, 1.0])
    with pytest.raises(NonFiniteEntryError):
        ops.apply(ops.identity(2), [1.0, np.nan])
    with pytest.raises(ValueError):
        ops.Dense(np.zeros((0, 3)))

def test_adjoint_examples():
    assert np.array_equal(ops.materialize(ops.adjoint(ops.Dense([[0, 1], [0, 0]]))), [[0, 0], [1, 0]])
    adj = ops.adjoint(ops.Diagonal([1j, 2]))
    assert isinstance(adj, ops.Diagonal)
    assert np.array_equal(adj.diag, [-1j, 2])

    block = ops.adjoint(ops.direct_sum(ops.Dense([[1, 2, 3]]), ops.Diagonal([1j])))
    assert isinstance(block, ops.DirectSum)
    assert block.shape == (4, 2)

def test_compose_and_add_keep_structure():
    product = ops.compose(ops.Diagonal([1, 2]), ops.Diagonal([3, 4]))
    assert isinstance(product, ops.Diagonal)
    assert np.array_equal(product.diag, [3, 8])

    a = ops.direct_sum(ops.Diagonal([1]), ops.Dense([[1, 2], [3, 4]]))
    b = ops.direct_sum(ops.Diagonal([2]), ops.Dense([[0, 1], [1, 0]]))
    assert isinstance(ops.compose(a, b), ops.DirectSum)
    assert isinstance(ops.add(a, b), ops.DirectSum)
    assert np.allclose(ops.materialize(ops.compose(a, b)), ops.materialize(a) @ ops.materialize(b))
    assert np.allclose(ops.materialize(ops.add(a, b)), ops.materialize(a) + ops.materialize(b))

    with pytest.raises(DimensionMismatchError):
        ops.compose(ops.Diagonal([1, 2]), ops.Dense([[1, 2, 3]]))
    with pytest.raises(DimensionMismatchError):
        ops.add(ops.Diagonal([1, 2]), ops.Dense([[1, 2]]))

def test_materialize_layout():
    assert np.array_equal(ops.materialize(ops.Diagonal([1, 2])), [[1, 0], [0, 2]])
    assert np.array_equal(ops.materialize(ops.DirectSum(ops.Diagonal([1]), ops.Diagonal([2]))), [[1, 0], [0, 2]])
    nested = ops.direct_sum_n(ops.Diagonal([1]), ops.Dense([[2, 3]]), ops.Diagonal([4]))
    assert np.array_equal(ops.materialize(nested), [[1, 0, 0, 0], [0, 2, 3, 0], [0, 0, 0, 4]])

def test_constructors_and_norms():
    assert np.array_equal(ops.materialize(ops.identity(3)), np.eye(3))
    assert ops.zero(2, 3).shape == (2, 3)
    assert ops.frobenius_norm(ops.Diagonal([3, 4])) == pytest.approx(5.0)
    assert np.allclose(ops.materialize(ops.scale(ops.Diagonal([1, 2]), 2j)), np.diag([2j, 4j]))
    with pytest.raises(ValueError):
        ops.direct_sum_n()

def test_operators_are_immutable():
    d = ops.Dense([[1.0, 2.0]])
    with pytest.raises(ValueError):
        d.entries[0, 0] = 5.0
    copy = ops.materialize(d)
    copy[0, 0] = 5.0
    assert d.entries[0, 0] == 1.0

@seed(7)
@given(
    left=arrays(np.float64, (2, 3), elements=small_ints),
    right=arrays(np.float64, (3, 2), elements=small_ints),
    x=arrays(np.float64, (5,), elements=small_ints),
)
def test_direct_sum_acts_blockwise(left, right, x):
    block = ops.direct_sum(left, right)
    expected = np.concatenate([left @ x[:3], right @ x[3:]])
    assert np.allclose(ops.apply(block, x), expected)
    assert np.allclose(ops.apply(block, x), ops.materialize(block) @ x)

@seed(11)
@given(
    a=arrays(np.float64, (3, 4), elements=small_ints),
    x=arrays(np.float64, (4,), elements=small_ints),
    y=arrays(np.float64, (3,), elements=small_ints),
)
def test_adjoint_inner_product(a, x, y):
    t = ops.Dense(a + 1j * np.roll(a, 1, axis=1))
    lhs = np.vdot(y, ops.apply(t, x))
    rhs = np.vdot(ops.apply(ops.adjoint(t), y), x)
    assert lhs == pytest.approx(rhs)

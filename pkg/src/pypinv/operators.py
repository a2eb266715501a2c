"""Operator value model: dense, diagonal and direct-sum operators over complex scalars."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union
from typing_extensions import TypeAlias

import numpy as np
from numpy.typing import ArrayLike

from ._errors import DimensionMismatchError
from ._utils import ComplexArray, as_complex_array, frobenius


def _frozen(arr: ComplexArray) -> ComplexArray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dense:
    """Operator given by an explicit m x n matrix of complex entries."""
    entries: ComplexArray

    def __post_init__(self):
        arr = as_complex_array(self.entries, 2)
        if 0 in arr.shape:
            raise ValueError(f"Operator dimensions must be positive, got {arr.shape}")
        object.__setattr__(self, "entries", _frozen(arr))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


@dataclass(frozen=True, eq=False)
class Diagonal:
    """Square operator acting coordinatewise by its diagonal."""
    diag: ComplexArray

    def __post_init__(self):
        arr = as_complex_array(self.diag, 1)
        if arr.size == 0:
            raise ValueError("Diagonal operator needs at least one entry")
        object.__setattr__(self, "diag", _frozen(arr))

    @property
    def rows(self) -> int:
        return self.diag.shape[0]

    @property
    def cols(self) -> int:
        return self.diag.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


@dataclass(frozen=True, eq=False)
class DirectSum:
    """Block-diagonal operator (T1 + T2)(h1, h2) = (T1 h1, T2 h2) on concatenated vectors."""
    left: "Operator"
    right: "Operator"
    rows: int = field(init=False)
    cols: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "left", as_operator(self.left))
        object.__setattr__(self, "right", as_operator(self.right))
        object.__setattr__(self, "rows", self.left.rows + self.right.rows)
        object.__setattr__(self, "cols", self.left.cols + self.right.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


Operator: TypeAlias = Union[Dense, Diagonal, DirectSum]
OperatorLike: TypeAlias = Union[Dense, Diagonal, DirectSum, ArrayLike]


def as_operator(op: OperatorLike) -> Operator:
    """
    Coerce an array-like to a Dense operator; operators pass through unchanged.

    Parameters:
    -----------
    op : Operator or array_like
        Operator or 2-d array of real/complex entries

    Returns:
    --------
    Operator
        The operator itself, or a Dense wrapping a complex copy of the array
    """
    if isinstance(op, (Dense, Diagonal, DirectSum)):
        return op
    return Dense(op)

def as_vector(x: ArrayLike) -> ComplexArray:
    return as_complex_array(x, 1)

def identity(n: int) -> Diagonal:
    return Diagonal(np.ones(n))

def zero(rows: int, cols: int) -> Dense:
    return Dense(np.zeros((rows, cols)))

def apply(op: OperatorLike, x: ArrayLike) -> ComplexArray:
    """
    Apply an operator to a vector.

    Parameters:
    -----------
    op : Operator
        The operator T
    x : array_like
        Vector of length op.cols; direct sums split it left block first

    Returns:
    --------
    ndarray
        T x, of length op.rows

    Raises:
    -------
    DimensionMismatchError
        If len(x) != op.cols
    """
    op = as_operator(op)
    x = as_vector(x)
    if x.shape[0] != op.cols:
        raise DimensionMismatchError(f"Vector of length {x.shape[0]} does not fit an operator with {op.cols} columns")
    return _apply(op, x)

def _apply(op: Operator, x: ComplexArray) -> ComplexArray:
    match op:
        case Dense():
            return op.entries @ x
        case Diagonal():
            return op.diag * x
        case DirectSum():
            split = op.left.cols
            return np.concatenate([_apply(op.left, x[:split]), _apply(op.right, x[split:])])
    raise TypeError(f"Unknown operator kind: {type(op).__name__}")

def adjoint(op: OperatorLike) -> Operator:
    """
    Conjugate transpose, preserving structure (adjoint of a direct sum is the direct sum of adjoints).

    Parameters:
    -----------
    op : Operator
        The operator T

    Returns:
    --------
    Operator
        T*
    """
    op = as_operator(op)
    match op:
        case Dense():
            return Dense(op.entries.conj().T)
        case Diagonal():
            return Diagonal(op.diag.conj())
        case DirectSum():
            return DirectSum(adjoint(op.left), adjoint(op.right))
    raise TypeError(f"Unknown operator kind: {type(op).__name__}")

def materialize(op: OperatorLike) -> ComplexArray:
    """
    Dense m x n matrix of an operator; direct sums are laid out block-diagonally.

    Parameters:
    -----------
    op : Operator
        The operator T

    Returns:
    --------
    ndarray
        Writable complex128 copy of the matrix of T in the standard bases
    """
    op = as_operator(op)
    match op:
        case Dense():
            return op.entries.copy()
        case Diagonal():
            return np.diag(op.diag)
        case DirectSum():
            out = np.zeros(op.shape, dtype=np.complex128)
            out[:op.left.rows, :op.left.cols] = materialize(op.left)
            out[op.left.rows:, op.left.cols:] = materialize(op.right)
            return out
    raise TypeError(f"Unknown operator kind: {type(op).__name__}")

def compose(a: OperatorLike, b: OperatorLike) -> Operator:
    """
    Product a * b.

    Diagonal * Diagonal stays diagonal and direct sums with matching splits compose
    blockwise; everything else is multiplied densely.

    Parameters:
    -----------
    a, b : Operator
        Operators with a.cols == b.rows

    Returns:
    --------
    Operator
        The product operator

    Raises:
    -------
    DimensionMismatchError
        If a.cols != b.rows
    """
    a = as_operator(a)
    b = as_operator(b)
    if a.cols != b.rows:
        raise DimensionMismatchError(f"Cannot compose {a.shape} with {b.shape}")
    if isinstance(a, Diagonal) and isinstance(b, Diagonal):
        return Diagonal(a.diag * b.diag)
    if isinstance(a, DirectSum) and isinstance(b, DirectSum) and a.left.cols == b.left.rows:
        return DirectSum(compose(a.left, b.left), compose(a.right, b.right))
    return Dense(materialize(a) @ materialize(b))

def add(a: OperatorLike, b: OperatorLike) -> Operator:
    """Sum a + b, keeping diagonal and split-matched direct-sum structure."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Cannot add {a.shape} and {b.shape}")
    if isinstance(a, Diagonal) and isinstance(b, Diagonal):
        return Diagonal(a.diag + b.diag)
    if isinstance(a, DirectSum) and isinstance(b, DirectSum) and a.left.shape == b.left.shape:
        return DirectSum(add(a.left, b.left), add(a.right, b.right))
    return Dense(materialize(a) + materialize(b))

def scale(op: OperatorLike, c: complex) -> Operator:
    op = as_operator(op)
    match op:
        case Dense():
            return Dense(c * op.entries)
        case Diagonal():
            return Diagonal(c * op.diag)
        case DirectSum():
            return DirectSum(scale(op.left, c), scale(op.right, c))
    raise TypeError(f"Unknown operator kind: {type(op).__name__}")

def direct_sum(a: OperatorLike, b: OperatorLike) -> DirectSum:
    """
    Direct sum a + b acting on concatenated vectors (left block first).

    Parameters:
    -----------
    a, b : Operator
        Summands of any shapes

    Returns:
    --------
    DirectSum
        Structural node of shape (a.rows + b.rows, a.cols + b.cols)
    """
    return DirectSum(as_operator(a), as_operator(b))

def direct_sum_n(*ops: OperatorLike) -> Operator:
    """Right-nested n-fold direct sum T1 + (T2 + (... + Tn))."""
    if not ops:
        raise ValueError("direct_sum_n needs at least one operator")
    result = as_operator(ops[-1])
    for op in reversed(ops[:-1]):
        result = direct_sum(op, result)
    return result

def frobenius_norm(op: OperatorLike) -> float:
    return frobenius(materialize(op))


__all__ = ["Dense", "Diagonal", "DirectSum", "Operator", "OperatorLike", "as_operator", "as_vector",
            "identity", "zero", "apply", "adjoint", "materialize", "compose", "add", "scale",
            "direct_sum", "direct_sum_n", "frobenius_norm"]

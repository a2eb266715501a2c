"""Moore-Penrose inverses by SVD and by inverting T on its carrier, with the subspaces they live on."""

from __future__ import annotations

import sys
import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ._errors import DimensionMismatchError, RestrictedSystemError, UndefinedGammaError
from ._svd import SvdFactors, svd as _svd
from ._utils import (SUBSPACE_TOL, ComplexArray, RealArray, Tolerance, as_complex_array, catch_linalg_error,
                    check_tolerance, default_tolerance, frobenius, wrap_functions_with_tolerance)
from .operators import Dense, OperatorLike, as_operator, materialize

_log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PinvResult:
    """Pseudoinverse of an operator together with the spectral data it was built from."""
    pinv: Dense
    rank: int
    tol_used: float
    sigma: RealArray
    gamma: float | None


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^d stored as a matrix whose columns are an orthonormal basis."""
    basis: ComplexArray
    ambient_dim: int

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.complex128).reshape(self.ambient_dim, -1)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> ComplexArray:
        """Orthogonal projector basis * basis^*."""
        return self.basis @ self.basis.conj().T


def svd(a: OperatorLike) -> SvdFactors:
    """
    Full SVD of an operator's materialization.

    Parameters:
    -----------
    a : Operator or array_like
        The operator T

    Returns:
    --------
    SvdFactors
        U, sigma, V with T = U diag(sigma) V*
    """
    return _svd(materialize(a))

def _factors_and_tol(op: OperatorLike, tol: Tolerance, rtol: Tolerance = None) -> tuple[SvdFactors, float, int]:
    check_tolerance(rtol)
    arr = materialize(op)
    factors = _svd(arr)
    sigma_max = float(factors.sigma[0]) if factors.sigma.size else 0.0
    if tol is not None:
        tol_used = float(tol)
    elif rtol is not None and sigma_max > 0:
        tol_used = rtol * sigma_max
    else:
        tol_used = default_tolerance(arr.shape, sigma_max)
    rank = int(np.count_nonzero(factors.sigma > tol_used))
    return factors, tol_used, rank

def pinv(op: OperatorLike, tol: Tolerance = None, rtol: Tolerance = None) -> PinvResult:
    """
    Moore-Penrose inverse V diag(sigma^+) U*, where sigma^+ inverts the singular values above `tol`.

    Parameters:
    -----------
    op : Operator or array_like
        m x n operator T
    tol : float, optional
        Rank tolerance. Defaults to max(m, n) * sigma_max * 2^-52 (2^-52 when T = 0).
    rtol : float, optional
        Rank tolerance relative to sigma_max, used when tol is not given

    Returns:
    --------
    PinvResult
        n x m pseudoinverse, rank, tolerance used, singular spectrum and reduced minimum modulus

    Raises:
    -------
    InvalidToleranceError
        If tol is not positive
    """
    factors, tol_used, rank = _factors_and_tol(op, tol, rtol)
    m, n = factors.u.shape[0], factors.v.shape[0]
    sigma = factors.sigma
    if rank:
        p = (factors.v[:, :rank] / sigma[:rank]) @ factors.u[:, :rank].conj().T
        gamma_value = float(sigma[rank - 1])
    else:
        p = np.zeros((n, m), dtype=np.complex128)
        gamma_value = None
    return PinvResult(pinv=Dense(p), rank=rank, tol_used=tol_used, sigma=sigma.copy(), gamma=gamma_value)

def pinv_by_definition(op: OperatorLike, tol: float) -> ComplexArray:
    """
    Moore-Penrose inverse assembled from its definition.

    Each basis vector y of R(T) is mapped to the unique c in the carrier C(T) = N(T)^perp with
    T c = y; the map is extended by zero on R(T)^perp and written in the standard basis.

    Parameters:
    -----------
    op : Operator or array_like
        m x n operator T
    tol : float
        Rank tolerance separating R(T), C(T) from their complements

    Returns:
    --------
    ndarray
        n x m matrix of T^+

    Raises:
    -------
    RestrictedSystemError
        If T restricted to its carrier is singular, i.e. the tolerance misclassified a singular value
    """
    check_tolerance(tol)
    arr = materialize(op)
    factors, _, rank = _factors_and_tol(arr, tol)
    m, n = arr.shape
    if rank == 0:
        return np.zeros((n, m), dtype=np.complex128)
    range_basis = factors.u[:, :rank]
    carrier_basis = factors.v[:, :rank]

    # coordinates z of c = carrier_basis @ z solving T c = y for each range basis vector y
    restricted = range_basis.conj().T @ arr @ carrier_basis
    try:
        coords = np.linalg.solve(restricted, np.eye(rank, dtype=np.complex128))
    except np.linalg.LinAlgError as e:
        catch_linalg_error(sys.exc_info()[0], e)
    solved = carrier_basis @ coords
    if frobenius(arr @ solved - range_basis) > 1e-8 * (1 + frobenius(solved)) * (1 + frobenius(arr)):
        raise RestrictedSystemError("T restricted to its carrier is numerically singular at this tolerance")
    return solved @ range_basis.conj().T

def rank(op: OperatorLike, tol: Tolerance = None, rtol: Tolerance = None) -> int:
    return _factors_and_tol(op, tol, rtol)[2]

def range_space(op: OperatorLike, tol: Tolerance = None, rtol: Tolerance = None) -> Subspace:
    """R(T), spanned by the left singular vectors with singular value above tol."""
    factors, _, r = _factors_and_tol(op, tol, rtol)
    return Subspace(factors.u[:, :r], factors.u.shape[0])

def carrier(op: OperatorLike, tol: Tolerance = None, rtol: Tolerance = None) -> Subspace:
    """C(T) = N(T)^perp, spanned by the right singular vectors with singular value above tol."""
    factors, _, r = _factors_and_tol(op, tol, rtol)
    return Subspace(factors.v[:, :r], factors.v.shape[0])

def null_space(op: OperatorLike, tol: Tolerance = None, rtol: Tolerance = None) -> Subspace:
    """N(T), spanned by the remaining right singular vectors."""
    factors, _, r = _factors_and_tol(op, tol, rtol)
    return Subspace(factors.v[:, r:], factors.v.shape[0])

def orthogonal_complement(sub: Subspace) -> Subspace:
    factors = _svd(sub.basis) if sub.dim else None
    if factors is None:
        return Subspace(np.eye(sub.ambient_dim), sub.ambient_dim)
    return Subspace(factors.u[:, sub.dim:], sub.ambient_dim)

def span(vectors: ArrayLike, tol: Tolerance = None) -> Subspace:
    """Subspace spanned by the columns of `vectors`."""
    arr = as_complex_array(vectors, 2)
    return range_space(arr, tol)

def range_projector(op: OperatorLike, tol: Tolerance = None) -> ComplexArray:
    """
    Orthogonal projector onto R(T), equal to T T^+.

    Parameters:
    -----------
    op : Operator or array_like
        m x n operator T
    tol : float, optional
        Rank tolerance

    Returns:
    --------
    ndarray
        Hermitian idempotent m x m matrix
    """
    return range_space(op, tol).projector()

def carrier_projector(op: OperatorLike, tol: Tolerance = None) -> ComplexArray:
    """Orthogonal projector onto C(T) = N(T)^perp, equal to T^+ T."""
    return carrier(op, tol).projector()

def null_projector(op: OperatorLike, tol: Tolerance = None) -> ComplexArray:
    """Orthogonal projector onto N(T)."""
    return null_space(op, tol).projector()

def operator_norm(op: OperatorLike) -> float:
    """
    Spectral norm, the largest singular value.

    Parameters:
    -----------
    op : Operator or array_like
        The operator T

    Returns:
    --------
    float
        ||T||, zero for the zero operator
    """
    sigma = _svd(materialize(op)).sigma
    return float(sigma[0]) if sigma.size else 0.0

def gamma(op: OperatorLike, tol: Tolerance = None) -> float:
    """
    Reduced minimum modulus: the smallest singular value above tol, equal to 1 / ||T^+||.

    Parameters:
    -----------
    op : Operator or array_like
        The operator T
    tol : float, optional
        Rank tolerance

    Returns:
    --------
    float
        gamma(T) > 0

    Raises:
    -------
    UndefinedGammaError
        If T has rank zero
    """
    result = pinv(op, tol)
    if result.gamma is None:
        raise UndefinedGammaError("The reduced minimum modulus of the zero operator is undefined")
    return result.gamma

def subspace_leq(a: Subspace, b: Subspace, tol: float = SUBSPACE_TOL) -> bool:
    """
    Inclusion test ||(I - P_b) P_a||_2 <= tol.

    Parameters:
    -----------
    a, b : Subspace
        Subspaces of the same ambient space
    tol : float, optional
        Spectral-norm tolerance, default 1e-8

    Returns:
    --------
    bool
        True if a is (numerically) contained in b

    Raises:
    -------
    DimensionMismatchError
        If the ambient dimensions differ
    """
    return subspace_gap(a, b) <= tol

def subspace_eq(a: Subspace, b: Subspace, tol: float = SUBSPACE_TOL) -> bool:
    """Equality test: inclusion both ways."""
    return subspace_leq(a, b, tol) and subspace_leq(b, a, tol)

def subspace_gap(a: Subspace, b: Subspace) -> float:
    """||(I - P_b) P_a||_2, zero exactly when a is contained in b."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"Subspaces live in C^{a.ambient_dim} and C^{b.ambient_dim}")
    if a.dim == 0:
        return 0.0
    leftover = a.basis - b.basis @ (b.basis.conj().T @ a.basis)
    return operator_norm(leftover)

def subspace_distance(a: Subspace, b: Subspace) -> float:
    """Projector distance ||P_a - P_b||_2."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"Subspaces live in C^{a.ambient_dim} and C^{b.ambient_dim}")
    return operator_norm(a.projector() - b.projector())

def penrose_residuals(op: OperatorLike, p: OperatorLike) -> tuple[float, float, float, float]:
    """
    The four Penrose residuals ||APA - A||, ||PAP - P||, ||(AP)* - AP||, ||(PA)* - PA|| (Frobenius).

    Parameters:
    -----------
    op : Operator or array_like
        m x n operator A
    p : Operator or array_like
        n x m candidate pseudoinverse P

    Returns:
    --------
    tuple of float
        The four residuals, in the order above
    """
    a = materialize(op)
    p = materialize(as_operator(p))
    if p.shape != a.shape[::-1]:
        raise DimensionMismatchError(f"Candidate of shape {p.shape} cannot invert an operator of shape {a.shape}")
    ap = a @ p
    pa = p @ a
    return (frobenius(ap @ a - a), frobenius(pa @ p - p),
            frobenius(ap.conj().T - ap), frobenius(pa.conj().T - pa))


__all__ = ["PinvResult", "Subspace", "SvdFactors", "svd", "pinv", "pinv_by_definition", "rank", "range_space",
            "carrier", "null_space", "orthogonal_complement", "span", "range_projector", "carrier_projector",
            "null_projector", "operator_norm", "gamma", "subspace_leq", "subspace_eq", "subspace_gap",
            "subspace_distance", "penrose_residuals"]

wrap_functions_with_tolerance(__name__, check_tolerance, __all__)

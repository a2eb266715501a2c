"""Direct-sum pseudoinverses, absolute values |T| and the norm / reduced minimum modulus formulas for direct sums."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import UndefinedGammaError
from ._utils import Tolerance, check_tolerance, frobenius, hermitian_part, normalized_residual, wrap_functions_with_tolerance
from .operators import (Dense, Diagonal, DirectSum, Operator, OperatorLike, adjoint, as_operator, compose, direct_sum,
                        direct_sum_n, materialize)
from .pinv import null_projector, operator_norm, pinv, range_projector, svd


@dataclass(frozen=True, eq=False)
class PolarParts:
    """|T| = (T*T)^(1/2) on the domain side and |T*| = (TT*)^(1/2) on the range side."""
    abs: Operator
    abs_adj: Operator


def abs_op(op: OperatorLike) -> PolarParts:
    """
    Absolute values |T| and |T*| from the singular value decomposition.

    Parameters:
    -----------
    op : Operator or array_like
        m x n operator T

    Returns:
    --------
    PolarParts
        |T| = V S' V* (n x n) and |T*| = U S'' U* (m x m), the singular values padded with zeros
    """
    op = as_operator(op)
    if isinstance(op, Diagonal):
        magnitudes = np.abs(op.diag)
        return PolarParts(abs=Diagonal(magnitudes), abs_adj=Diagonal(magnitudes))
    factors = svd(op)
    m, n = op.shape
    k = factors.sigma.shape[0]
    padded_n = np.zeros(n)
    padded_n[:k] = factors.sigma
    padded_m = np.zeros(m)
    padded_m[:k] = factors.sigma
    abs_t = hermitian_part((factors.v * padded_n) @ factors.v.conj().T)
    abs_t_adj = hermitian_part((factors.u * padded_m) @ factors.u.conj().T)
    return PolarParts(abs=Dense(abs_t), abs_adj=Dense(abs_t_adj))

def pinv_direct_sum(t1: OperatorLike, t2: OperatorLike, tol: Tolerance = None) -> DirectSum:
    """
    Blockwise pseudoinverse T1^+ (+) T2^+ of a direct sum.

    Parameters:
    -----------
    t1, t2 : Operator or array_like
        Summands
    tol : float, optional
        Rank tolerance applied to each summand

    Returns:
    --------
    DirectSum
        Equal to pinv(direct_sum(t1, t2)) up to rounding
    """
    return direct_sum(pinv(t1, tol).pinv, pinv(t2, tol).pinv)

def pinv_direct_sum_n(*ops: OperatorLike, tol: Tolerance = None) -> Operator:
    """Blockwise pseudoinverse of an n-fold (right-nested) direct sum."""
    return direct_sum_n(*(pinv(op, tol).pinv for op in ops))

def norm_max_check(t1: OperatorLike, t2: OperatorLike, tol: Tolerance = None) -> float:
    """
    | ||T1^+ (+) T2^+|| - max(||T1^+||, ||T2^+||) |, the norm of a direct sum of pseudoinverses.

    Parameters:
    -----------
    t1, t2 : Operator or array_like
        Summands
    tol : float, optional
        Rank tolerance applied to each summand

    Returns:
    --------
    float
        Absolute residual, rounding-sized for every pair
    """
    p1 = pinv(t1, tol).pinv
    p2 = pinv(t2, tol).pinv
    return abs(operator_norm(direct_sum(p1, p2)) - max(operator_norm(p1), operator_norm(p2)))

def gamma_direct_sum(t1: OperatorLike, t2: OperatorLike, tol: Tolerance = None) -> float:
    """
    gamma(T1 (+) T2) = 1 / ||T1^+ (+) T2^+||.

    A zero summand contributes nothing, so the result is gamma of the other summand.

    Raises:
    -------
    UndefinedGammaError
        If both summands are zero
    """
    norm = operator_norm(pinv_direct_sum(t1, t2, tol))
    if norm == 0:
        raise UndefinedGammaError("The reduced minimum modulus of the zero operator is undefined")
    return 1.0 / norm

def gamma_min_check(t1: OperatorLike, t2: OperatorLike, tol: Tolerance = None) -> float:
    """Relative residual |gamma(T1 (+) T2) - min(gamma(T1), gamma(T2))| / min(...), over the non-zero summands."""
    gammas = [r.gamma for r in (pinv(t1, tol), pinv(t2, tol)) if r.gamma is not None]
    if not gammas:
        raise UndefinedGammaError("The reduced minimum modulus of the zero operator is undefined")
    expected = min(gammas)
    return abs(pinv(direct_sum(t1, t2), tol).gamma - expected) / expected

def abs_pinv_identities(t1: OperatorLike, t2: OperatorLike, tol: Tolerance = None) -> tuple[float, float]:
    """
    Residuals of |(T1 (+) T2)^+| = |T1^+| (+) |T2^+| and |T1 (+) T2|^+ = |T1|^+ (+) |T2|^+.

    The left-hand sides are computed densely on the materialized direct sum, the right-hand
    sides blockwise.

    Parameters:
    -----------
    t1, t2 : Operator or array_like
        Summands
    tol : float, optional
        Rank tolerance

    Returns:
    --------
    tuple of float
        Normalized Frobenius residuals ||X - Y||_F / (1 + max(||X||_F, ||Y||_F)) of both identities
    """
    dense_sum = Dense(materialize(direct_sum(t1, t2)))

    lhs_abs_of_pinv = abs_op(pinv(dense_sum, tol).pinv).abs
    rhs_abs_of_pinv = direct_sum(abs_op(pinv(t1, tol).pinv).abs, abs_op(pinv(t2, tol).pinv).abs)

    lhs_pinv_of_abs = pinv(abs_op(dense_sum).abs, tol).pinv
    rhs_pinv_of_abs = direct_sum(pinv(abs_op(t1).abs, tol).pinv, pinv(abs_op(t2).abs, tol).pinv)

    return (normalized_residual(materialize(lhs_abs_of_pinv), materialize(rhs_abs_of_pinv)),
            normalized_residual(materialize(lhs_pinv_of_abs), materialize(rhs_pinv_of_abs)))

def abs_square_pinv_check(t: OperatorLike, tol: Tolerance = None) -> float:
    """Residual of (|T*|^2)^+ = (|T*|^+)^2."""
    abs_adj = abs_op(t).abs_adj
    lhs = pinv(compose(abs_adj, abs_adj), tol).pinv
    abs_adj_pinv = pinv(abs_adj, tol).pinv
    return normalized_residual(materialize(lhs), materialize(compose(abs_adj_pinv, abs_adj_pinv)))

def pinv_abs_check(t: OperatorLike, tol: Tolerance = None) -> float:
    """Residual of |T|^+ = |(T*)^+|."""
    lhs = pinv(abs_op(t).abs, tol).pinv
    rhs = abs_op(pinv(adjoint(t), tol).pinv).abs
    return normalized_residual(materialize(lhs), materialize(rhs))

def adjoint_direct_sum_check(t1: OperatorLike, t2: OperatorLike) -> float:
    """Entrywise residual of (T1 (+) T2)* = T1* (+) T2*, zero exactly."""
    lhs = materialize(adjoint(Dense(materialize(direct_sum(t1, t2)))))
    rhs = materialize(direct_sum(adjoint(t1), adjoint(t2)))
    return float(np.max(np.abs(lhs - rhs)))

def pinv_adjoint_direct_sum_check(*ops: OperatorLike, tol: Tolerance = None) -> float:
    """Residual of ((T1 (+) ... (+) Tn)^+)* = ((T1 (+) ... (+) Tn)*)^+, both sides computed densely."""
    dense_sum = Dense(materialize(direct_sum_n(*ops)))
    lhs = adjoint(pinv(dense_sum, tol).pinv)
    rhs = pinv(adjoint(dense_sum), tol).pinv
    return normalized_residual(materialize(lhs), materialize(rhs))

def direct_sum_projector_check(t1: OperatorLike, t2: OperatorLike, tol: Tolerance = None) -> float:
    """
    Residual of P_{R(T1 (+) T2)} = P_{R(T1)} (+) P_{R(T2)} together with the null-space analogue.

    Returns:
    --------
    float
        The larger of the two normalized residuals
    """
    dense_sum = Dense(materialize(direct_sum(t1, t2)))
    range_residual = normalized_residual(range_projector(dense_sum, tol),
                                        materialize(direct_sum(range_projector(t1, tol), range_projector(t2, tol))))
    null_residual = normalized_residual(null_projector(dense_sum, tol),
                                        materialize(direct_sum(null_projector(t1, tol), null_projector(t2, tol))))
    return max(range_residual, null_residual)

def polar_residual(t: OperatorLike) -> float:
    """||abs^2 - T*T||_F / (1 + ||T||_F^2)."""
    a = materialize(abs_op(t).abs)
    t_arr = materialize(t)
    return frobenius(a @ a - t_arr.conj().T @ t_arr) / (1 + frobenius(t_arr) ** 2)


__all__ = ["PolarParts", "abs_op", "pinv_direct_sum", "pinv_direct_sum_n", "norm_max_check", "gamma_direct_sum",
            "gamma_min_check", "abs_pinv_identities", "abs_square_pinv_check", "pinv_abs_check",
            "adjoint_direct_sum_check", "pinv_adjoint_direct_sum_check", "direct_sum_projector_check",
            "polar_residual"]

wrap_functions_with_tolerance(__name__, check_tolerance, __all__)

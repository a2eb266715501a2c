"""Closed-form pseudoinverse update (T + S)^+ = (I + T^+ S)^(-1) T^+ for admissible perturbations S."""

from __future__ import annotations

import sys
import logging
from dataclasses import dataclass

import numpy as np

from ._errors import DimensionMismatchError, InadmissiblePerturbationError, SeriesNotConvergedError
from ._random import complex_gaussian, random_matrix, random_unitary
from ._utils import (SUBSPACE_TOL, Tolerance, catch_linalg_error, check_tolerance, frobenius, normalized_residual,
                    wrap_functions_with_tolerance)
from .operators import Dense, Operator, OperatorLike, add, as_operator, compose, materialize, zero
from .pinv import (carrier, null_space, operator_norm, pinv, range_space, rank, subspace_distance,
                    subspace_leq)

_log = logging.getLogger(__name__)

MARGIN = 1e-8
# relative rank tolerance separating the carrier of a generated T from rounding noise
PAIR_RTOL = 1e-10


@dataclass(frozen=True)
class PerturbationCheck:
    """Conditions under which the closed-form update applies."""
    t_dagger_s_norm: float
    s_t_dagger_norm: float
    null_inclusion: bool
    range_inclusion: bool
    admissible: bool
    marginal: bool


@dataclass(frozen=True, eq=False)
class NeumannExpansion:
    """Partial sum of sum_j (-T^+ S)^j T^+ with the Frobenius norms of the summed terms."""
    pinv: Dense
    terms: int
    term_norms: tuple[float, ...]


@dataclass(frozen=True)
class PreservationCheck:
    """Rank, range and null space of T + S compared with those of T."""
    rank_t: int
    rank_sum: int
    range_distance: float
    null_distance: float
    projector_residual: float

    @property
    def preserved(self) -> bool:
        return (self.rank_t == self.rank_sum and self.range_distance <= SUBSPACE_TOL
                and self.null_distance <= SUBSPACE_TOL)


def _check_pair(t: Operator, s: Operator) -> None:
    if t.shape != s.shape:
        raise DimensionMismatchError(f"Perturbation of shape {s.shape} does not match operator of shape {t.shape}")

def check_conditions(t: OperatorLike, s: OperatorLike, tol: Tolerance = None,
                    subspace_tol: float = SUBSPACE_TOL) -> PerturbationCheck:
    """
    Check whether S is an admissible perturbation of T.

    The "for all x" constants of the norm conditions are computed as their least values:
    ||Sx|| <= b ||Tx|| holds with b = ||S T^+|| once N(T) is contained in N(S), and
    ||S* y|| <= c ||T* y|| holds with c = ||T^+ S|| once R(S) is contained in R(T).

    Parameters:
    -----------
    t : Operator or array_like
        m x n operator T
    s : Operator or array_like
        m x n perturbation S
    tol : float, optional
        Rank tolerance for T and S
    subspace_tol : float, optional
        Tolerance of the inclusion tests, default 1e-8

    Returns:
    --------
    PerturbationCheck
        Norms, inclusions and the admissibility verdict

    Raises:
    -------
    DimensionMismatchError
        If T and S differ in shape
    """
    t = as_operator(t)
    s = as_operator(s)
    _check_pair(t, s)
    t_pinv = pinv(t, tol).pinv
    t_dagger_s = operator_norm(compose(t_pinv, s))
    s_t_dagger = operator_norm(compose(s, t_pinv))
    null_inclusion = subspace_leq(null_space(t, tol), null_space(s, tol), subspace_tol)
    range_inclusion = subspace_leq(range_space(s, tol), range_space(t, tol), subspace_tol)
    admissible = null_inclusion and range_inclusion and t_dagger_s < 1 and s_t_dagger < 1
    marginal = any(1 - MARGIN <= norm < 1 for norm in (t_dagger_s, s_t_dagger))
    return PerturbationCheck(t_dagger_s_norm=t_dagger_s, s_t_dagger_norm=s_t_dagger, null_inclusion=null_inclusion,
                            range_inclusion=range_inclusion, admissible=admissible, marginal=marginal)

def _require_admissible(t: Operator, s: Operator, tol: Tolerance) -> PerturbationCheck:
    check = check_conditions(t, s, tol)
    if not check.admissible:
        _log.warning("Refusing inadmissible perturbation: %s", check)
        raise InadmissiblePerturbationError(f"Perturbation is not admissible: {check}", check)
    if check.marginal:
        _log.warning("Perturbation is admissible but marginal: %s", check)
    return check

def perturbed_pinv(t: OperatorLike, s: OperatorLike, tol: Tolerance = None) -> Dense:
    """
    Pseudoinverse of T + S by solving (I + T^+ S) X = T^+.

    Parameters:
    -----------
    t : Operator or array_like
        m x n operator T
    s : Operator or array_like
        Admissible m x n perturbation S
    tol : float, optional
        Rank tolerance for T

    Returns:
    --------
    Dense
        n x m matrix of (T + S)^+

    Raises:
    -------
    InadmissiblePerturbationError
        If S fails the conditions; nothing is computed in that case
    RestrictedSystemError
        If I + T^+ S turns out singular
    """
    t = as_operator(t)
    s = as_operator(s)
    _require_admissible(t, s, tol)
    t_pinv = materialize(pinv(t, tol).pinv)
    system = np.eye(t.cols, dtype=np.complex128) + t_pinv @ materialize(s)
    try:
        solution = np.linalg.solve(system, t_pinv)
    except np.linalg.LinAlgError as e:
        catch_linalg_error(sys.exc_info()[0], e)
    return Dense(solution)

def neumann_series(t: OperatorLike, s: OperatorLike, max_terms: int = 200, series_tol: float = 1e-12,
                    tol: Tolerance = None) -> NeumannExpansion:
    """
    Sum terms (-T^+ S)^j T^+ until the next term's Frobenius norm drops below series_tol.

    Parameters:
    -----------
    t : Operator or array_like
        m x n operator T
    s : Operator or array_like
        Admissible m x n perturbation S
    max_terms : int, optional
        Cap on the number of summed terms, default 200
    series_tol : float, optional
        Stopping threshold on the next term's norm, default 1e-12
    tol : float, optional
        Rank tolerance for T

    Returns:
    --------
    NeumannExpansion
        Partial sum, number of terms and the norms of the summed terms

    Raises:
    -------
    InadmissiblePerturbationError
        If S fails the conditions
    SeriesNotConvergedError
        If max_terms terms were summed and the next term is still above series_tol
    """
    check_tolerance(series_tol)
    if max_terms < 1:
        raise ValueError(f"max_terms must be at least 1, got {max_terms}")
    t = as_operator(t)
    s = as_operator(s)
    _require_admissible(t, s, tol)
    t_pinv = materialize(pinv(t, tol).pinv)
    ratio = -(t_pinv @ materialize(s))

    term = t_pinv
    total = np.zeros_like(t_pinv)
    norms = []
    for _ in range(max_terms):
        total += term
        norms.append(frobenius(term))
        term = ratio @ term
        next_norm = frobenius(term)
        if next_norm < series_tol:
            _log.debug("Neumann series converged after %d terms", len(norms))
            return NeumannExpansion(pinv=Dense(total), terms=len(norms), term_norms=tuple(norms))
    raise SeriesNotConvergedError(f"Neumann series did not reach {series_tol} within {max_terms} terms "
                                f"(next term norm {next_norm:.3e})", max_terms, next_norm)

def neumann_perturbed_pinv(t: OperatorLike, s: OperatorLike, max_terms: int = 200, series_tol: float = 1e-12,
                            tol: Tolerance = None) -> Dense:
    """Pseudoinverse of T + S from the Neumann expansion; see `neumann_series`."""
    return neumann_series(t, s, max_terms, series_tol, tol).pinv

def sampled_constants(t: OperatorLike, s: OperatorLike, samples: int = 10_000, seed: int = 0,
                    tol: Tolerance = None) -> tuple[float, float]:
    """
    Sampling estimates of the least constants b and c of the norm conditions.

    b is the maximum of ||Sx|| / ||Tx|| over random unit x in the carrier C(T), c the maximum of
    ||S* y|| / ||T* y|| over random unit y in R(T). Both are lower bounds of ||S T^+|| and
    ||T^+ S|| respectively and approach them as samples grow.

    Parameters:
    -----------
    t, s : Operator or array_like
        Operator and perturbation of equal shape
    samples : int, optional
        Number of random directions, default 10 000
    seed : int, optional
        Seed of the sampling generator
    tol : float, optional
        Rank tolerance for T

    Returns:
    --------
    tuple of float
        (b estimate, c estimate); zeros when T = 0
    """
    t = as_operator(t)
    s = as_operator(s)
    _check_pair(t, s)
    rng = np.random.default_rng(seed)
    t_arr = materialize(t)
    s_arr = materialize(s)

    def _max_ratio(basis, num, den):
        if basis.shape[1] == 0:
            return 0.0
        x = basis @ complex_gaussian(rng, (basis.shape[1], samples))
        x /= np.linalg.norm(x, axis=0)
        return float(np.max(np.linalg.norm(num @ x, axis=0) / np.linalg.norm(den @ x, axis=0)))

    b = _max_ratio(carrier(t, tol).basis, s_arr, t_arr)
    c = _max_ratio(range_space(t, tol).basis, s_arr.conj().T, t_arr.conj().T)
    return b, c

def random_admissible_pair(rng: np.random.Generator, m: int, n: int, rank_t: int, eps: float = 0.1,
                            sigma_range: tuple[float, float] = (0.1, 10.0)) -> tuple[Dense, Dense]:
    """
    Random operator T with an admissible perturbation S = c * T C.

    C = V_r W V_r* is a contraction of spectral norm 1 supported on the carrier of T (V_r an
    orthonormal basis of C(T), W a random unitary), so N(T) lies in N(S) and R(S) in R(T).
    c is chosen so that max(||T^+ S||, ||S T^+||) = eps.

    Parameters:
    -----------
    rng : numpy.random.Generator
        Source of randomness
    m, n : int
        Shape of T and S
    rank_t : int
        Rank of T
    eps : float, optional
        Size of the perturbation in (0, 0.5], default 0.1
    sigma_range : tuple of float, optional
        Range of the singular values of T

    Returns:
    --------
    tuple of Dense
        (T, S)
    """
    if not 0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 0.5], got {eps}")
    t = Dense(random_matrix(rng, m, n, rank_t, sigma_range))
    if rank_t == 0:
        return t, zero(m, n)
    result = pinv(t, rtol=PAIR_RTOL)
    basis = carrier(t, result.tol_used).basis
    contraction = basis @ random_unitary(rng, basis.shape[1]) @ basis.conj().T
    raw = materialize(t) @ contraction
    t_pinv = materialize(result.pinv)
    size = max(operator_norm(t_pinv @ raw), operator_norm(raw @ t_pinv))
    return t, Dense(raw * (eps / size))

def preservation_check(t: OperatorLike, s: OperatorLike, tol: Tolerance = None) -> PreservationCheck:
    """
    Compare rank, range and null space of T + S with those of T, and check the projector identities
    (T + S) X = T T^+ and X (T + S) = T^+ T for the closed-form update X.

    Returns:
    --------
    PreservationCheck
        Ranks, projector distances and the larger normalized projector residual
    """
    t = as_operator(t)
    s = as_operator(s)
    total = add(t, s)
    update = materialize(perturbed_pinv(t, s, tol))
    t_arr = materialize(t)
    t_pinv = materialize(pinv(t, tol).pinv)
    total_arr = materialize(total)
    projector_residual = max(normalized_residual(total_arr @ update, t_arr @ t_pinv),
                            normalized_residual(update @ total_arr, t_pinv @ t_arr))
    return PreservationCheck(rank_t=rank(t, tol), rank_sum=rank(total, tol),
                            range_distance=subspace_distance(range_space(total, tol), range_space(t, tol)),
                            null_distance=subspace_distance(null_space(total, tol), null_space(t, tol)),
                            projector_residual=projector_residual)


__all__ = ["PerturbationCheck", "NeumannExpansion", "PreservationCheck", "check_conditions", "perturbed_pinv",
            "neumann_series", "neumann_perturbed_pinv", "sampled_constants", "random_admissible_pair",
            "preservation_check"]

wrap_functions_with_tolerance(__name__, check_tolerance, __all__)

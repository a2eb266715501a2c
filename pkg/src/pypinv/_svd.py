"""One-sided Jacobi singular value decomposition."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike

from ._errors import SvdConvergenceError
from ._utils import EPS, ComplexArray, RealArray, as_complex_array

_log = logging.getLogger(__name__)

MAX_SWEEPS = 60
TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Full SVD A = U diag(sigma) V* with U (m x m) and V (n x n) unitary, sigma non-increasing."""
    u: ComplexArray
    sigma: RealArray
    v: ComplexArray

    def reconstruct(self) -> ComplexArray:
        m, n = self.u.shape[0], self.v.shape[0]
        k = self.sigma.shape[0]
        return (self.u[:, :k] * self.sigma) @ self.v[:, :k].conj().T if k else np.zeros((m, n), dtype=np.complex128)


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Parallel Jacobi ordering: n - 1 (or n) rounds of disjoint column pairs covering every pair once."""
    players = list(range(n + (n % 2)))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[i], players[size - 1 - i]) for i in range(size // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            rounds.append((tuple(p for p, _ in pairs), tuple(q for _, q in pairs)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)

def _jacobi_tall(a: ComplexArray) -> SvdFactors:
    m, n = a.shape
    work = a.copy()
    v = np.eye(n, dtype=np.complex128)
    threshold = math.sqrt(m) * EPS
    # columns at or below this squared norm are numerically zero and take no part in rotations
    floor = (threshold * float(np.linalg.norm(a))) ** 2
    rounds = [(np.array(p), np.array(q)) for p, q in _round_robin(n)]

    for sweep in range(MAX_SWEEPS):
        rotated = False
        for p, q in rounds:
            ap = work[:, p]
            aq = work[:, q]
            alpha = np.einsum("ij,ij->j", ap.conj(), ap).real
            beta = np.einsum("ij,ij->j", aq.conj(), aq).real
            gamma = np.einsum("ij,ij->j", ap.conj(), aq)
            g = np.abs(gamma)
            mask = (alpha > floor) & (beta > floor) & (g > TINY) & (g > threshold * np.sqrt(alpha * beta))
            if not mask.any():
                continue
            rotated = True
            p, q = p[mask], q[mask]
            alpha, beta, gamma, g = alpha[mask], beta[mask], gamma[mask], g[mask]

            phase = (gamma / g).conj()
            zeta = (beta - alpha) / (2 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t

            for mat in (work, v):
                xp = mat[:, p]
                xq = mat[:, q] * phase
                mat[:, p] = c * xp - s * xq
                mat[:, q] = s * xp + c * xq
        if not rotated:
            _log.debug("Jacobi SVD of %dx%d converged after %d sweeps", m, n, sweep + 1)
            break
    else:
        raise SvdConvergenceError(f"Jacobi SVD of a {m}x{n} matrix did not converge in {MAX_SWEEPS} sweeps")

    sigma = np.linalg.norm(work, axis=0)
    sigma[sigma * sigma <= floor] = 0.0
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    work = work[:, order]
    v = v[:, order]

    k = int(np.count_nonzero(sigma > 0))
    u_k = work[:, :k] / sigma[:k]
    completion, _ = np.linalg.qr(np.hstack([u_k, np.eye(m, dtype=np.complex128)]))
    u = np.hstack([u_k, completion[:, k:m]])
    return SvdFactors(u=u, sigma=sigma, v=v)

def svd(a: ArrayLike) -> SvdFactors:
    """
    Full singular value decomposition by one-sided (Hestenes) Jacobi rotations.

    Parameters:
    -----------
    a : array_like
        m x n matrix with finite entries

    Returns:
    --------
    SvdFactors
        U (m x m), sigma (length min(m, n), non-increasing, non-negative), V (n x n)

    Raises:
    -------
    SvdConvergenceError
        If the sweep cap is reached
    """
    a = as_complex_array(a, 2)
    m, n = a.shape
    if m < n:
        factors = _jacobi_tall(a.conj().T)
        return SvdFactors(u=factors.v, sigma=factors.sigma, v=factors.u)
    return _jacobi_tall(a)

"""Random instance generators shared by the identity suite and the perturbation module."""

from __future__ import annotations

import math
import zlib

import numpy as np

from ._utils import ComplexArray


def instance_rng(*keys: int | str) -> np.random.Generator:
    """Generator seeded from a tuple of integers and strings; strings enter through their CRC-32."""
    entropy = [zlib.crc32(k.encode("utf-8")) if isinstance(k, str) else int(k) for k in keys]
    return np.random.default_rng(entropy)

def complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> ComplexArray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)

def random_unitary(rng: np.random.Generator, n: int) -> ComplexArray:
    """Unitary factor of a complex Gaussian matrix, phases fixed so the distribution is Haar."""
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diagonal(r)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * phases

def random_matrix(rng: np.random.Generator, m: int, n: int, rank: int,
                sigma_range: tuple[float, float]) -> ComplexArray:
    """
    Matrix U diag(sigma) V* with Haar U, V and `rank` singular values log-uniform in sigma_range.

    Parameters:
    -----------
    rng : numpy.random.Generator
        Source of randomness
    m, n : int
        Shape
    rank : int
        Number of non-zero singular values, 0 <= rank <= min(m, n)
    sigma_range : tuple of float
        (sigma_min, sigma_max) with 0 < sigma_min <= sigma_max

    Returns:
    --------
    ndarray
        m x n complex matrix of the requested rank
    """
    if not 0 <= rank <= min(m, n):
        raise ValueError(f"Rank {rank} is outside 0..{min(m, n)} for a {m}x{n} operator")
    lo, hi = sigma_range
    u = random_unitary(rng, m)
    v = random_unitary(rng, n)
    sigma = np.exp(rng.uniform(math.log(lo), math.log(hi), size=rank)) if rank else np.zeros(0)
    return (u[:, :rank] * sigma) @ v[:, :rank].conj().T

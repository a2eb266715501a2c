"""Finite truncations of unbounded diagonal and multiplication operators with analytic pseudoinverses."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np
from typing_extensions import TypeAlias

from ._errors import UnknownFamilyError
from ._utils import ComplexArray, RealArray, Tolerance, check_tolerance, wrap_functions_with_tolerance
from .operators import Diagonal, Operator, apply
from .pinv import pinv

_log = logging.getLogger(__name__)

REFERENCE_DIM = 2 ** 20
GAUSS_POINTS = 8

# action(values, positions): T^+ applied to the probe sampled at the given positions
PinvAction: TypeAlias = Callable[[ComplexArray, RealArray], ComplexArray]
Domain: TypeAlias = Literal["sequence", "grid"]


@dataclass(frozen=True)
class TruncationFamily:
    """
    Indexed family n -> T_n of finite truncations of an operator.

    Sequence families act on l^2 coordinates k = 1, 2, ...; the truncation keeps the first n.
    Grid families act on L^2(0, 1) sampled at the midpoints (i - 1/2) / n.
    """
    name: str
    generate: Callable[[int], Operator]
    analytic_pinv_action: Optional[PinvAction]
    description: str
    domain: Domain = "sequence"

    def positions(self, n: int) -> RealArray:
        if self.domain == "grid":
            return (np.arange(1, n + 1) - 0.5) / n
        return np.arange(1, n + 1, dtype=float)


@dataclass(frozen=True)
class Probe:
    """Named vector evaluated lazily: at indices k for sequence families, at points x in [0, 1] for grid families."""
    name: str
    values: Callable[[RealArray], ComplexArray]
    domain: Domain = "sequence"


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    residual: float
    tail: float


def family_diag_unbounded() -> TruncationFamily:
    """T(x_1, x_2, ...) = (x_1, 2 x_2, ..., k x_k, ...), truncated to diag(1, ..., n)."""
    return TruncationFamily(
        name="diag-unbounded",
        generate=lambda n: Diagonal(np.arange(1, n + 1, dtype=float)),
        analytic_pinv_action=lambda values, k: values / k,
        description="diag(1, 2, ..., n); pseudoinverse divides coordinate k by k",
    )

def family_diag_kernel() -> TruncationFamily:
    """T(x_1, x_2, ...) = (0, 2 x_2, ..., k x_k, ...), truncated to diag(0, 2, ..., n)."""
    def generate(n: int) -> Diagonal:
        d = np.arange(1, n + 1, dtype=float)
        d[0] = 0.0
        return Diagonal(d)

    def action(values: ComplexArray, k: RealArray) -> ComplexArray:
        return np.where(k == 1, 0.0, values / k)

    return TruncationFamily(
        name="diag-kernel",
        generate=generate,
        analytic_pinv_action=action,
        description="diag(0, 2, ..., n); pseudoinverse kills the first coordinate and divides coordinate k by k",
    )

def family_identity() -> TruncationFamily:
    return TruncationFamily(
        name="identity",
        generate=lambda n: Diagonal(np.ones(n)),
        analytic_pinv_action=lambda values, k: values,
        description="identity on l^2",
    )

def family_multiplication(phi: Callable[[RealArray], RealArray], n_max: int | None = None,
                        name: str = "mult-phi") -> TruncationFamily:
    """
    Multiplication operator f -> phi f on L^2(0, 1), |phi| >= 1, sampled on the midpoint grid.

    Parameters:
    -----------
    phi : callable
        Vectorized real function on [0, 1] with |phi(x)| >= 1
    n_max : int, optional
        Largest truncation size that may be generated
    name : str, optional
        Family name

    Returns:
    --------
    TruncationFamily
        generate(n) = diag(phi(x_1), ..., phi(x_n)), analytic pseudoinverse = multiplication by 1 / phi

    Raises:
    -------
    ValueError
        From generate(n), if |phi| < 1 at a grid point or n exceeds n_max
    """
    def generate(n: int) -> Diagonal:
        if n_max is not None and n > n_max:
            raise ValueError(f"Truncation size {n} exceeds n_max = {n_max}")
        grid = (np.arange(1, n + 1) - 0.5) / n
        values = np.broadcast_to(np.asarray(phi(grid), dtype=float), grid.shape).copy()
        if np.any(np.abs(values) < 1):
            raise ValueError(f"|phi| < 1 on the grid of size {n}")
        return Diagonal(values)

    return TruncationFamily(
        name=name,
        generate=generate,
        analytic_pinv_action=lambda values, x: values / np.broadcast_to(phi(x), np.shape(x)),
        description="multiplication by phi on L^2(0, 1), midpoint grid",
        domain="grid",
    )

def probe_harmonic() -> Probe:
    return Probe("harmonic", lambda k: 1.0 / k)

def probe_finite(support: int = 3) -> Probe:
    return Probe("finite", lambda k: np.where(k <= support, 1.0, 0.0))

def probe_constant() -> Probe:
    return Probe("constant", lambda x: np.ones_like(x), domain="grid")

FAMILIES: dict[str, Callable[[], TruncationFamily]] = {
    "diag-unbounded": family_diag_unbounded,
    "diag-kernel": family_diag_kernel,
    "mult-phi": lambda: family_multiplication(lambda x: 1.0 + x),
    "identity": family_identity,
}

PROBES: dict[str, Callable[[], Probe]] = {
    "harmonic": probe_harmonic,
    "finite": probe_finite,
    "constant": probe_constant,
}

def family_by_name(name: str) -> TruncationFamily:
    if name not in FAMILIES:
        raise UnknownFamilyError(f"No truncation family: {name}. Valid families: {', '.join(FAMILIES)}")
    return FAMILIES[name]()

def probe_by_name(name: str) -> Probe:
    if name not in PROBES:
        raise UnknownFamilyError(f"No probe: {name}. Valid probes: {', '.join(PROBES)}")
    return PROBES[name]()

def _sequence_tails(fam: TruncationFamily, probe: Probe, ns: list[int], reference_dim: int) -> dict[int, float]:
    """l^2 norms of the analytic action beyond coordinate n, summed from the far end."""
    k = np.arange(1, reference_dim + 1, dtype=float)
    exact = np.abs(fam.analytic_pinv_action(probe.values(k), k)) ** 2
    suffix = np.cumsum(exact[::-1])[::-1]
    return {n: float(np.sqrt(suffix[n])) if n < reference_dim else 0.0 for n in ns}

def _grid_error(fam: TruncationFamily, probe: Probe, n: int, discrete: ComplexArray) -> float:
    """L^2(0, 1) distance between the piecewise-constant function with cell values `discrete` and T^+ f."""
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    left = np.arange(n) / n
    x = left[:, None] + (nodes[None, :] + 1) / (2 * n)
    exact = fam.analytic_pinv_action(probe.values(x), x)
    sq = np.abs(exact - discrete[:, None]) ** 2
    return float(np.sqrt(np.sum(sq * weights[None, :]) / (2 * n)))

def convergence_study(fam: TruncationFamily, probe: Probe, ns: list[int],
                    reference_dim: int = REFERENCE_DIM) -> list[ConvergenceRecord]:
    """
    Distance between truncated pseudoinverse actions and the analytic one.

    For sequence families residual(n) = ||pinv(T_n) y_n - (T^+ y)_{1..n}|| + tail(n), where
    tail(n) = ||(T^+ y)_{k > n}|| is evaluated up to `reference_dim` coordinates. For grid
    families the whole residual is the L^2 distance between the cell-wise constant
    reconstruction of pinv(T_n) y_n and T^+ f, reported as the tail.

    Parameters:
    -----------
    fam : TruncationFamily
        Family with an analytic pseudoinverse action
    probe : Probe
        Square-summable probe vector (or function for grid families)
    ns : list of int
        Truncation sizes
    reference_dim : int, optional
        Number of coordinates used for sequence tails, default 2^20

    Returns:
    --------
    list of ConvergenceRecord
        One (n, residual, tail) record per requested size, in the given order
    """
    if fam.analytic_pinv_action is None:
        raise ValueError(f"Family {fam.name} has no analytic pseudoinverse action")
    if probe.domain != fam.domain:
        raise ValueError(f"Probe {probe.name} is a {probe.domain} probe, family {fam.name} needs a {fam.domain} probe")
    if fam.domain == "sequence":
        tails = _sequence_tails(fam, probe, ns, reference_dim)

    records = []
    for n in ns:
        positions = fam.positions(n)
        sampled = np.asarray(probe.values(positions), dtype=np.complex128)
        computed = apply(pinv(fam.generate(n)).pinv, sampled)
        if fam.domain == "grid":
            tail = _grid_error(fam, probe, n, computed)
            discrete = 0.0
        else:
            tail = tails[n]
            discrete = float(np.linalg.norm(computed - fam.analytic_pinv_action(sampled, positions)))
        _log.debug("%s with probe %s at n=%d: discrete %.3e, tail %.3e", fam.name, probe.name, n, discrete, tail)
        records.append(ConvergenceRecord(n=n, residual=discrete + tail, tail=tail))
    return records

def is_non_increasing(records: list[ConvergenceRecord], atol: float = 1e-15) -> bool:
    return all(b.residual <= a.residual + atol for a, b in zip(records, records[1:]))

def section2_suite_on_truncations(fam: TruncationFamily, n: int, tol: Tolerance = 1e-10):
    """
    Run the whole identity registry on the truncation T_n.

    Single-operator identities get T_n, pair identities the pair (T_n, T_n), and the
    perturbation identities the pair (T_n, 0.25 T_n), which is admissible for every T_n.

    Returns:
    --------
    list of IdentityReport
        One report per registry entry, sorted by id
    """
    from .identities import run_on_operator

    return run_on_operator(fam.generate(n), tol)


__all__ = ["TruncationFamily", "Probe", "ConvergenceRecord", "family_diag_unbounded", "family_diag_kernel",
            "family_identity", "family_multiplication", "probe_harmonic", "probe_finite", "probe_constant",
            "family_by_name", "probe_by_name", "convergence_study", "is_non_increasing",
            "section2_suite_on_truncations"]

wrap_functions_with_tolerance(__name__, check_tolerance, __all__)

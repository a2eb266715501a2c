"""
Catalog of pseudoinverse identities as residual checks over random instances.

Every entry evaluates both sides of an identity densely and reports the normalized
residual ||X - Y||_F / (1 + max(||X||_F, ||Y||_F)); subspace identities report the
spectral distance between orthogonal projectors instead. Inclusions between unbounded
operators become equalities in finite dimensions and are checked as such.
"""

from __future__ import annotations

import math
import logging
import warnings
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Literal, Optional

import numpy as np
from typing_extensions import TypeAlias

from ._errors import VacuousSuiteWarning
from ._random import instance_rng, random_matrix
from ._utils import (EPS, SUBSPACE_TOL, ComplexArray, Schedule, Shape, check_tolerance, frobenius, normalized_residual,
                    wrap_functions_with_tolerance)
from .algebra import (abs_pinv_identities, abs_square_pinv_check, adjoint_direct_sum_check, direct_sum_projector_check,
                        gamma_min_check, norm_max_check, pinv_abs_check, pinv_adjoint_direct_sum_check, pinv_direct_sum,
                        pinv_direct_sum_n)
from .operators import Dense, Operator, OperatorLike, adjoint, as_operator, direct_sum, direct_sum_n, materialize, scale
from .perturbation import neumann_perturbed_pinv, perturbed_pinv, preservation_check, random_admissible_pair
from .pinv import (Subspace, carrier, null_space, operator_norm, orthogonal_complement, penrose_residuals, pinv,
                    pinv_by_definition, range_space, rank, subspace_distance)

_log = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_TRIALS = 50
DEFAULT_TOL = 1e-9
DEFAULT_SCHEDULE: tuple[Shape, ...] = ((2, 2), (3, 5), (5, 3), (8, 8), (12, 7))
DEFAULT_SIGMA_RANGE = (0.1, 10.0)
STRESS_SIGMA_RANGE = (1e-14, 10.0)

# relative rank tolerance used inside residual evaluations
RANK_RTOL = 1e-10

# run_on_operator perturbs T by S = FIXED_PERTURBATION * T
FIXED_PERTURBATION = 0.25

Kind: TypeAlias = Literal["equality", "subspace", "vacuous"]
Instances: TypeAlias = Literal["single", "pair", "perturbation"]
Residual: TypeAlias = Callable[..., float]


@dataclass(frozen=True)
class IdentitySpec:
    """
    One catalog entry.

    `residual(ops, rtol)` maps the operator tuple (T,), (T1, T2) or (T, S) to a non-negative
    real; `rtol` is the relative rank tolerance used for every pseudoinverse inside it. `anchor`
    quotes the statement the entry checks.
    """
    id: str
    description: str
    arity: int
    residual: Residual
    kind: Kind = "equality"
    instances: Instances = "single"
    min_rank: int = 0
    anchor: str = ""


@dataclass(frozen=True)
class IdentityReport:
    id: str
    trials: int
    dims: list[Shape]
    max_residual: float
    tol: float
    passed: bool
    seed: int

    def to_dict(self) -> dict:
        """Record with the serialized field names; infinite residuals become the string "inf"."""
        record = asdict(self)
        record["pass"] = record.pop("passed")
        record["dims"] = [list(d) for d in self.dims]
        if not math.isfinite(self.max_residual):
            record["max_residual"] = "inf"
        return {k: record[k] for k in ("id", "trials", "dims", "max_residual", "tol", "pass", "seed")}


@dataclass(frozen=True)
class InstanceConfig:
    """Random instance policy: seeded, uniform rank over 0..min(m, n), log-uniform singular values."""
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    max_dim: int = 12
    rank_policy: Literal["uniform"] = "uniform"
    sigma_range: tuple[float, float] = DEFAULT_SIGMA_RANGE
    schedule: Schedule = field(default=DEFAULT_SCHEDULE)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError(f"Seed must be a non-negative integer, got {self.seed}")
        if self.trials < 0:
            raise ValueError(f"Number of trials must be non-negative, got {self.trials}")
        if self.rank_policy != "uniform":
            raise ValueError(f"Unknown rank policy: {self.rank_policy}")
        lo, hi = self.sigma_range
        if not (0 < lo <= hi and math.isfinite(hi)):
            raise ValueError(f"sigma_range must satisfy 0 < sigma_min <= sigma_max, got {self.sigma_range}")
        schedule = tuple((int(m), int(n)) for m, n in self.schedule)
        if not schedule:
            raise ValueError("Dimension schedule is empty")
        for m, n in schedule:
            if not (0 < m <= self.max_dim and 0 < n <= self.max_dim):
                raise ValueError(f"Shape {m}x{n} is outside 1..{self.max_dim}")
        object.__setattr__(self, "schedule", schedule)


def stress_config(seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                  schedule: Optional[Schedule] = None) -> InstanceConfig:
    """Near-singular profile: singular values down to 1e-14. Failures are expected and reported."""
    schedule = schedule or DEFAULT_SCHEDULE
    max_dim = max(12, *(max(shape) for shape in schedule))
    return InstanceConfig(seed=seed, trials=trials, max_dim=max_dim, schedule=schedule, sigma_range=STRESS_SIGMA_RANGE)

def random_operator(cfg: InstanceConfig, m: int, n: int, rank: int, trial: int = 0) -> Dense:
    """
    Random m x n operator U diag(sigma) V* of the given rank under `cfg`.

    Parameters:
    -----------
    cfg : InstanceConfig
        Seed and singular value range
    m, n : int
        Shape
    rank : int
        Number of non-zero singular values
    trial : int, optional
        Trial index; the operator is a deterministic function of (seed, trial, m, n, rank)

    Returns:
    --------
    Dense
        The operator

    Raises:
    -------
    ValueError
        If rank is outside 0..min(m, n)
    """
    rng = instance_rng(cfg.seed, trial, m, n, rank)
    return Dense(random_matrix(rng, m, n, rank, cfg.sigma_range))


# residual helpers on dense arrays

def _h(a: ComplexArray) -> ComplexArray:
    return a.conj().T

def _p(a: ComplexArray, rtol: float) -> ComplexArray:
    return materialize(pinv(a, rtol=rtol).pinv)

def _abs_tol(rtol: float, *ops: OperatorLike) -> float:
    """Absolute rank tolerance covering the operators and their Gram products."""
    scale_ = max(1.0, *(frobenius(materialize(op)) for op in ops))
    return max(rtol * scale_ ** 2, EPS)

def _range(a: ComplexArray, rtol: float) -> Subspace:
    return range_space(a, rtol=rtol)

def _null(a: ComplexArray, rtol: float) -> Subspace:
    return null_space(a, rtol=rtol)

def _proj_residual(x: ComplexArray, sub: Subspace) -> float:
    return normalized_residual(x, sub.projector())


# single-operator equalities

def _projector_domain(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return _proj_residual(p @ a, _range(p, rtol))

def _projector_range(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return _proj_residual(a @ _p(a, rtol), _range(a, rtol))

def _involution(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_p(_p(a, rtol), rtol), a)

def _adjoint_commutes(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_p(_h(a), rtol), _h(_p(a, rtol)))

def _adjoint_commutes_by_definition(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    result = pinv(_h(a), rtol=rtol)
    return normalized_residual(pinv_by_definition(_h(a), result.tol_used), _h(_p(a, rtol)))

def _involution_by_definition(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    result = pinv(a, rtol=rtol)
    if result.gamma is None:
        return normalized_residual(np.zeros_like(a), a)
    # the singular values of T^+ are the reciprocals, the largest being 1 / gamma
    return normalized_residual(pinv_by_definition(result.pinv, rtol / result.gamma), a)

def _gram_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_p(_h(a) @ a, rtol), _p(a, rtol) @ _p(_h(a), rtol))

def _cogram_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_p(a @ _h(a), rtol), _p(_h(a), rtol) @ _p(a, rtol))

def _gram_pinv_adjoint_form(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return normalized_residual(_p(_h(a) @ a, rtol), p @ _h(p))

def _cogram_pinv_adjoint_form(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return normalized_residual(_p(a @ _h(a), rtol), _h(p) @ p)

def _symmetric_products(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return max(normalized_residual(p @ a, _h(p @ a)), normalized_residual(a @ p, _h(a @ p)))

def _penrose_uniqueness(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return max(penrose_residuals(a, p)) / (1 + frobenius(a) + frobenius(p))

def _adjoint_times_cogram_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_h(a) @ _p(a @ _h(a), rtol), _p(a, rtol))

def _gram_pinv_times_adjoint(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_p(_h(a) @ a, rtol) @ _h(a), _p(a, rtol))

def _cogram_times_adjoint_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(a @ _h(a) @ _p(_h(a), rtol), a)

def _adjoint_pinv_times_gram(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return normalized_residual(_p(_h(a), rtol) @ _h(a) @ a, a)

def _range_projector_on_adjoint_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return normalized_residual(a @ p @ _h(p), _h(p))

def _adjoint_pinv_on_domain_projector(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return normalized_residual(_h(p) @ p @ a, _h(p))

def _domain_projector_adjoint_on_adjoint(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return normalized_residual(_h(p @ a) @ _h(a), _h(a))

def _domain_projector_on_adjoint(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return normalized_residual(p @ a @ _h(a), _h(a))

def _abs_square(ops, rtol=RANK_RTOL):
    return abs_square_pinv_check(ops[0], _abs_tol(rtol, ops[0]))

def _abs_of_adjoint_pinv(ops, rtol=RANK_RTOL):
    return pinv_abs_check(ops[0], _abs_tol(rtol, ops[0]))


# single-operator subspace identities

def _null_of_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    complement = _range(a, rtol).projector() + _null(_h(a), rtol).projector()
    return max(subspace_distance(_null(p, rtol), _null(_h(a), rtol)),
                operator_norm(complement - np.eye(a.shape[0])))

def _range_of_pinv_is_carrier(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return subspace_distance(_range(_p(a, rtol), rtol), carrier(a, rtol=rtol))

def _null_of_adjoint_pinv(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    return subspace_distance(_null(_p(_h(a), rtol), rtol), _null(a, rtol))

def _null_of_adjoint_pinv_by_definition(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    result = pinv(_h(a), rtol=rtol)
    by_definition = pinv_by_definition(_h(a), result.tol_used)
    return subspace_distance(_null(by_definition, rtol), orthogonal_complement(_range(_h(a), rtol)))

def _domain_projector_subspaces(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return max(subspace_distance(_range(p, rtol), _range(p @ a, rtol)),
                subspace_distance(_null(a, rtol), _null(p @ a, rtol)))

def _range_projector_subspaces(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return max(subspace_distance(_range(a, rtol), _range(a @ p, rtol)),
                subspace_distance(_null(p, rtol), _null(a @ p, rtol)))

def _range_of_pinv_three_ways(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    r = _range(_p(a, rtol), rtol)
    return max(subspace_distance(r, orthogonal_complement(_null(a, rtol))), subspace_distance(r, _range(_h(a), rtol)))

def _ranges_of_projectors(ops, rtol=RANK_RTOL):
    a = materialize(ops[0])
    p = _p(a, rtol)
    return max(subspace_distance(_range(a @ p, rtol), _range(a, rtol)),
                subspace_distance(_range(p @ a, rtol), _range(p, rtol)))

def _vacuous(ops, rtol=RANK_RTOL):
    return 0.0


# direct sums

def _blockwise_pinv(ops, rtol=RANK_RTOL):
    tol = _abs_tol(rtol, *ops)
    dense_sum = materialize(direct_sum(*ops))
    return normalized_residual(materialize(pinv(dense_sum, tol).pinv), materialize(pinv_direct_sum(*ops, tol)))

def _blockwise_pinv_threefold(ops, rtol=RANK_RTOL):
    triple = (ops[0], ops[1], adjoint(ops[0]))
    tol = _abs_tol(rtol, *triple)
    dense_sum = materialize(direct_sum_n(*triple))
    return normalized_residual(materialize(pinv(dense_sum, tol).pinv), materialize(pinv_direct_sum_n(*triple, tol=tol)))

def _blockwise_projectors(ops, rtol=RANK_RTOL):
    return direct_sum_projector_check(*ops, tol=_abs_tol(rtol, *ops))

def _adjoint_of_direct_sum(ops, rtol=RANK_RTOL):
    return adjoint_direct_sum_check(*ops)

def _pinv_adjoint_of_direct_sum(ops, rtol=RANK_RTOL):
    return pinv_adjoint_direct_sum_check(*ops, tol=_abs_tol(rtol, *ops))

def _pinv_adjoint_of_threefold_sum(ops, rtol=RANK_RTOL):
    triple = (ops[0], ops[1], adjoint(ops[1]))
    return pinv_adjoint_direct_sum_check(*triple, tol=_abs_tol(rtol, *triple))

def _gamma_of_direct_sum(ops, rtol=RANK_RTOL):
    return gamma_min_check(*ops, tol=_abs_tol(rtol, *ops))

def _norm_of_direct_sum(ops, rtol=RANK_RTOL):
    return norm_max_check(*ops, tol=_abs_tol(rtol, *ops))

def _abs_of_pinv_blockwise(ops, rtol=RANK_RTOL):
    return abs_pinv_identities(*ops, tol=_abs_tol(rtol, *ops))[0]

def _pinv_of_abs_blockwise(ops, rtol=RANK_RTOL):
    return abs_pinv_identities(*ops, tol=_abs_tol(rtol, *ops))[1]


# perturbations

def _closed_form_update(ops, rtol=RANK_RTOL):
    t, s = ops
    tol = _abs_tol(rtol, t)
    total = materialize(t) + materialize(s)
    return normalized_residual(materialize(perturbed_pinv(t, s, tol)), materialize(pinv(total, tol).pinv))

def _series_update(ops, rtol=RANK_RTOL):
    t, s = ops
    tol = _abs_tol(rtol, t)
    return normalized_residual(materialize(neumann_perturbed_pinv(t, s, tol=tol)),
                                materialize(perturbed_pinv(t, s, tol)))

def _preservation(ops, rtol=RANK_RTOL):
    check = preservation_check(*ops, tol=_abs_tol(rtol, ops[0]))
    if check.rank_t != check.rank_sum:
        return math.inf
    return max(check.range_distance, check.null_distance, check.projector_residual)


# quoted statement each catalog entry checks, keyed by id
ANCHORS: dict[str, str] = {
    "thm-1.4-1": r"$T^{\dagger}$ is closed",
    "thm-1.4-2": r"$N(T^{\dagger}) = N(T^{*})$ and $R(T) \oplus N(T^{*}) = K$",
    "thm-1.4-3": r"$R(T^{\dagger}) = C(T)$",
    "thm-1.4-4": r"$T^{\dagger}Tx = P_{\overline{R(T^{\dagger})}}x$",
    "thm-1.4-5": r"$TT^{\dagger}y = P_{\overline{R(T)}}y$",
    "thm-1.4-6": r"$(T^{\dagger})^{\dagger} = T$",
    "thm-1.4-7": r"$(T^{*})^{\dagger} = (T^{\dagger})^{*}$",
    "thm-1.4-8": r"$N((T^{*})^{\dagger})= N(T)$",
    "thm-1.4-9": r"$(T^{*}T)^{\dagger} = T^{\dagger}(T^{*})^{\dagger}$",
    "thm-1.4-10": r"$(TT^{*})^{\dagger} = (T^{*})^{\dagger} T^{\dagger}$",
    "prop-2.1": r"$\overline{T^{\dagger}} \subset (\overline{T})^{\dagger}$",
    "thm-2.2": r"Then $(T^{\dagger})^{*} = (T^{*})^{\dagger}$",
    "thm-2.3": r"$T \subset (T^{\dagger})^{\dagger} \subset \overline{T}$",
    "prop-2.4": r"both are symmetric operators",
    "thm-2.5": r"$R(T^{\dagger}) = R(T^{\dagger}T)$",
    "thm-2.5-2": r"$R(T) = R(TT^{\dagger})$ and $N(T^{\dagger}) = N(TT^{\dagger})$",
    "thm-2.5-3": r"$R(T^{\dagger}) = N(T)^{\perp} = R(T^{*})$",
    "thm-2.6": r"$(T^{*}T)^{\dagger} \supset T^{\dagger}(T^{*})^{\dagger}$",
    "thm-2.7": r"$(TT^{*})^{\dagger} \supset (T^{*})^{\dagger} T^{\dagger}$",
    "cor-2.8": r"Then $T^{*}(TT^{*})^{\dagger} \supset T^{\dagger}$",
    "cor-2.9": r"$(T^{*}T)^{\dagger}T^{*} \subset T^{\dagger}$",
    "thm-2.10": r"$R(TT^{\dagger}) = R(T)$ and $R(T^{\dagger}T) = R(T^{\dagger})$",
    "thm-2.10-1": r"$D(TT^{\dagger}) = D(T^{\dagger})$",
    "thm-2.10-3": r"$N(T) = N((T^{*})^{\dagger})$",
    "thm-2.11": r"Then $T \subset TT^{*}(T^{*})^{\dagger}$",
    "thm-2.12": r"Then $T = (T^{*})^{\dagger}T^{*}T$",
    "thm-2.13": r"Then $(T^{\dagger})^{*} = TT^{\dagger}(T^{\dagger})^{*}$",
    "thm-2.14": r"$(T^{\dagger})^{*}T^{\dagger}T \subset (T^{\dagger})^{*}$",
    "thm-2.15": r"Then $T^{*} = (T^{\dagger}T)^{*}T^{*}$",
    "thm-2.16": r"Then $T^{*} \supset T^{\dagger}TT^{*}$",
    "thm-3.1": r"$T^{\dagger} = (T_{1} \bigoplus T_{2})^{\dagger} = T_{1}^{\dagger} \bigoplus T_{2}^{\dagger}$",
    "thm-3.1-proj": r"$P_{\overline{R(T)}} = P_{\overline{R(T_{1})}} \bigoplus P_{\overline{R(T_{2})}}$",
    "cor-3.2": r"$(T_{1} \bigoplus \cdots \bigoplus T_{n})^{\dagger} = T_{1}^{\dagger} \bigoplus \cdots \bigoplus T_{n}^{\dagger}$",
    "lem-3.3": r"$(T_{1} \bigoplus T_{2})^{*} = T_{1}^{*} \bigoplus T_{2}^{*}$",
    "cor-3.4": r"$((T_{1} \bigoplus T_{2})^{\dagger})^{*} = ((T_{1} \bigoplus T_{2})^{*})^{\dagger}$",
    "cor-3.4-n": r"$((T_{1} \bigoplus \cdots \bigoplus T_{n})^{\dagger})^{*} = ((T_{1} \bigoplus \cdots \bigoplus T_{n})^{*})^{\dagger}$",
    "cor-3.6": r"$\gamma(T_{1} \bigoplus T_{2}) = \min \{\gamma(T_{1}) ,\gamma(T_{2})\} > 0$",
    "eq-12-13": r"$\max\{ \|T_{1}^{\dagger}\|, \|T_{2}^{\dagger}\|\} \leq \|T_{1}^{\dagger} \bigoplus T_{2}^{\dagger}\|$",
    "thm-3.7": r"$|(T_{1} \bigoplus T_{2})^{\dagger}| = |T_{1}^{\dagger}| \bigoplus |T_{2}^{\dagger}|$",
    "thm-3.7-abs": r"$|T|^{\dagger} = |(T^{*})^{\dagger}|$",
    "thm-3.7-step": r"$(|T^{*}|^{2})^{\dagger} = (|T^{*}|^{\dagger})^{2}$",
    "cor-3.8": r"$|T_{1} \bigoplus T_{2}|^{\dagger} = |T_{1}|^{\dagger} \bigoplus |T_{2}|^{\dagger}$",
    "thm-3.10": r"$(T + S)^{\dagger} = (I + T^{\dagger}S)^{-1}T^{\dagger}$",
    "thm-3.10-series": r"$(I + T^{\dagger}S)^{-1}T^{\dagger} = \sum_{j} (-T^{\dagger}S)^{j} T^{\dagger}$",
    "thm-3.10-preserve": r"$R(T + S) = R(T)$ and $N(T + S) = N(T)$",
}

@lru_cache(maxsize=1)
def _catalog() -> tuple[IdentitySpec, ...]:
    def single(id, description, residual, kind="equality", min_rank=0):
        return IdentitySpec(id, description, 1, residual, kind, "single", min_rank, ANCHORS[id])

    def pair(id, description, residual, kind="equality", min_rank=0):
        return IdentitySpec(id, description, 2, residual, kind, "pair", min_rank, ANCHORS[id])

    def perturbation(id, description, residual, kind="equality"):
        return IdentitySpec(id, description, 2, residual, kind, "perturbation", anchor=ANCHORS[id])

    entries = [
        single("thm-1.4-1", "T^+ is closed", _vacuous, kind="vacuous"),
        single("thm-1.4-2", "N(T^+) = N(T*) and R(T) (+) N(T*) = K", _null_of_pinv, kind="subspace"),
        single("thm-1.4-3", "R(T^+) = C(T)", _range_of_pinv_is_carrier, kind="subspace"),
        single("thm-1.4-4", "T^+ T = P_R(T^+)", _projector_domain),
        single("thm-1.4-5", "T T^+ = P_R(T)", _projector_range),
        single("thm-1.4-6", "(T^+)^+ = T", _involution),
        single("thm-1.4-7", "(T*)^+ = (T^+)*", _adjoint_commutes),
        single("thm-1.4-8", "N((T*)^+) = N(T)", _null_of_adjoint_pinv, kind="subspace"),
        single("thm-1.4-9", "(T*T)^+ = T^+ (T*)^+", _gram_pinv),
        single("thm-1.4-10", "(TT*)^+ = (T*)^+ T^+", _cogram_pinv),
        single("prop-2.1", "T^+ satisfies the Penrose equations of the closure T", _penrose_uniqueness),
        single("thm-2.2", "(T^+)* = (T*)^+, right side by the carrier inverse", _adjoint_commutes_by_definition),
        single("thm-2.3", "(T^+)^+ = T, outer inverse by the carrier inverse", _involution_by_definition),
        single("prop-2.4", "T^+ T and T T^+ are Hermitian", _symmetric_products),
        single("thm-2.5", "R(T^+) = R(T^+ T) and N(T) = N(T^+ T)", _domain_projector_subspaces, kind="subspace"),
        single("thm-2.5-2", "R(T) = R(T T^+) and N(T^+) = N(T T^+)", _range_projector_subspaces, kind="subspace"),
        single("thm-2.5-3", "R(T^+) = N(T)^perp = R(T*)", _range_of_pinv_three_ways, kind="subspace"),
        single("thm-2.6", "(T*T)^+ = T^+ (T^+)*", _gram_pinv_adjoint_form),
        single("thm-2.7", "(TT*)^+ = (T^+)* T^+", _cogram_pinv_adjoint_form),
        single("cor-2.8", "T* (TT*)^+ = T^+", _adjoint_times_cogram_pinv),
        single("cor-2.9", "(T*T)^+ T* = T^+", _gram_pinv_times_adjoint),
        single("thm-2.10", "R(T T^+) = R(T) and R(T^+ T) = R(T^+)", _ranges_of_projectors, kind="subspace"),
        single("thm-2.10-1", "D(T T^+) = D(T^+) and D(T^+ T) = D(T)", _vacuous, kind="vacuous"),
        single("thm-2.10-3", "N(T) = N((T*)^+), right side by the carrier inverse",
                _null_of_adjoint_pinv_by_definition, kind="subspace"),
        single("thm-2.11", "T = T T* (T*)^+", _cogram_times_adjoint_pinv),
        single("thm-2.12", "T = (T*)^+ T* T", _adjoint_pinv_times_gram),
        single("thm-2.13", "(T^+)* = T T^+ (T^+)*", _range_projector_on_adjoint_pinv),
        single("thm-2.14", "(T^+)* T^+ T = (T^+)*", _adjoint_pinv_on_domain_projector),
        single("thm-2.15", "T* = (T^+ T)* T*", _domain_projector_adjoint_on_adjoint),
        single("thm-2.16", "T* = T^+ T T*", _domain_projector_on_adjoint),
        pair("thm-3.1", "(T1 (+) T2)^+ = T1^+ (+) T2^+", _blockwise_pinv),
        pair("thm-3.1-proj", "range and null projectors of T1 (+) T2 split blockwise", _blockwise_projectors),
        pair("cor-3.2", "(T1 (+) T2 (+) T1*)^+ = T1^+ (+) T2^+ (+) (T1*)^+", _blockwise_pinv_threefold),
        pair("lem-3.3", "(T1 (+) T2)* = T1* (+) T2*", _adjoint_of_direct_sum),
        pair("cor-3.4", "((T1 (+) T2)^+)* = ((T1 (+) T2)*)^+", _pinv_adjoint_of_direct_sum),
        pair("cor-3.4-n", "((T1 (+) T2 (+) T2*)^+)* = ((T1 (+) T2 (+) T2*)*)^+", _pinv_adjoint_of_threefold_sum),
        pair("cor-3.6", "gamma(T1 (+) T2) = min(gamma(T1), gamma(T2))", _gamma_of_direct_sum, min_rank=1),
        pair("eq-12-13", "||T1^+ (+) T2^+|| = max(||T1^+||, ||T2^+||)", _norm_of_direct_sum),
        pair("thm-3.7", "|(T1 (+) T2)^+| = |T1^+| (+) |T2^+|", _abs_of_pinv_blockwise),
        single("thm-3.7-abs", "|T|^+ = |(T*)^+|", _abs_of_adjoint_pinv),
        single("thm-3.7-step", "(|T*|^2)^+ = (|T*|^+)^2", _abs_square),
        pair("cor-3.8", "|T1 (+) T2|^+ = |T1|^+ (+) |T2|^+", _pinv_of_abs_blockwise),
        perturbation("thm-3.10", "(T + S)^+ = (I + T^+ S)^-1 T^+", _closed_form_update),
        perturbation("thm-3.10-series", "Neumann series of (I + T^+ S)^-1 T^+ matches the closed form", _series_update),
        perturbation("thm-3.10-preserve", "rank(T + S) = rank(T), R(T + S) = R(T) and N(T + S) = N(T)", _preservation,
                    kind="subspace"),
    ]
    return tuple(sorted(entries, key=lambda e: e.id))

def registry() -> list[IdentitySpec]:
    """All catalog entries sorted by id."""
    return list(_catalog())

def identity_by_id(identity_id: str) -> IdentitySpec:
    for spec in _catalog():
        if spec.id == identity_id:
            return spec
    raise KeyError(f"No identity with id {identity_id}")

def effective_tol(spec: IdentitySpec, tol: float) -> float:
    """Subspace identities are judged at the projector tolerance at least."""
    return max(tol, SUBSPACE_TOL) if spec.kind == "subspace" else tol

def _evaluate(spec: IdentitySpec, ops: tuple[Operator, ...], trial: int) -> float:
    try:
        value = float(spec.residual(ops))
    except (ArithmeticError, RuntimeError, ValueError) as e:
        _log.warning("Identity %s failed on trial %d with %s: %s", spec.id, trial, type(e).__name__, e)
        return math.inf
    if math.isnan(value):
        _log.warning("Identity %s produced NaN on trial %d", spec.id, trial)
        return math.inf
    return value

def _draw_rank(rng: np.random.Generator, shape: Shape, min_rank: int) -> int:
    return int(rng.integers(min_rank, min(shape) + 1))

def _instance(spec: IdentitySpec, cfg: InstanceConfig, trial: int) -> tuple[tuple[Operator, ...], list[Shape]]:
    """Operands of one trial, drawn from (seed, identity id, trial)."""
    rng = instance_rng(cfg.seed, spec.id, trial)
    shape = cfg.schedule[trial % len(cfg.schedule)]
    if spec.instances == "perturbation":
        eps = float(rng.uniform(0.05, 0.5))
        t, s = random_admissible_pair(rng, *shape, _draw_rank(rng, shape, 0), eps, cfg.sigma_range)
        return (t, s), [shape]
    t = Dense(random_matrix(rng, *shape, _draw_rank(rng, shape, spec.min_rank), cfg.sigma_range))
    if spec.instances == "single":
        return (t,), [shape]
    other = cfg.schedule[(trial + 1) % len(cfg.schedule)]
    t2 = Dense(random_matrix(rng, *other, _draw_rank(rng, other, spec.min_rank), cfg.sigma_range))
    return (t, t2), [shape, other]

def _report(spec: IdentitySpec, residuals: list[float], dims: list[Shape], tol: float, seed: int) -> IdentityReport:
    max_residual = max(residuals, default=0.0)
    judged = effective_tol(spec, tol)
    seen: list[Shape] = []
    for d in dims:
        if d not in seen:
            seen.append(d)
    return IdentityReport(id=spec.id, trials=len(residuals), dims=seen, max_residual=max_residual, tol=judged,
                        passed=max_residual <= judged, seed=seed)

def run_suite(cfg: InstanceConfig, tol: float = DEFAULT_TOL) -> list[IdentityReport]:
    """
    Evaluate every catalog entry over cfg.trials random instances.

    Parameters:
    -----------
    cfg : InstanceConfig
        Seed, number of trials, dimension schedule and singular value range
    tol : float, optional
        Pass threshold on the maximal residual, default 1e-9; subspace identities use max(tol, 1e-8)

    Returns:
    --------
    list of IdentityReport
        One report per catalog entry sorted by id; empty when cfg.trials is 0

    Warns:
    ------
    VacuousSuiteWarning
        If cfg.trials is 0
    """
    if cfg.trials == 0:
        warnings.warn("No trials requested; the identity suite passes vacuously", VacuousSuiteWarning, stacklevel=2)
        return []

    reports = []
    for spec in _catalog():
        residuals = []
        dims: list[Shape] = []
        for trial in range(cfg.trials):
            ops, shapes = _instance(spec, cfg, trial)
            dims.extend(shapes)
            residuals.append(_evaluate(spec, ops, trial))
        report = _report(spec, residuals, dims, tol, cfg.seed)
        _log.debug("%s: max residual %.3e over %d trials", spec.id, report.max_residual, report.trials)
        if not report.passed:
            _log.warning("Identity %s failed: max residual %.3e > %.1e", spec.id, report.max_residual, report.tol)
        reports.append(report)
    return reports

def run_on_operator(op: OperatorLike, tol: float = DEFAULT_TOL) -> list[IdentityReport]:
    """
    Evaluate every catalog entry once on a fixed operator T.

    Pair identities use (T, T); perturbation identities use S = 0.25 T, which keeps N(T) in N(S)
    and R(S) in R(T) with ||T^+ S|| = ||S T^+|| = 0.25. Entries needing a larger rank than T has
    are reported with zero trials.
    """
    op = as_operator(op)
    op_rank = rank(op, rtol=RANK_RTOL)
    reports = []
    for spec in _catalog():
        if op_rank < spec.min_rank:
            reports.append(_report(spec, [], [], tol, 0))
            continue
        if spec.instances == "single":
            ops: tuple[Operator, ...] = (op,)
        elif spec.instances == "pair":
            ops = (op, op)
        else:
            ops = (op, scale(op, FIXED_PERTURBATION))
        reports.append(_report(spec, [_evaluate(spec, ops, 0)], [op.shape], tol, 0))
    return reports

def suite_passed(reports: list[IdentityReport]) -> bool:
    return all(r.passed for r in reports)


__all__ = ["IdentitySpec", "IdentityReport", "InstanceConfig", "DEFAULT_SEED", "DEFAULT_TRIALS", "DEFAULT_TOL",
            "DEFAULT_SCHEDULE", "DEFAULT_SIGMA_RANGE", "STRESS_SIGMA_RANGE", "registry", "identity_by_id",
            "effective_tol", "stress_config", "random_operator", "run_suite", "run_on_operator", "suite_passed"]

wrap_functions_with_tolerance(__name__, check_tolerance, __all__)

"""
Command-line front end.

    pypinv verify   [--seed N] [--trials N] [--tol X] [--dims 2x2,3x5] [--stress]
    pypinv converge [--family NAME] [--n-list 4,8,16] [--probe NAME]
    pypinv pinv     MATRIX [--rank-tol X]
    pypinv perturb  T S [--tol X] [--rank-tol X]

Every command accepts --output PATH, --format {json,csv} and -v/--verbose. Exit codes:
0 success, 1 a check or computation failed, 2 usage error. Data goes to stdout or the output file,
diagnostics to stderr.
"""

from __future__ import annotations

import sys
import logging
import argparse
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .__about__ import __version__
from ._errors import (DimensionMismatchError, MatrixParseError, RestrictedSystemError, SeriesNotConvergedError,
                      SvdConvergenceError, UndefinedGammaError, UnknownFamilyError, VacuousSuiteWarning)
from ._io_utils import matrix_to_csv, matrix_to_json, read_matrix, records_to_csv, to_json_text, write_text
from ._utils import Shape, format_real, normalized_residual
from .identities import (DEFAULT_SCHEDULE, DEFAULT_SEED, DEFAULT_TOL, DEFAULT_TRIALS, InstanceConfig, run_suite,
                        stress_config, suite_passed)
from .operators import Dense, add, materialize
from .perturbation import check_conditions, perturbed_pinv
from .pinv import pinv
from .truncation import convergence_study, family_by_name, is_non_increasing, probe_by_name

_log = logging.getLogger(__name__)

Command = Literal["verify", "converge", "pinv", "perturb"]
OutputFormat = Literal["json", "csv"]

DEFAULT_N_LIST = (4, 8, 16, 32)
REPORT_COLUMNS = ["id", "trials", "dims", "max_residual", "tol", "pass", "seed"]
RECORD_COLUMNS = ["n", "residual", "tail"]


@dataclass(frozen=True)
class CliConfig:
    """Parsed command line; one instance per invocation."""
    command: Command
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    tol: float = DEFAULT_TOL
    dims: Optional[tuple[Shape, ...]] = None
    stress: bool = False
    family: str = "diag-unbounded"
    probe: Optional[str] = None
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    inputs: tuple[str, ...] = ()
    rank_tol: Optional[float] = None
    output: Optional[str] = None
    format: OutputFormat = "json"
    verbose: bool = False


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value

def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    if not (np.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text!r}")
    return value

def _n_list(text: str) -> tuple[int, ...]:
    try:
        ns = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not ns or ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise argparse.ArgumentTypeError(f"truncation sizes must be positive and strictly ascending, got {text!r}")
    return ns

def _dims(text: str) -> tuple[Shape, ...]:
    shapes = []
    for part in text.split(","):
        try:
            m, n = (int(x) for x in part.lower().split("x"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected shapes like 2x2,3x5, got {text!r}") from None
        if m < 1 or n < 1:
            raise argparse.ArgumentTypeError(f"shape dimensions must be positive, got {part!r}")
        shapes.append((m, n))
    return tuple(shapes)

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="Write data to this file instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Output format (default json)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(prog="pypinv", description="Moore-Penrose pseudoinverse lab")
    parser.add_argument("--version", action="version", version=f"pypinv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", parents=[common], help="Run the identity suite on random instances")
    p_verify.add_argument("--seed", type=_non_negative_int, default=DEFAULT_SEED)
    p_verify.add_argument("--trials", type=_non_negative_int, default=DEFAULT_TRIALS)
    p_verify.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL, help="Pass threshold on residuals")
    p_verify.add_argument("--dims", type=_dims, default=None, help="Dimension schedule, e.g. 2x2,3x5,5x3")
    p_verify.add_argument("--stress", action="store_true", help="Near-singular spectra down to 1e-14")
    p_verify.set_defaults(func=cmd_verify)

    p_converge = sub.add_parser("converge", parents=[common], help="Truncation convergence study")
    p_converge.add_argument("--family", default="diag-unbounded")
    p_converge.add_argument("--n-list", type=_n_list, default=DEFAULT_N_LIST, help="Ascending sizes, e.g. 4,8,16")
    p_converge.add_argument("--probe", default=None, help="harmonic, finite or constant")
    p_converge.set_defaults(func=cmd_converge)

    p_pinv = sub.add_parser("pinv", parents=[common], help="Pseudoinverse of a matrix file")
    p_pinv.add_argument("inputs", nargs=1, metavar="MATRIX", help="Matrix file (.json or CSV)")
    p_pinv.add_argument("--rank-tol", type=_positive_float, default=None, help="Rank tolerance")
    p_pinv.set_defaults(func=cmd_pinv)

    p_perturb = sub.add_parser("perturb", parents=[common], help="Closed-form pseudoinverse of T + S")
    p_perturb.add_argument("inputs", nargs=2, metavar="MATRIX", help="Matrix files T and S of equal shape")
    p_perturb.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL,
                            help="Threshold on the agreement residual")
    p_perturb.add_argument("--rank-tol", type=_positive_float, default=None, help="Rank tolerance")
    p_perturb.set_defaults(func=cmd_perturb)
    return parser

def _config(args: argparse.Namespace) -> CliConfig:
    fields = {k: v for k, v in vars(args).items() if k in CliConfig.__dataclass_fields__}
    if "inputs" in fields:
        fields["inputs"] = tuple(fields["inputs"])
    return CliConfig(**fields)

def _diagnostic(line: str) -> None:
    print(line, file=sys.stderr)

def _emit(cfg: CliConfig, text: str) -> None:
    write_text(text, cfg.output)

def cmd_verify(cfg: CliConfig) -> int:
    if cfg.stress:
        instances = stress_config(cfg.seed, cfg.trials, cfg.dims)
    else:
        schedule = cfg.dims or DEFAULT_SCHEDULE
        max_dim = max(12, *(max(shape) for shape in schedule))
        instances = InstanceConfig(seed=cfg.seed, trials=cfg.trials, max_dim=max_dim, schedule=schedule)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reports = run_suite(instances, cfg.tol)
    for w in caught:
        if issubclass(w.category, VacuousSuiteWarning):
            _log.warning("vacuous suite: %s", w.message)
        else:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)

    records = [r.to_dict() for r in reports]
    if cfg.format == "csv":
        flat = [{**r, "dims": ";".join(f"{m}x{n}" for m, n in r["dims"])} for r in records]
        _emit(cfg, records_to_csv(flat, REPORT_COLUMNS))
    else:
        _emit(cfg, to_json_text(records))
    failed = [r.id for r in reports if not r.passed]
    _log.info("%d of %d identities passed", len(reports) - len(failed), len(reports))
    if failed:
        _log.warning("Failed identities: %s", ", ".join(failed))
    return 0 if suite_passed(reports) else 1

def cmd_converge(cfg: CliConfig) -> int:
    fam = family_by_name(cfg.family)
    probe_name = cfg.probe or ("constant" if fam.domain == "grid" else "harmonic")
    probe = probe_by_name(probe_name)
    records = convergence_study(fam, probe, list(cfg.n_list))

    rows = [{"n": r.n, "residual": r.residual, "tail": r.tail} for r in records]
    if cfg.format == "csv":
        _emit(cfg, records_to_csv(rows, RECORD_COLUMNS))
    else:
        _emit(cfg, to_json_text(rows))
    if not is_non_increasing(records):
        _log.warning("Residuals of %s with probe %s increase with n", fam.name, probe.name)
        return 1
    return 0

def cmd_pinv(cfg: CliConfig) -> int:
    result = pinv(Dense(read_matrix(cfg.inputs[0])), cfg.rank_tol)
    matrix = materialize(result.pinv)
    if cfg.format == "csv":
        _emit(cfg, matrix_to_csv(matrix))
        _diagnostic(f"rank: {result.rank}")
        if result.gamma is not None:
            _diagnostic(f"gamma: {format_real(result.gamma)}")
        _diagnostic("sigma: " + ",".join(format_real(s) for s in result.sigma))
        return 0
    data = {"pinv": matrix_to_json(matrix), "rank": result.rank, "tol_used": result.tol_used}
    if result.gamma is not None:
        data["gamma"] = result.gamma
    data["sigma"] = [float(s) for s in result.sigma]
    _emit(cfg, to_json_text(data))
    return 0

def cmd_perturb(cfg: CliConfig) -> int:
    t = Dense(read_matrix(cfg.inputs[0]))
    s = Dense(read_matrix(cfg.inputs[1]))
    check = check_conditions(t, s, cfg.rank_tol)
    data: dict = {"check": asdict(check)}

    if not check.admissible:
        _log.warning("Perturbation is not admissible: %s", check)
        if cfg.format == "csv":
            for key, value in data["check"].items():
                _diagnostic(f"{key}: {value}")
        else:
            _emit(cfg, to_json_text(data))
        return 1

    update = materialize(perturbed_pinv(t, s, cfg.rank_tol))
    direct = materialize(pinv(add(t, s), cfg.rank_tol).pinv)
    residual = normalized_residual(update, direct)
    if cfg.format == "csv":
        _emit(cfg, matrix_to_csv(update))
        for key, value in data["check"].items():
            _diagnostic(f"{key}: {value}")
        _diagnostic(f"residual: {format_real(residual)}")
    else:
        data["pinv"] = matrix_to_json(update)
        data["residual"] = residual
        _emit(cfg, to_json_text(data))
    if residual > cfg.tol:
        _log.warning("Closed form and direct pseudoinverse differ: residual %.3e > %.1e", residual, cfg.tol)
        return 1
    return 0

def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `pypinv` console script; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = _config(args)
    func: Callable[[CliConfig], int] = args.func
    try:
        return func(cfg)
    except (MatrixParseError, DimensionMismatchError, UnknownFamilyError, ValueError) as e:
        _log.error("%s: %s", cfg.command, e.args[0] if isinstance(e, KeyError) and e.args else e)
        return 2
    except (RestrictedSystemError, SeriesNotConvergedError, SvdConvergenceError, UndefinedGammaError) as e:
        _log.error("%s: computation failed: %s", cfg.command, e)
        return 1


__all__ = ["CliConfig", "build_parser", "cmd_verify", "cmd_converge", "cmd_pinv", "cmd_perturb", "main"]


if __name__ == "__main__":
    sys.exit(main())

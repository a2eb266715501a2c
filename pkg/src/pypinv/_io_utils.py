"""I/O utility functions for reading matrices and writing reports."""

from __future__ import annotations

import io
import sys
from json import dumps, loads
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd

from ._errors import MatrixParseError
from ._utils import ComplexArray, format_real


def _matrix_from_json(obj: Any) -> ComplexArray:
    """Matrix from the {"rows": m, "cols": n, "entries": [[re, im], ...]} layout, entries row-major."""
    if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= obj.keys():
        raise MatrixParseError("Matrix JSON needs the keys 'rows', 'cols' and 'entries'")
    rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise MatrixParseError(f"Matrix dimensions must be positive integers, got {rows!r} x {cols!r}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise MatrixParseError(f"Expected {rows * cols} entries for a {rows}x{cols} matrix")
    try:
        pairs = np.array(entries, dtype=float)
    except (TypeError, ValueError) as e:
        raise MatrixParseError(f"Matrix entries must be [re, im] pairs of numbers: {e}") from e
    if pairs.shape != (rows * cols, 2):
        raise MatrixParseError("Matrix entries must be [re, im] pairs of numbers")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(rows, cols)

def read_matrix_json(path: str | Path) -> ComplexArray:
    """
    Read a matrix file in the JSON layout.

    Parameters:
    -----------
    path : str or Path
        Path to a JSON document {"rows": m, "cols": n, "entries": [[re, im], ...]}

    Returns:
    --------
    ndarray
        m x n complex matrix

    Raises:
    -------
    MatrixParseError
        If the file cannot be read, is not valid JSON or does not describe a finite matrix
    """
    try:
        obj = loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise MatrixParseError(f"Matrix file {path} could not be read.") from e
    except ValueError as e:
        raise MatrixParseError(f"Matrix file {path} is not valid JSON: {e}") from e
    return _check_finite(_matrix_from_json(obj), path)

def read_matrix_csv(path: str | Path) -> ComplexArray:
    """
    Read a real matrix stored as m lines of n comma-separated decimals.

    Parameters:
    -----------
    path : str or Path
        Path to the CSV file, no header

    Returns:
    --------
    ndarray
        m x n complex matrix with zero imaginary parts

    Raises:
    -------
    MatrixParseError
        If the file cannot be read, is ragged, has non-numeric cells or NaN/Inf entries
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=float, skip_blank_lines=True)
    except OSError as e:
        raise MatrixParseError(f"Matrix file {path} could not be read.") from e
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise MatrixParseError(f"Matrix file {path} is not a numeric CSV matrix: {e}") from e
    return _check_finite(frame.to_numpy(dtype=float).astype(np.complex128), path)

def read_matrix(path: str | Path) -> ComplexArray:
    """Read a matrix file, choosing the JSON layout for .json files and CSV otherwise."""
    if Path(path).suffix.lower() == ".json":
        return read_matrix_json(path)
    return read_matrix_csv(path)

def _check_finite(arr: ComplexArray, path: str | Path) -> ComplexArray:
    # NaN cells in a CSV are also how pandas reports missing values of a ragged row
    if not np.all(np.isfinite(arr)):
        raise MatrixParseError(f"Matrix file {path} has NaN, Inf or missing entries")
    return arr

def matrix_to_json(arr: ComplexArray) -> dict:
    """JSON layout of a matrix, entries row-major as [re, im] pairs."""
    arr = np.asarray(arr, dtype=np.complex128)
    return {"rows": arr.shape[0], "cols": arr.shape[1],
            "entries": [[float(z.real), float(z.imag)] for z in arr.ravel()]}

def format_complex(z: complex) -> str:
    """Python complex literal re+imj with round-trip parts, or the real part alone when im == 0."""
    if z.imag == 0:
        return format_real(z.real)
    sign = "-" if np.signbit(z.imag) else "+"
    return f"{format_real(z.real)}{sign}{format_real(abs(z.imag))}j"

def matrix_to_csv(arr: ComplexArray) -> str:
    """m lines of comma-separated entries; real decimals if the matrix is real, complex literals otherwise."""
    arr = np.asarray(arr, dtype=np.complex128)
    if np.all(arr.imag == 0):
        lines = [",".join(format_real(x) for x in row.real) for row in arr]
    else:
        lines = [",".join(format_complex(z) for z in row) for row in arr]
    return "\n".join(lines) + "\n"

def write_text(text: str, path: str | Path | None = None, stream: TextIO | None = None) -> None:
    """Write to the file at `path`, or to `stream` (stdout by default)."""
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    else:
        (stream or sys.stdout).write(text)

def to_json_text(data: Any) -> str:
    """Deterministic JSON: fixed indentation, shortest round-trip floats."""
    return dumps(data, indent=2, allow_nan=False) + "\n"

def records_to_csv(records: list[dict], columns: list[str]) -> str:
    """CSV table with one row per record and a header even when there are no records."""
    buffer = io.StringIO()
    pd.DataFrame.from_records(records, columns=columns).to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()

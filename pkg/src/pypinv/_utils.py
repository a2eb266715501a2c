"""Core utility functions."""

from __future__ import annotations

import sys
import math
import functools
import inspect
from typing import Union, Sequence, Tuple
from typing_extensions import TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._errors import InvalidToleranceError, NonFiniteEntryError, RestrictedSystemError

EPS = 2.0 ** -52
SUBSPACE_TOL = 1e-8

ComplexArray: TypeAlias = NDArray[np.complex128]
RealArray: TypeAlias = NDArray[np.float64]
Shape: TypeAlias = Tuple[int, int]
Schedule: TypeAlias = Sequence[Shape]
Tolerance: TypeAlias = Union[float, None]


def _run_before_decorator(before_func):
    """Returns a decorator that runs the specified `before_func` on the `tol` argument before the wrapped function."""
    def decorator(func):
        sig = inspect.signature(func)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            bound_args = sig.bind(*args, **kwargs)
            bound_args.apply_defaults()

            if "tol" in bound_args.arguments:
                before_func(bound_args.arguments["tol"])

            return func(*args, **kwargs)

        return wrapper
    return decorator

def wrap_functions_with_tolerance(module_name, before_func, func_list):
    """Dynamically wraps all listed functions with a 'tol' parameter in the given module."""
    module = sys.modules[module_name]

    for name in dir(module):
        attr = getattr(module, name)
        if inspect.isfunction(attr) and name != before_func.__name__ and name in func_list:
            sig = inspect.signature(attr)
            if "tol" in sig.parameters:
                setattr(module, name, _run_before_decorator(before_func)(attr))

def check_tolerance(tol: Tolerance) -> None:
    """
    Validate an optional tolerance.

    Parameters:
    -----------
    tol : float or None
        Tolerance to validate. None means "use the default".

    Raises:
    -------
    InvalidToleranceError
        If the tolerance is not a positive finite real
    """
    if tol is None:
        return
    if isinstance(tol, bool) or not isinstance(tol, (int, float, np.floating, np.integer)):
        raise InvalidToleranceError(f"Tolerance must be a real number, got {tol!r}")
    if not math.isfinite(tol) or tol <= 0:
        raise InvalidToleranceError(f"Tolerance must be positive and finite, got {tol!r}")

def default_tolerance(shape: Shape, sigma_max: float) -> float:
    """Rank tolerance max(m, n) * sigma_max * 2^-52, or 2^-52 for the zero operator."""
    if sigma_max == 0:
        return EPS
    return max(shape) * sigma_max * EPS

def as_complex_array(data: ArrayLike, ndim: int) -> ComplexArray:
    """
    Coerce array-like data to a complex128 array of the given rank.

    Parameters:
    -----------
    data : array_like
        Real or complex entries
    ndim : int
        Required number of dimensions (1 for vectors, 2 for matrices)

    Returns:
    --------
    ndarray
        complex128 copy of the data

    Raises:
    -------
    NonFiniteEntryError
        If any entry is NaN or infinite
    ValueError
        If the data has the wrong number of dimensions
    """
    arr = np.array(data, dtype=np.complex128)
    if arr.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEntryError("NaN or Inf entries are not admitted")
    return arr

def frobenius(arr: ArrayLike) -> float:
    return float(np.linalg.norm(np.asarray(arr), "fro")) if np.size(arr) else 0.0

def normalized_residual(x: ArrayLike, y: ArrayLike) -> float:
    """
    Scale-damped residual ||X - Y||_F / (1 + max(||X||_F, ||Y||_F)).

    Parameters:
    -----------
    x, y : array_like
        Matrices of equal shape

    Returns:
    --------
    float
        Normalized Frobenius residual
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"Residual operands differ in shape: {x.shape} vs {y.shape}")
    return frobenius(x - y) / (1.0 + max(frobenius(x), frobenius(y)))

def hermitian_part(arr: ComplexArray) -> ComplexArray:
    return (arr + arr.conj().T) / 2

def catch_linalg_error(exc_type: BaseException, error: Exception) -> None:
    """
    Throw user-friendly errors for failed dense solves.

    Parameters:
    -----------
    exc_type : BaseException
        Exception data
    error : Exception
        Exception thrown

    Returns:
    --------
    None
    """
    if exc_type.__name__ == "LinAlgError":
        raise RestrictedSystemError(f"Dense solve failed, the system is singular: {error}") from error
    raise error

def format_real(value: float) -> str:
    """Shortest round-trip decimal representation of a float (at most 17 significant digits)."""
    return repr(float(value))

"""
Array validation and scale-aware tolerances shared across modules.
"""

import numpy as np

from totalpos.errors import InputError


def as_matrix(A, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """
    Validate and convert to a float 2-D array.

    Args:
        A: Array-like matrix
        square: Require rows == cols
        name: Name used in error messages

    Returns:
        Float ndarray (a copy only when conversion requires one)

    Raises:
        InputError: If the input is not a finite, non-empty 2-D array
    """
    try:
        arr = np.asarray(A, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name} is not numeric: {e}")
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InputError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name} must be square, got {arr.shape[0]}x{arr.shape[1]}")
    return arr


def as_vector(x, *, n: int = None, name: str = "vector") -> np.ndarray:
    """
    Validate and convert to a float 1-D array, optionally of length n.

    Raises:
        InputError: On wrong shape, length or non-finite entries
    """
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name} is not numeric: {e}")
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise InputError(f"{name} must have length {n}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def inf_norm(arr) -> float:
    """Largest absolute entry (0.0 for an empty array)."""
    arr = np.asarray(arr)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def scaled_tol(tol: float, arr) -> float:
    """tol * max(1, ||arr||_inf)."""
    return tol * max(1.0, inf_norm(arr))


def sign_codes(values: np.ndarray, threshold: float) -> np.ndarray:
    """Entrywise -1 / 0 / +1 with |v| <= threshold mapped to 0."""
    values = np.asarray(values, dtype=float)
    codes = np.sign(values).astype(int)
    codes[np.abs(values) <= threshold] = 0
    return codes

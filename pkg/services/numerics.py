"""
Shared numeric helpers: input coercion, scaled residuals and deterministic
weighted reductions.
"""

import logging
from typing import Optional

import numpy as np

from services.errors import InputRejectedError

logger = logging.getLogger(__name__)

_TINY = np.finfo(float).tiny


def as_vector(value, dim: Optional[int] = None, name: str = 'vector') -> np.ndarray:
    """Coerce to a finite complex 1-D array, optionally checking its length."""
    arr = np.asarray(value, dtype=complex)
    if arr.ndim != 1:
        raise InputRejectedError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise InputRejectedError(f"{name} must have dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InputRejectedError(f"{name} has non-finite entries")
    return arr


def as_square_matrix(value, name: str = 'matrix', dtype=complex) -> np.ndarray:
    arr = np.asarray(value, dtype=dtype)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputRejectedError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputRejectedError(f"{name} has non-finite entries")
    return arr


def scaled_residual(measured, expected, scale: float = 1.0) -> float:
    """Largest absolute deviation divided by ``scale`` (floored away from zero)."""
    diff = np.max(np.abs(np.asarray(measured) - np.asarray(expected)), initial=0.0)
    return float(diff / max(float(scale), _TINY))


def relative_residual(measured, expected) -> float:
    """Deviation relative to the larger of the two magnitudes; 0 when both vanish."""
    m = np.asarray(measured)
    e = np.asarray(expected)
    scale = max(np.max(np.abs(m), initial=0.0), np.max(np.abs(e), initial=0.0))
    if scale == 0.0:
        return 0.0
    return scaled_residual(m, e, scale)


def weighted_sum(values: np.ndarray, weights: np.ndarray, axis: int = 0) -> np.ndarray:
    """Weighted sum along ``axis`` in node-index order.

    numpy's reduction uses pairwise summation over a fixed memory order, so
    the result is bit-stable for a given input.
    """
    values = np.asarray(values)
    w = np.asarray(weights, dtype=float)
    shape = [1] * values.ndim
    shape[axis] = w.shape[0]
    return np.sum(values * w.reshape(shape), axis=axis)


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

"""src/levyscope/utils/validators.py

Validation utilities for Levyscope.
"""

import math
from typing import Sequence

import numpy as np

__all__ = [
    "is_finite_number",
    "check_positive",
    "check_in_open_interval",
    "check_nonnegative_array",
    "check_symmetric",
]


def is_finite_number(value: object) -> bool:
    """Simple finite real number check."""
    return isinstance(value, (int, float)) and math.isfinite(float(value))


def check_positive(name: str, value: float) -> float:
    """Return ``value`` as float or raise ValueError if it is not > 0."""
    if not is_finite_number(value) or value <= 0:
        raise ValueError(f"{name} must be a positive real, got {value!r}")
    return float(value)


def check_in_open_interval(name: str, value: float, low: float, high: float) -> float:
    """Return ``value`` as float or raise ValueError outside ``(low, high)``."""
    if not is_finite_number(value) or not low < value < high:
        raise ValueError(f"{name} must lie in ({low}, {high}), got {value!r}")
    return float(value)


def check_nonnegative_array(name: str, values: Sequence[float]) -> np.ndarray:
    """Return ``values`` as a float array or raise ValueError on negatives."""
    array = np.asarray(values, dtype=float)
    if array.size and (not np.all(np.isfinite(array)) or np.any(array < 0)):
        raise ValueError(f"{name} must be finite and nonnegative")
    return array


def check_symmetric(name: str, matrix: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Return ``matrix`` or raise ValueError if it is not square symmetric."""
    array = np.atleast_2d(np.asarray(matrix, dtype=float))
    if array.shape[0] != array.shape[1]:
        raise ValueError(f"{name} must be square, got shape {array.shape}")
    scale = max(1.0, float(np.max(np.abs(array))) if array.size else 1.0)
    if not np.allclose(array, array.T, rtol=0.0, atol=atol * scale):
        raise ValueError(f"{name} must be symmetric")
    return array

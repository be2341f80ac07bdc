"""Input coercion and validation helpers."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def as_univariate(x, min_n: int, name: str = "x") -> np.ndarray:
    """Coerce to a finite float64 vector with at least ``min_n`` entries."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValidationError(
            f"{name} must be univariate, got shape {np.shape(x)}"
        )
    if arr.shape[0] < min_n:
        raise ValidationError(
            f"{name} needs at least {min_n} observations, got {arr.shape[0]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def as_matrix(X, min_n: int, name: str = "X") -> np.ndarray:
    """Coerce to a finite float64 matrix of shape (n, d); vectors become one column."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValidationError(f"{name} must be an (n, d) matrix, got shape {np.shape(X)}")
    if arr.shape[0] < min_n:
        raise ValidationError(
            f"{name} needs at least {min_n} observations, got {arr.shape[0]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def as_paired(X, Y, min_n: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Validate a matched sample pair sharing the observation index."""
    Xa = as_matrix(X, min_n, "X")
    Ya = as_matrix(Y, min_n, "Y")
    if Xa.shape[0] != Ya.shape[0]:
        raise ValidationError(
            f"X and Y must have equal row counts, got {Xa.shape[0]} and {Ya.shape[0]}"
        )
    return Xa, Ya

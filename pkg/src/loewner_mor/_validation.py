"""Input checks for the estimator API."""

import numpy as np

from .exceptions import DataError


def check_points(X, name="X"):
    """Flatten ``X`` of shape (n,) or (n, 1) to a finite complex vector."""
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise DataError(f"{name} must have shape (n,) or (n, 1), got {np.shape(X)}")
    if arr.dtype.kind not in "biufc":
        raise DataError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite entries")
    return arr


def check_frequency_data(X, y):
    points = check_points(X)
    values = check_points(y, name="y")
    if points.shape != values.shape:
        raise DataError(f"X and y have inconsistent lengths {points.size} and {values.size}")
    if points.size < 2:
        raise DataError("at least two samples are required")
    return points, values

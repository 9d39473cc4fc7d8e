"""Per-column min-max scaling to [0, 1] with an exact inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NonFiniteInput


@dataclass(frozen=True)
class ScaledDataset:
    """Feature matrix scaled to [0, 1] per column, with the fit parameters.

    Columns that were constant map to 0.  labels is an optional per-row
    sequence where None marks rows without a solved/unsolved label.
    """

    X: np.ndarray
    mins: np.ndarray
    maxs: np.ndarray
    labels: tuple | None = None


def minmax_scale(
    X_raw,
    params: tuple[np.ndarray, np.ndarray] | None = None,
    labels=None,
) -> ScaledDataset:
    """Scale columns as (x - min) / (max - min), fitting or reusing params."""
    X = np.asarray(X_raw, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a 2-D feature matrix")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("feature matrix contains NaN or infinity")
    if params is None:
        mins = X.min(axis=0)
        maxs = X.max(axis=0)
    else:
        mins = np.asarray(params[0], dtype=float)
        maxs = np.asarray(params[1], dtype=float)
    span = maxs - mins
    safe = np.where(span == 0.0, 1.0, span)
    scaled = (X - mins) / safe
    scaled[:, span == 0.0] = 0.0
    return ScaledDataset(scaled, mins, maxs, tuple(labels) if labels is not None else None)


def minmax_inverse(X_scaled, mins, maxs) -> np.ndarray:
    """Map scaled coordinates back to raw feature values."""
    X = np.asarray(X_scaled, dtype=float)
    return X * (np.asarray(maxs) - np.asarray(mins)) + np.asarray(mins)

"""Invertible low-dimensional latent spaces: PCA and non-negative NNMF.

PCA is the default (deterministic spectral decomposition of the covariance
with a fixed sign convention); NNMF with multiplicative updates is the
alternative that keeps the inverse transform entrywise non-negative.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import RankDeficient
from .scaling import ScaledDataset

log = logging.getLogger(__name__)

NNMF_EPS = 1e-12


def _as_matrix(X) -> np.ndarray:
    if isinstance(X, ScaledDataset):
        X = X.X
    return np.asarray(X, dtype=float)


@dataclass(frozen=True)
class LatentModel:
    """A fitted latent space with the training embedding and its bounds.

    PCA stores orthonormal `components` (dim x D), the column `mean`, and
    explained-variance fractions; NNMF stores the factor matrices so that
    X ~= W @ H with `embedding` = W.  bounds[i] = (min, max) of latent axis i
    over the training embedding.
    """

    kind: str
    dim: int
    embedding: np.ndarray
    bounds: np.ndarray
    components: np.ndarray | None = None
    mean: np.ndarray | None = None
    explained_variance: np.ndarray | None = None
    h: np.ndarray | None = None
    converged: bool = True
    reconstruction_error: float = 0.0

    def transform(self, X) -> np.ndarray:
        if self.kind != "pca":
            raise NotImplementedError("only the PCA latent space embeds new points")
        return (np.asarray(X, dtype=float) - self.mean) @ self.components.T

    def inverse(self, W) -> np.ndarray:
        """Map latent coordinates back into (scaled) feature space."""
        W = np.asarray(W, dtype=float)
        if self.kind == "pca":
            return W @ self.components + self.mean
        return W @ self.h


def _bounds_of(embedding: np.ndarray) -> np.ndarray:
    return np.column_stack([embedding.min(axis=0), embedding.max(axis=0)])


def pca_fit(X, dim: int) -> LatentModel:
    """Top-`dim` principal components via eigendecomposition of the covariance.

    Sign convention: each component's largest-magnitude coordinate is positive,
    which makes the embedding reproducible across runs and row orders.
    """
    X = _as_matrix(X)
    n, d = X.shape
    if dim > d:
        raise RankDeficient(f"latent dim {dim} exceeds feature dim {d}")
    if np.unique(X, axis=0).shape[0] < dim:
        raise RankDeficient(f"fewer than {dim} distinct rows")
    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / max(n - 1, 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals, kind="stable")[::-1][:dim]
    components = eigvecs[:, order].T.copy()
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    total = eigvals.sum()
    fractions = eigvals[order] / total if total > 0 else np.zeros(dim)
    embedding = centered @ components.T
    return LatentModel(
        kind="pca",
        dim=dim,
        embedding=embedding,
        bounds=_bounds_of(embedding),
        components=components,
        mean=mean,
        explained_variance=fractions,
    )


def nnmf_fit(
    X,
    dim: int,
    max_iter: int = 2000,
    tol: float = 1e-9,
    seed: int = 0,
) -> LatentModel:
    """Multiplicative-update factorization X ~= W H with W, H >= 0.

    Starts from seeded uniform factors and iterates until the relative
    Frobenius-error improvement drops below tol or max_iter is reached; a
    stalled fit is returned with converged=False.
    """
    X = _as_matrix(X)
    if np.any(X < 0):
        raise ValueError("NNMF input must be entrywise non-negative")
    n, d = X.shape
    if dim > d:
        raise RankDeficient(f"latent dim {dim} exceeds feature dim {d}")
    rng = np.random.default_rng(seed)
    scale = np.sqrt(max(X.mean(), NNMF_EPS) / dim)
    W = rng.uniform(0.0, 1.0, size=(n, dim)) * scale + NNMF_EPS
    H = rng.uniform(0.0, 1.0, size=(dim, d)) * scale + NNMF_EPS

    prev_error = np.inf
    converged = False
    error = float(np.linalg.norm(X - W @ H))
    for _ in range(max_iter):
        H *= (W.T @ X) / (W.T @ W @ H + NNMF_EPS)
        W *= (X @ H.T) / (W @ H @ H.T + NNMF_EPS)
        error = float(np.linalg.norm(X - W @ H))
        if prev_error - error < tol * max(error, NNMF_EPS):
            converged = True
            break
        prev_error = error
    if not converged:
        log.warning("NNMF stopped at max_iter=%d with error %.3e", max_iter, error)
    return LatentModel(
        kind="nnmf",
        dim=dim,
        embedding=W,
        bounds=_bounds_of(W),
        h=H,
        converged=converged,
        reconstruction_error=error,
    )

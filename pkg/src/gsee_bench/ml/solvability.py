"""End-to-end solvability-region estimation for one solver.

Pipeline order: min-max scale the feature table, fit the SVM on the
full-dimensional scaled features of the labeled rows, fit a latent space on
all rows, bound the latent axes by the training embedding, sample latent
points (a uniform grid in 2-D, seeded uniform draws otherwise), inverse
transform the samples back to feature space, clip into the scaled unit box,
and score them with the calibrated SVM.  The solvability ratio is the exact
fraction of samples whose probability meets the threshold.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientLabels, TooManyFeatures
from .latent import LatentModel, nnmf_fit, pca_fit
from .scaling import minmax_scale
from .shapley import exact_shapley
from .svm import SvmModel, predict_proba, svm_fit_cv

log = logging.getLogger(__name__)

MIN_LABELED_ROWS = 10


@dataclass(frozen=True)
class SolvabilityConfig:
    latent_kind: str = "pca"
    latent_dim: int = 2
    n_samples: int = 10_000
    threshold: float = 0.5
    k_folds: int = 5
    seed: int = 0
    c_grid: tuple[float, ...] | None = None
    gamma_grid: tuple[float, ...] | None = None
    nnmf_max_iter: int = 2000
    attribution_points: int = 3


@dataclass(frozen=True)
class SolvabilityReport:
    """Trained-classifier summary plus the sampled latent map."""

    solvability_ratio: float
    n_samples: int
    threshold: float
    metrics: dict
    latent_points: np.ndarray  # (n, dim) latent coordinates
    probabilities: np.ndarray  # (n,) calibrated probabilities
    latent_kind: str
    latent_dim: int
    bounds: np.ndarray
    seed: int
    grid_resolution: int | None
    best_params: dict
    training_embedding: np.ndarray
    training_labels: tuple  # True / False / None per row
    attributions: dict | None
    feature_names: tuple[str, ...]
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """JSON-ready representation (deterministic float repr via json)."""
        return {
            "solvability_ratio": self.solvability_ratio,
            "n_samples": self.n_samples,
            "threshold": self.threshold,
            "metrics": self.metrics,
            "latent_kind": self.latent_kind,
            "latent_dim": self.latent_dim,
            "bounds": self.bounds.tolist(),
            "seed": self.seed,
            "grid_resolution": self.grid_resolution,
            "best_params": self.best_params,
            "attributions": self.attributions,
            "feature_names": list(self.feature_names),
            "flags": self.flags,
            "training_points": [
                {
                    "latent": row.tolist(),
                    "label": None if lab is None else bool(lab),
                }
                for row, lab in zip(self.training_embedding, self.training_labels)
            ],
            "latent_points": [
                [*row.tolist(), float(p)]
                for row, p in zip(self.latent_points, self.probabilities)
            ],
        }


def grid_samples(bounds: np.ndarray, n_samples: int) -> tuple[np.ndarray, int]:
    """Uniform 2-D grid of about n_samples points over the latent rectangle."""
    r = max(2, math.ceil(math.sqrt(n_samples)))
    axes = [np.linspace(lo, hi, r) for lo, hi in bounds]
    xx, yy = np.meshgrid(axes[0], axes[1], indexing="xy")
    return np.column_stack([xx.ravel(), yy.ravel()]), r


def random_samples(bounds: np.ndarray, n_samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    lo = bounds[:, 0]
    hi = bounds[:, 1]
    return rng.uniform(0.0, 1.0, size=(n_samples, len(bounds))) * (hi - lo) + lo


def _fit_latent(X: np.ndarray, config: SolvabilityConfig) -> LatentModel:
    if config.latent_kind == "pca":
        return pca_fit(X, config.latent_dim)
    if config.latent_kind == "nnmf":
        return nnmf_fit(X, config.latent_dim, max_iter=config.nnmf_max_iter, seed=config.seed)
    raise ValueError(f"unknown latent kind {config.latent_kind!r}")


def _mean_abs_attributions(
    model: SvmModel,
    X_labeled: np.ndarray,
    feature_names: tuple[str, ...],
    n_points: int,
    seed: int,
) -> dict | None:
    d = X_labeled.shape[1]
    if n_points <= 0:
        return None
    try:
        rng = np.random.default_rng(seed)
        background = X_labeled
        if len(background) > 20:
            background = background[rng.choice(len(background), 20, replace=False)]
        explain_idx = np.linspace(0, len(X_labeled) - 1, min(n_points, len(X_labeled)))
        explain_idx = np.unique(explain_idx.astype(int))
        totals = np.zeros(d)
        for i in explain_idx:
            totals += np.abs(
                exact_shapley(
                    lambda rows: predict_proba(model, rows), X_labeled[i], background
                )
            )
        means = totals / len(explain_idx)
        return {name: float(v) for name, v in zip(feature_names, means)}
    except TooManyFeatures as exc:
        log.warning("skipping exact attribution: %s", exc)
        return None


def estimate_solvability(
    features,
    labels,
    config: SolvabilityConfig | None = None,
    feature_names: tuple[str, ...] | None = None,
) -> SolvabilityReport:
    """Run the full solvability pipeline over a feature table.

    labels is one entry per feature row: True (solved), False (unsolved), or
    None for rows that carry no verdict (they still inform scaling, the
    latent fit, and the plotted embedding, but not the classifier).
    """
    config = config or SolvabilityConfig()
    X_raw = np.asarray(features, dtype=float)
    labels = list(labels)
    if len(labels) != X_raw.shape[0]:
        raise ValueError("one label entry per feature row required")
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(X_raw.shape[1]))

    labeled_mask = np.array([lab is not None for lab in labels])
    n_labeled = int(labeled_mask.sum())
    if n_labeled < MIN_LABELED_ROWS:
        raise InsufficientLabels(f"{n_labeled} labeled rows < {MIN_LABELED_ROWS}")

    scaled = minmax_scale(X_raw, labels=labels)
    X_labeled = scaled.X[labeled_mask]
    y_labeled = np.array([bool(lab) for lab, m in zip(labels, labeled_mask) if m])

    model = svm_fit_cv(
        X_labeled,
        y_labeled,
        c_grid=config.c_grid,
        gamma_grid=config.gamma_grid,
        k=config.k_folds,
        seed=config.seed,
    )

    latent = _fit_latent(scaled.X, config)
    if config.latent_dim == 2:
        samples, resolution = grid_samples(latent.bounds, config.n_samples)
    else:
        samples = random_samples(latent.bounds, config.n_samples, config.seed)
        resolution = None

    X_novel = np.clip(latent.inverse(samples), 0.0, 1.0)
    probabilities = predict_proba(model, X_novel)
    ratio = float(np.count_nonzero(probabilities >= config.threshold) / len(probabilities))

    cv = model.mean_cv_metrics()
    attributions = _mean_abs_attributions(
        model, X_labeled, feature_names, config.attribution_points, config.seed
    )

    flags = {
        "svm_degenerate": model.degenerate,
        "svm_converged": model.converged,
        "latent_converged": latent.converged,
        "metrics_zero_division": cv.zero_division,
        "attributions_computed": attributions is not None,
    }
    return SolvabilityReport(
        solvability_ratio=ratio,
        n_samples=len(probabilities),
        threshold=config.threshold,
        metrics={"precision": cv.precision, "recall": cv.recall, "f1": cv.f1},
        latent_points=samples,
        probabilities=probabilities,
        latent_kind=config.latent_kind,
        latent_dim=config.latent_dim,
        bounds=latent.bounds,
        seed=config.seed,
        grid_resolution=resolution,
        best_params={"C": model.penalty, "gamma": model.gamma},
        training_embedding=latent.embedding,
        training_labels=tuple(labels),
        attributions=attributions,
        feature_names=feature_names,
        flags=flags,
    )

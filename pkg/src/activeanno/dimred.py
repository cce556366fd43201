"""Dimensionality reduction by exact PCA.

Covariance eigendecomposition of the (at most ~512-wide) embedding space;
no randomized sketching. Deterministic: components are sign-fixed so the
largest-magnitude coordinate of each component is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingMatrix
from .errors import NumericsError

DEFAULT_VARIANCE_THRESHOLD = 0.95
DEFAULT_MAX_COMPONENTS = 50


@dataclass
class PcaModel:
    mean: np.ndarray                # (d,)
    components: np.ndarray          # (p, d), rows orthonormal
    explained_variance: np.ndarray  # (p,), non-increasing
    total_variance: float

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    @property
    def n_components(self) -> int:
        return int(self.components.shape[0])


def _eigendecompose(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Mean, eigenvalues (descending, clipped at 0), eigenvectors as rows, total variance."""
    if not np.all(np.isfinite(vectors)):
        raise NumericsError("PCA input contains non-finite values")
    n = vectors.shape[0]
    if n < 2:
        raise NumericsError("PCA requires at least 2 points")
    mean = vectors.mean(axis=0)
    centered = vectors - mean
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    components = eigvecs[:, order].T
    # sign convention: largest-magnitude coordinate of each component positive
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    return mean, eigvals, components, float(np.trace(cov))


def fit_pca(E: EmbeddingMatrix, p: int) -> PcaModel:
    """Top-p principal directions of the mean-centered data."""
    n, d = E.vectors.shape
    if p < 1 or p > min(d, n):
        raise NumericsError(f"p={p} out of range, must be in [1, {min(d, n)}]")
    mean, eigvals, components, total = _eigendecompose(E.vectors)
    return PcaModel(
        mean=mean,
        components=np.ascontiguousarray(components[:p]),
        explained_variance=eigvals[:p],
        total_variance=total,
    )


def fit_pca_auto(
    E: EmbeddingMatrix,
    variance_threshold: float = DEFAULT_VARIANCE_THRESHOLD,
    max_components: int = DEFAULT_MAX_COMPONENTS,
) -> PcaModel:
    """Smallest p capturing >= ``variance_threshold`` of total variance, capped."""
    n, d = E.vectors.shape
    mean, eigvals, components, total = _eigendecompose(E.vectors)
    cap = min(max_components, d, n)
    if total <= 0.0:
        p = 1
    else:
        cum = np.cumsum(eigvals)
        reached = np.nonzero(cum >= variance_threshold * total - 1e-12)[0]
        p = int(reached[0]) + 1 if reached.size else len(eigvals)
        p = min(p, cap)
    p = max(p, 1)
    return PcaModel(
        mean=mean,
        components=np.ascontiguousarray(components[:p]),
        explained_variance=eigvals[:p],
        total_variance=total,
    )


def transform(model: PcaModel, E: EmbeddingMatrix) -> EmbeddingMatrix:
    """Project rows onto the principal directions: components . (x - mean)."""
    if E.vectors.shape[1] != model.dim:
        raise NumericsError(
            f"dimension mismatch: model expects {model.dim}, got {E.vectors.shape[1]}"
        )
    reduced = (E.vectors - model.mean) @ model.components.T
    return EmbeddingMatrix(
        ids=list(E.ids), vectors=reduced, zero_norm_ids=list(E.zero_norm_ids)
    )


def reconstruction_error(model: PcaModel, E: EmbeddingMatrix) -> float:
    """Sum of squared residuals after projecting onto the model's subspace."""
    centered = E.vectors - model.mean
    projected = (centered @ model.components.T) @ model.components
    return float(np.sum((centered - projected) ** 2))

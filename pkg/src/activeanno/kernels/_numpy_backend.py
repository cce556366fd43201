"""Vectorized numpy implementations of the distance kernels.

Fallback used when the compiled extension is unavailable (or forced via
``AA_KERNELS=py``). Uses the |x|^2 + |c|^2 - 2x.c expansion: tiny negative
values from cancellation are clipped to zero.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def sqdist_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance between every point and every center.

    points: (n, d), centers: (k, d) -> (n, k) float64.
    """
    pn = np.einsum("ij,ij->i", points, points)
    cn = np.einsum("ij,ij->i", centers, centers)
    d = pn[:, None] + cn[None, :] - 2.0 * (points @ centers.T)
    np.maximum(d, 0.0, out=d)
    return d


def assign_nearest(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-center index per point (lowest index on ties) and its squared distance."""
    d = sqdist_matrix(points, centers)
    labels = np.argmin(d, axis=1)
    return labels.astype(np.int64), d[np.arange(d.shape[0]), labels]


def lloyd_step(
    points: np.ndarray, centers: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One Lloyd iteration's bookkeeping: labels, squared distances,
    per-cluster coordinate sums and member counts."""
    labels, sqd = assign_nearest(points, centers)
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    sums = np.zeros((k, points.shape[1]), dtype=np.float64)
    np.add.at(sums, labels, points)
    return labels, sqd, sums, counts


def min_sqdist(points: np.ndarray, refs: np.ndarray) -> np.ndarray:
    """Per point, the squared distance to the closest reference row."""
    return sqdist_matrix(points, refs).min(axis=1)

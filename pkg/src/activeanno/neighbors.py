"""Exact nearest-neighbour search over the reduced embedding space.

Brute force on purpose: at desk scale (<= 1e5 points, <= 50 dims) an
exhaustive scan is fast, fully deterministic and has no recall gap.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .errors import NumericsError


def rank_by_min_distance(
    candidate_ids: Sequence[str],
    candidate_vectors: np.ndarray,
    pivot_vectors: np.ndarray,
) -> list[str]:
    """All candidates ranked ascending by min-over-pivots Euclidean distance,
    ties broken by id ascending."""
    if pivot_vectors.ndim != 2 or pivot_vectors.shape[0] == 0:
        raise NumericsError("pivot set must be non-empty")
    if len(candidate_ids) == 0:
        return []
    d2 = kernels.min_sqdist(candidate_vectors, pivot_vectors)
    order = sorted(range(len(candidate_ids)), key=lambda i: (d2[i], candidate_ids[i]))
    return [candidate_ids[i] for i in order]


def knn_to_pivots(
    candidate_ids: Sequence[str],
    candidate_vectors: np.ndarray,
    pivot_vectors: np.ndarray,
    count: int,
) -> list[str]:
    """First ``count`` ids of the full ranking (fewer if the pool is smaller)."""
    if count < 0:
        raise NumericsError("count must be >= 0")
    return rank_by_min_distance(candidate_ids, candidate_vectors, pivot_vectors)[:count]

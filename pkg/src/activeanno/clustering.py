"""k-means++ clustering and elbow-method selection of the cluster count.

Euclidean metric in the reduced space. Everything is seeded: a fixed seed
yields a byte-identical clustering. Elbow detection is operationalized as
the maximum perpendicular distance from the SSE curve to its chord, on
axes normalized to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .embedding import EmbeddingMatrix
from .errors import NumericsError

DEFAULT_MAX_ITER = 300
DEFAULT_TOL = 1e-6
DEFAULT_K_MIN = 2
DEFAULT_K_CAP = 30
DEFAULT_SEEDS_PER_K = 5


@dataclass
class Clustering:
    k: int
    centroids: np.ndarray           # (k, p)
    assignment: dict[str, int]      # utterance id -> cluster index
    inertia: float
    n_iter: int = 0
    inertia_trace: list[float] = field(default_factory=list)

    def members(self, cluster: int) -> list[str]:
        return [i for i, c in self.assignment.items() if c == cluster]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "centroids": self.centroids.tolist(),
            "assignment": dict(sorted(self.assignment.items())),
            "inertia": self.inertia,
            "n_iter": self.n_iter,
        }


def _vectors_of(points: EmbeddingMatrix | np.ndarray) -> np.ndarray:
    if isinstance(points, EmbeddingMatrix):
        return points.vectors
    return np.asarray(points, dtype=np.float64)


def kmeanspp_seed(
    points: EmbeddingMatrix | np.ndarray,
    k: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> np.ndarray:
    """Pick k initial centroids: first uniform, then D^2-weighted sampling.

    Points already chosen have zero weight; if every remaining weight is
    zero (duplicate points), the lowest-index unchosen point is taken.
    """
    X = _vectors_of(points)
    n = X.shape[0]
    if k < 1:
        raise NumericsError("k must be >= 1")
    if k > n:
        raise NumericsError(f"k={k} exceeds number of points n={n}")
    if not np.all(np.isfinite(X)):
        raise NumericsError("non-finite points")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    chosen = [int(rng.integers(n))]
    d2 = kernels.min_sqdist(X, X[chosen[-1]][None, :])
    while len(chosen) < k:
        total = float(d2.sum())
        if total <= 0.0:
            taken = set(chosen)
            idx = next(i for i in range(n) if i not in taken)
        else:
            idx = int(rng.choice(n, p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, kernels.min_sqdist(X, X[idx][None, :]))
    return X[chosen].copy()


def _step_with_repair(
    X: np.ndarray, centroids: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One assignment pass; empty clusters take the point farthest from its
    assigned centroid (that point becomes the empty cluster's centroid)."""
    labels, sqd, sums, counts = kernels.lloyd_step(X, centroids)
    empties = np.nonzero(counts == 0)[0]
    if empties.size:
        centroids = centroids.copy()
        steal_priority = sqd.copy()  # keeps one point from repairing two clusters
        for j in empties:
            eligible = counts[labels] >= 2  # never empty a singleton cluster
            far = int(np.argmax(np.where(eligible, steal_priority, -1.0)))
            old = labels[far]
            counts[old] -= 1
            sums[old] -= X[far]
            labels[far] = j
            counts[j] = 1
            sums[j] = X[far]
            centroids[j] = X[far]
            sqd[far] = 0.0
            steal_priority[far] = -1.0
    return labels, sqd, sums, counts, centroids


def lloyd(
    points: EmbeddingMatrix,
    init_centroids: np.ndarray,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> Clustering:
    """Alternate assignment/update until the centroid shift drops below tol."""
    X = points.vectors
    ids = points.ids
    if init_centroids.size == 0:
        raise NumericsError("init_centroids must be non-empty")
    if init_centroids.shape[1] != X.shape[1]:
        raise NumericsError("centroid dimension does not match points")
    if not np.all(np.isfinite(X)):
        raise NumericsError("non-finite points")
    if init_centroids.shape[0] > X.shape[0]:
        raise NumericsError("more centroids than points")
    k = init_centroids.shape[0]
    C = np.asarray(init_centroids, dtype=np.float64).copy()

    labels, sqd, sums, counts, C = _step_with_repair(X, C)
    trace = [float(sqd.sum())]
    n_iter = 0
    for _ in range(max_iter):
        n_iter += 1
        C_new = sums / counts[:, None]
        shift = float(np.max(np.linalg.norm(C_new - C, axis=1)))
        C = C_new
        labels, sqd, sums, counts, C = _step_with_repair(X, C)
        trace.append(float(sqd.sum()))
        if shift < tol:
            break

    # canonical order: clusters sorted by their smallest member id
    min_ids = [min(ids[i] for i in np.nonzero(labels == j)[0]) for j in range(k)]
    order = sorted(range(k), key=lambda j: min_ids[j])
    relabel = {old: new for new, old in enumerate(order)}
    return Clustering(
        k=k,
        centroids=C[order],
        assignment={ids[i]: relabel[int(labels[i])] for i in range(len(ids))},
        inertia=trace[-1],
        n_iter=n_iter,
        inertia_trace=trace,
    )


@dataclass
class ElbowResult:
    k: int
    sse_curve: list[tuple[int, float]]
    no_elbow: bool
    best: Clustering

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "sse_curve": [[k, s] for k, s in self.sse_curve],
            "no_elbow": self.no_elbow,
        }


def chord_distances(ks: np.ndarray, sse: np.ndarray) -> np.ndarray:
    """Perpendicular distance of each (k, SSE) point to the curve's chord,
    after normalizing both axes to [0, 1]."""
    x = (ks - ks[0]) / (ks[-1] - ks[0])
    span = sse.max() - sse.min()
    y = (sse - sse.min()) / span
    y0, y1 = y[0], y[-1]
    # line through (0, y0) and (1, y1)
    return np.abs((y1 - y0) * x - y + y0) / np.hypot(y1 - y0, 1.0)


def elbow_select_k(
    points: EmbeddingMatrix,
    k_min: int = DEFAULT_K_MIN,
    k_max: int | None = None,
    seeds_per_k: int = DEFAULT_SEEDS_PER_K,
    seed: int = 0,
) -> ElbowResult:
    """Sweep k, keep the best of ``seeds_per_k`` restarts per k, pick the elbow.

    Degenerate inputs (range collapsed, or a flat SSE curve) fall back to
    k_min with ``no_elbow`` set.
    """
    n = len(points.ids)
    if k_max is None:
        k_max = min(DEFAULT_K_CAP, n - 1)

    def run(k: int) -> Clustering:
        best: Clustering | None = None
        for trial in range(seeds_per_k):
            ss = np.random.SeedSequence((seed, k, trial))
            clu = lloyd(points, kmeanspp_seed(points, k, ss))
            if best is None or clu.inertia < best.inertia:
                best = clu
        assert best is not None
        return best

    if k_max <= k_min:
        k = min(k_min, n)
        clu = run(k)
        return ElbowResult(k=k, sse_curve=[(k, clu.inertia)], no_elbow=True, best=clu)

    if k_max > n:
        raise NumericsError(f"k_max={k_max} exceeds number of points n={n}")

    ks = list(range(k_min, k_max + 1))
    runs = {k: run(k) for k in ks}
    sse = np.array([runs[k].inertia for k in ks])

    if np.isclose(sse.max(), sse.min(), rtol=1e-12, atol=1e-12):
        return ElbowResult(
            k=k_min,
            sse_curve=list(zip(ks, sse.tolist())),
            no_elbow=True,
            best=runs[k_min],
        )

    dists = chord_distances(np.array(ks, dtype=np.float64), sse)
    selected = ks[int(np.argmax(dists))]
    return ElbowResult(
        k=selected,
        sse_curve=list(zip(ks, sse.tolist())),
        no_elbow=False,
        best=runs[selected],
    )

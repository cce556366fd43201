"""Distance kernels with a compiled fast path.

The compiled Cython module is preferred when importable; otherwise the
vectorized numpy fallback is used. ``AA_KERNELS`` overrides the choice:
``c`` (require compiled), ``py`` (force fallback), ``auto`` (default).

All callers go through :func:`sqdist_matrix`, :func:`assign_nearest` and
:func:`min_sqdist`; inputs are coerced to C-contiguous float64.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy_backend

_choice = os.environ.get("AA_KERNELS", "auto").lower()

if _choice == "py":
    _backend = _numpy_backend
elif _choice == "c":
    from . import _ckernels as _backend  # type: ignore[no-redef]
else:
    try:
        from . import _ckernels as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _numpy_backend


def backend_name() -> str:
    return _backend.NAME


def _as_c2d(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64))


def sqdist_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n, k) matrix of squared Euclidean distances."""
    return _backend.sqdist_matrix(_as_c2d(points), _as_c2d(centers))


def assign_nearest(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per point: index of the nearest center (lowest index on ties), squared distance."""
    return _backend.assign_nearest(_as_c2d(points), _as_c2d(centers))


def lloyd_step(
    points: np.ndarray, centers: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Fused k-means iteration pass: (labels, sq distances, cluster coordinate
    sums, cluster counts)."""
    return _backend.lloyd_step(_as_c2d(points), _as_c2d(centers))


def min_sqdist(points: np.ndarray, refs: np.ndarray) -> np.ndarray:
    """Per point: squared distance to the nearest reference row."""
    return _backend.min_sqdist(_as_c2d(points), _as_c2d(refs))

import numpy as np
import pytest

from activeanno import kernels
from activeanno.kernels import _numpy_backend

try:
    from activeanno.kernels import _ckernels
except ImportError:
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_case(seed, n=400, d=13, k=9):
    rng = np.random.default_rng(seed)
    X = np.ascontiguousarray(rng.normal(size=(n, d)))
    C = np.ascontiguousarray(X[rng.choice(n, size=k, replace=False)])
    return X, C


@needs_compiled
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backends_agree_on_distances(seed):
    X, C = random_case(seed)
    a = _numpy_backend.sqdist_matrix(X, C)
    b = _ckernels.sqdist_matrix(X, C)
    assert np.allclose(a, b, atol=1e-10)


@needs_compiled
@pytest.mark.parametrize("seed", [3, 4, 5])
def test_backends_agree_on_assignment(seed):
    X, C = random_case(seed)
    la, da = _numpy_backend.assign_nearest(X, C)
    lb, db = _ckernels.assign_nearest(X, C)
    assert np.array_equal(la, lb)
    assert np.allclose(da, db, atol=1e-10)


@needs_compiled
def test_backends_agree_on_lloyd_step():
    X, C = random_case(7)
    la, da, sa, ca = _numpy_backend.lloyd_step(X, C)
    lb, db, sb, cb = _ckernels.lloyd_step(X, C)
    assert np.array_equal(la, lb)
    assert np.array_equal(ca, cb)
    assert np.allclose(sa, sb, atol=1e-9)
    assert np.allclose(da, db, atol=1e-10)


def test_tie_break_takes_lowest_index():
    X = np.array([[0.0, 0.0]])
    C = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])  # all at distance 1
    labels, dists = kernels.assign_nearest(X, C)
    assert labels[0] == 0
    assert dists[0] == pytest.approx(1.0)


def test_min_sqdist_matches_matrix_min():
    X, C = random_case(11)
    direct = kernels.min_sqdist(X, C)
    via_matrix = kernels.sqdist_matrix(X, C).min(axis=1)
    assert np.allclose(direct, via_matrix, atol=1e-10)


def test_lloyd_step_sums_and_counts_consistent():
    X, C = random_case(13)
    labels, _sqd, sums, counts = kernels.lloyd_step(X, C)
    assert counts.sum() == X.shape[0]
    for j in range(C.shape[0]):
        members = X[labels == j]
        assert counts[j] == len(members)
        if len(members):
            assert np.allclose(sums[j], members.sum(axis=0), atol=1e-9)


def test_inputs_coerced_to_float64():
    X = np.array([[0, 0], [3, 4]], dtype=np.int64)
    C = np.array([[0, 0]], dtype=np.int32)
    labels, dists = kernels.assign_nearest(X, C)
    assert dists[1] == pytest.approx(25.0)


def test_backend_name_reports():
    assert kernels.backend_name() in ("numpy", "cython")

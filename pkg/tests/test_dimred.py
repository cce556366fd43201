import numpy as np
import pytest

from activeanno.dimred import fit_pca, fit_pca_auto, reconstruction_error, transform
from activeanno.embedding import EmbeddingMatrix
from activeanno.errors import NumericsError


def matrix(vectors: np.ndarray) -> EmbeddingMatrix:
    return EmbeddingMatrix(
        ids=[f"p{i}" for i in range(len(vectors))], vectors=np.asarray(vectors, float)
    )


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angles between the row spans of two orthonormal bases."""
    qa, _ = np.linalg.qr(a.T)
    qb, _ = np.linalg.qr(b.T)
    sv = np.linalg.svd(qa.T @ qb, compute_uv=False)
    return np.arccos(np.clip(sv, -1.0, 1.0))


def dense_eig_oracle(X: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Direct covariance eigendecomposition, independent of fit_pca."""
    Xc = X - X.mean(axis=0)
    cov = np.cov(Xc, rowvar=False)
    vals, vecs = np.linalg.eig(cov)
    order = np.argsort(vals)[::-1]
    return np.real(vals[order][:p]), np.real(vecs[:, order][:, :p]).T


def test_rank_one_data_p1_captures_all_variance():
    t = np.linspace(-2, 3, 40)
    direction = np.array([1.0, 2.0, -1.0])
    X = np.outer(t, direction)
    E = matrix(X)
    model = fit_pca(E, 1)
    assert model.explained_variance[0] == pytest.approx(model.total_variance, abs=1e-8)


def test_full_rank_transform_is_orthogonal_change_of_basis():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(30, 4))
    E = matrix(X)
    model = fit_pca(E, 4)
    assert reconstruction_error(model, E) == pytest.approx(0.0, abs=1e-8)
    # pairwise distances preserved
    reduced = transform(model, E).vectors
    d_orig = np.linalg.norm(X[:, None] - X[None, :], axis=2)
    d_red = np.linalg.norm(reduced[:, None] - reduced[None, :], axis=2)
    assert np.allclose(d_orig, d_red, atol=1e-8)


def test_matches_dense_eigendecomposition_oracle():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(50, 10)) @ np.diag(np.linspace(3, 0.5, 10))
    model = fit_pca(matrix(X), 3)
    vals, vecs = dense_eig_oracle(X, 3)
    assert np.allclose(model.explained_variance, vals, rtol=1e-8)
    assert np.max(principal_angles(model.components, vecs)) < 1e-6


def test_component_orthonormality_and_ordering():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(60, 8))
    model = fit_pca(matrix(X), 6)
    gram = model.components @ model.components.T
    assert np.allclose(gram, np.eye(6), atol=1e-8)
    assert np.all(np.diff(model.explained_variance) <= 1e-12)
    # sign convention: largest-magnitude coordinate positive
    for row in model.components:
        assert row[np.argmax(np.abs(row))] > 0


def test_transform_variance_equals_explained_variance():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(200, 6)) @ np.diag([4, 3, 2, 1, 0.5, 0.1])
    E = matrix(X)
    model = fit_pca(E, 4)
    reduced = transform(model, E).vectors
    var = reduced.var(axis=0, ddof=1)
    assert np.allclose(var, model.explained_variance, atol=1e-6)


def test_mean_maps_to_zero():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(25, 5)) + 7.0
    E = matrix(X)
    model = fit_pca(E, 3)
    out = transform(model, matrix(X.mean(axis=0)[None, :]))
    assert np.allclose(out.vectors, 0.0, atol=1e-9)


def test_reconstruction_error_non_increasing_in_p():
    rng = np.random.default_rng(13)
    X = rng.normal(size=(40, 7))
    E = matrix(X)
    errors = [reconstruction_error(fit_pca(E, p), E) for p in range(1, 8)]
    assert all(a >= b - 1e-9 for a, b in zip(errors, errors[1:]))
    assert errors[-1] == pytest.approx(0.0, abs=1e-8)


def test_explained_variance_bounded_by_total():
    rng = np.random.default_rng(17)
    X = rng.normal(size=(30, 6))
    E = matrix(X)
    for p in (1, 3, 6):
        model = fit_pca(E, p)
        assert float(np.sum(model.explained_variance)) <= model.total_variance + 1e-8


def test_auto_selection_smallest_p_for_threshold():
    rng = np.random.default_rng(21)
    X = rng.normal(size=(100, 5)) @ np.diag([10, 5, 1, 0.1, 0.01])
    model = fit_pca_auto(matrix(X), variance_threshold=0.9, max_components=5)
    full = fit_pca(matrix(X), 5)
    cum = np.cumsum(full.explained_variance) / full.total_variance
    expected_p = int(np.argmax(cum >= 0.9 - 1e-12)) + 1
    assert model.n_components == expected_p


def test_auto_selection_respects_cap():
    rng = np.random.default_rng(23)
    X = rng.normal(size=(50, 20))
    model = fit_pca_auto(matrix(X), variance_threshold=0.999, max_components=4)
    assert model.n_components == 4


def test_errors():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(10, 4))
    E = matrix(X)
    with pytest.raises(NumericsError):
        fit_pca(E, 5)
    with pytest.raises(NumericsError):
        fit_pca(E, 0)
    bad = X.copy()
    bad[0, 0] = np.nan
    with pytest.raises(Exception):
        fit_pca(matrix(bad), 2)
    model = fit_pca(E, 2)
    with pytest.raises(NumericsError, match="dimension"):
        transform(model, matrix(rng.normal(size=(3, 5))))


def test_deterministic():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(40, 6))
    a = fit_pca(matrix(X), 3)
    b = fit_pca(matrix(X), 3)
    assert np.array_equal(a.components, b.components)
    assert np.array_equal(a.explained_variance, b.explained_variance)

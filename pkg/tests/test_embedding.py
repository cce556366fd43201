import math
from collections import Counter

import numpy as np
import pytest

from activeanno.data import dataset_from_rows
from activeanno.embedding import (
    EmbedderSpec,
    HashedTfidfVectorizer,
    _bucket,
    embed,
    tokenize,
)
from activeanno.errors import EmbeddingError

TOY_DOCS = [
    {"id": "d0", "text": "alpha bravo charlie"},
    {"id": "d1", "text": "delta echo foxtrot"},
    {"id": "d2", "text": "alpha alpha bravo"},
    {"id": "d3", "text": "golf hotel india juliet"},
    {"id": "d4", "text": "echo echo echo kilo"},
]


def toy_oracle_weights(dim: int) -> dict[str, dict[int, float]]:
    """Independent token-count TF-IDF oracle over the 5-document corpus."""
    texts = [d["text"] for d in TOY_DOCS]
    n = len(texts)
    df: Counter = Counter()
    for t in texts:
        df.update(set(t.split()))
    out = {}
    for d in TOY_DOCS:
        weights: dict[int, float] = {}
        for tok, tf in Counter(d["text"].split()).items():
            idf = math.log((1 + n) / (1 + df[tok])) + 1.0
            index, sign = _bucket(tok, dim)
            weights[index] = weights.get(index, 0.0) + sign * tf * idf
        norm = math.sqrt(sum(w * w for w in weights.values()))
        out[d["id"]] = {i: w / norm for i, w in weights.items()}
    return out


def test_builtin_matches_token_count_oracle():
    dim = 4096
    tokens = {t for d in TOY_DOCS for t in d["text"].split()}
    buckets = [_bucket(t, dim)[0] for t in tokens]
    assert len(set(buckets)) == len(buckets), "collision in toy corpus, enlarge dim"

    ds = dataset_from_rows(TOY_DOCS)
    E = embed(ds, EmbedderSpec(dim=dim))
    oracle = toy_oracle_weights(dim)
    for row, doc in zip(E.vectors, TOY_DOCS):
        expected = oracle[doc["id"]]
        for index, weight in expected.items():
            assert row[index] == pytest.approx(weight, abs=1e-12)
        assert np.count_nonzero(row) == len(expected)


def test_disjoint_token_docs_have_zero_dot_product():
    ds = dataset_from_rows(TOY_DOCS)
    E = embed(ds, EmbedderSpec(dim=4096))
    v0 = E.vectors[0]  # alpha bravo charlie
    v1 = E.vectors[1]  # delta echo foxtrot
    assert float(v0 @ v1) == pytest.approx(0.0, abs=1e-12)


def test_identical_texts_identical_vectors():
    ds = dataset_from_rows(
        [{"id": "a", "text": "book a ticket"}, {"id": "b", "text": "book a ticket"}]
    )
    E = embed(ds, EmbedderSpec(dim=256))
    assert np.array_equal(E.vectors[0], E.vectors[1])


def test_unit_norms_and_zero_vector_flagging():
    ds = dataset_from_rows(
        [{"id": "a", "text": "hello world"}, {"id": "b", "text": "!!! ???"}]
    )
    E = embed(ds, EmbedderSpec(dim=128))
    assert np.linalg.norm(E.vectors[0]) == pytest.approx(1.0, abs=1e-9)
    assert np.linalg.norm(E.vectors[1]) == 0.0
    assert E.zero_norm_ids == ["b"]


def test_embed_is_pure(corpus_dataset):
    spec = EmbedderSpec(dim=512)
    a = embed(corpus_dataset, spec)
    b = embed(corpus_dataset, spec)
    assert a.ids == b.ids
    assert np.array_equal(a.vectors, b.vectors)


def test_tokenize_unicode_and_separators():
    assert tokenize("Hello, WORLD_two  3x") == ["hello", "world", "two", "3x"]
    assert tokenize("Café Münster") == ["café", "münster"]


def test_precomputed_loader_preserves_dataset_order(tmp_path):
    ds = dataset_from_rows([{"id": "a", "text": "x"}, {"id": "b", "text": "y"}])
    path = tmp_path / "vec.jsonl"
    path.write_text('{"id":"b","vector":[0,1]}\n{"id":"a","vector":[1,0]}\n')
    E = embed(ds, EmbedderSpec(kind="precomputed-file", path=str(path)))
    assert E.ids == ["a", "b"]
    assert E.vectors.tolist() == [[1, 0], [0, 1]]


def test_precomputed_missing_id_named(tmp_path):
    ds = dataset_from_rows([{"id": "a", "text": "x"}, {"id": "b", "text": "y"}])
    path = tmp_path / "vec.jsonl"
    path.write_text('{"id":"a","vector":[1,0]}\n')
    with pytest.raises(EmbeddingError, match="'b'"):
        embed(ds, EmbedderSpec(kind="precomputed-file", path=str(path)))


def test_precomputed_dimension_mismatch(tmp_path):
    ds = dataset_from_rows([{"id": "a", "text": "x"}, {"id": "b", "text": "y"}])
    path = tmp_path / "vec.jsonl"
    path.write_text('{"id":"a","vector":[1,0]}\n{"id":"b","vector":[1,0,0]}\n')
    with pytest.raises(EmbeddingError, match="dimension"):
        embed(ds, EmbedderSpec(kind="precomputed-file", path=str(path)))


def test_vectorizer_requires_fit():
    with pytest.raises(EmbeddingError):
        HashedTfidfVectorizer(16).transform(["x"])

"""Utterance vectorization.

Two embedders sit behind one spec: a deterministic hashed TF-IDF default
(hermetic, no model downloads) and a loader for externally precomputed
vectors so pretrained sentence encodings can be injected.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .data import Dataset
from .errors import EmbeddingError

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

BUILTIN_KIND = "builtin-hash-tfidf"
PRECOMPUTED_KIND = "precomputed-file"
# bucket count scales with vocabulary, not encoder width: at 512 buckets a
# ~1k-token corpus collides half its vocabulary and clustering purity caps out
DEFAULT_DIM = 2048


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric characters (underscore included)."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class EmbedderSpec:
    kind: str = BUILTIN_KIND
    dim: int = DEFAULT_DIM
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (BUILTIN_KIND, PRECOMPUTED_KIND):
            raise EmbeddingError(f"unknown embedder kind {self.kind!r}")
        if self.kind == BUILTIN_KIND and self.dim < 1:
            raise EmbeddingError("builtin embedder dim must be >= 1")
        if self.kind == PRECOMPUTED_KIND and not self.path:
            raise EmbeddingError("precomputed embedder requires a file path")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "path": self.path}

    @classmethod
    def from_dict(cls, d: dict) -> "EmbedderSpec":
        return cls(
            kind=d.get("kind", BUILTIN_KIND),
            dim=int(d.get("dim", DEFAULT_DIM)),
            path=d.get("path"),
        )


@dataclass
class EmbeddingMatrix:
    """Row-per-utterance vectors; row order matches ``ids``."""

    ids: list[str]
    vectors: np.ndarray
    zero_norm_ids: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or len(self.ids) != self.vectors.shape[0]:
            raise EmbeddingError("ids and vectors disagree in length")
        if not np.all(np.isfinite(self.vectors)):
            raise EmbeddingError("embedding vectors contain non-finite values")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.ids)

    def rows(self, ids: Sequence[str]) -> np.ndarray:
        index = {u: i for i, u in enumerate(self.ids)}
        return self.vectors[[index[i] for i in ids]]

    def subset(self, ids: Sequence[str]) -> "EmbeddingMatrix":
        keep = set(ids)
        order = [i for i in self.ids if i in keep]
        return EmbeddingMatrix(
            ids=order,
            vectors=self.rows(order),
            zero_norm_ids=[i for i in self.zero_norm_ids if i in keep],
        )


def _bucket(token: str, dim: int) -> tuple[int, float]:
    """Bucket index plus a +-1 sign from an independent hash bit; signed
    hashing makes colliding tokens cancel in expectation instead of piling up."""
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=9).digest()
    index = int.from_bytes(digest[:8], "big") % dim
    sign = 1.0 if digest[8] & 1 else -1.0
    return index, sign


class HashedTfidfVectorizer:
    """Hash tokens into ``dim`` signed buckets, weight by smoothed TF-IDF,
    L2-normalize.

    idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1; texts with no tokens map to
    the zero vector. Fit once on a corpus, then transform any texts.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim < 1:
            raise EmbeddingError("dim must be >= 1")
        self.dim = dim
        self._idf: dict[str, float] = {}
        self._n_docs = 0

    def fit(self, texts: Iterable[str]) -> "HashedTfidfVectorizer":
        df: Counter[str] = Counter()
        n = 0
        for text in texts:
            n += 1
            df.update(set(tokenize(text)))
        self._n_docs = n
        self._idf = {
            tok: math.log((1 + n) / (1 + count)) + 1.0 for tok, count in df.items()
        }
        return self

    def _default_idf(self) -> float:
        # unseen token: df = 0
        return math.log(1 + self._n_docs) + 1.0

    def transform_one(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        counts = Counter(tokenize(text))
        for tok, tf in counts.items():
            idf = self._idf.get(tok, self._default_idf())
            index, sign = _bucket(tok, self.dim)
            vec[index] += sign * tf * idf
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return vec

    def transform(self, texts: Sequence[str]) -> np.ndarray:
        if self._n_docs == 0:
            raise EmbeddingError("vectorizer must be fit before transform")
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            out[i] = self.transform_one(text)
        return out


def _load_precomputed(dataset: Dataset, path: str) -> EmbeddingMatrix:
    file = Path(path)
    if not file.exists():
        raise EmbeddingError(f"precomputed embedding file not found: {file}")
    vectors: dict[str, list[float]] = {}
    dim: int | None = None
    with file.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingError(f"{file}:{lineno}: invalid JSON") from exc
            vid, vec = obj.get("id"), obj.get("vector")
            if not isinstance(vid, str) or not isinstance(vec, list):
                raise EmbeddingError(f"{file}:{lineno}: expected 'id' and 'vector'")
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise EmbeddingError(
                    f"{file}:{lineno}: vector for id {vid!r} has dimension "
                    f"{len(vec)}, expected {dim}"
                )
            vectors[vid] = vec
    missing = [i for i in dataset.ids if i not in vectors]
    if missing:
        raise EmbeddingError(f"precomputed file missing vector for id {missing[0]!r}")
    mat = np.array([vectors[i] for i in dataset.ids], dtype=np.float64)
    norms = np.linalg.norm(mat, axis=1)
    zero_ids = [dataset.ids[i] for i in np.nonzero(norms == 0.0)[0]]
    return EmbeddingMatrix(ids=list(dataset.ids), vectors=mat, zero_norm_ids=zero_ids)


def embed(dataset: Dataset, spec: EmbedderSpec) -> EmbeddingMatrix:
    """One vector per utterance, in dataset order. Pure in (dataset, spec)."""
    if len(dataset) == 0:
        raise EmbeddingError("cannot embed an empty dataset")
    if spec.kind == PRECOMPUTED_KIND:
        assert spec.path is not None
        return _load_precomputed(dataset, spec.path)
    vectorizer = HashedTfidfVectorizer(dim=spec.dim)
    texts = [u.text for u in dataset]
    vectorizer.fit(texts)
    mat = vectorizer.transform(texts)
    norms = np.linalg.norm(mat, axis=1)
    zero_ids = [dataset.ids[i] for i in np.nonzero(norms == 0.0)[0]]
    return EmbeddingMatrix(ids=list(dataset.ids), vectors=mat, zero_norm_ids=zero_ids)

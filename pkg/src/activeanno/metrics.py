"""Agreement and quality metrics for labelled sessions.

Cohen's kappa against gold labels, unweighted macro F1, greedy mapping of
free-form session labels onto the gold vocabulary, and a nearest-centroid
text classifier standing in for a trained model when measuring how useful
the labelled data is.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .embedding import DEFAULT_DIM, HashedTfidfVectorizer
from .errors import EvalError


def cohens_kappa(labels_a: Mapping[str, str], labels_b: Mapping[str, str]) -> float:
    """Chance-corrected agreement between two labelings of the same ids.

    Returns 1.0 when chance agreement is 1 and the labelings agree
    perfectly; NaN when chance agreement is 1 but they do not.
    """
    if not labels_a:
        raise EvalError("labelings must be non-empty")
    if set(labels_a) != set(labels_b):
        raise EvalError("labelings must cover the same id set")
    n = len(labels_a)
    observed = sum(1 for i, lab in labels_a.items() if labels_b[i] == lab) / n
    marg_a = Counter(labels_a.values())
    marg_b = Counter(labels_b.values())
    expected = sum(
        (marg_a[lab] / n) * (marg_b[lab] / n) for lab in set(marg_a) | set(marg_b)
    )
    if expected >= 1.0 - 1e-15:
        return 1.0 if observed >= 1.0 - 1e-15 else float("nan")
    return (observed - expected) / (1.0 - expected)


def macro_f1(predicted: Mapping[str, str], gold: Mapping[str, str]) -> float:
    """Per-class F1 averaged unweighted over the gold classes."""
    if not gold:
        raise EvalError("gold labeling must be non-empty")
    if set(predicted) != set(gold):
        raise EvalError("labelings must cover the same id set")
    scores = []
    for cls in sorted(set(gold.values())):
        tp = sum(1 for i in gold if gold[i] == cls and predicted[i] == cls)
        fp = sum(1 for i in gold if gold[i] != cls and predicted[i] == cls)
        fn = sum(1 for i in gold if gold[i] == cls and predicted[i] != cls)
        denom = 2 * tp + fp + fn
        scores.append(2 * tp / denom if denom else 0.0)
    return float(sum(scores) / len(scores))


@dataclass
class LabelMapping:
    mapping: dict[str, str | None]   # session label -> gold label (None = unmapped)
    unmapped: list[str]

    def apply(self, labels: Mapping[str, str]) -> dict[str, str]:
        """Map a labeling into gold vocabulary, dropping unmapped rows."""
        out = {}
        for i, lab in labels.items():
            target = self.mapping.get(lab)
            if target is not None:
                out[i] = target
        return out


def map_labels(
    session_labels: Mapping[str, str],
    gold_labels: Mapping[str, str],
    overrides: Mapping[str, str | None] | None = None,
) -> LabelMapping:
    """Greedy maximum-overlap assignment of session labels to gold labels.

    Each session label maps independently to the gold label it co-occurs
    with most (ties: lexicographically smallest gold label); many session
    labels may map to one gold label. Manual overrides take precedence.
    """
    ids = [i for i in session_labels if i in gold_labels]
    cooc: dict[str, Counter] = defaultdict(Counter)
    for i in ids:
        cooc[session_labels[i]][gold_labels[i]] += 1
    mapping: dict[str, str | None] = {}
    unmapped: list[str] = []
    for lab in sorted(set(session_labels.values())):
        if overrides is not None and lab in overrides:
            mapping[lab] = overrides[lab]
            if overrides[lab] is None:
                unmapped.append(lab)
            continue
        counts = cooc.get(lab)
        if not counts:
            mapping[lab] = None
            unmapped.append(lab)
            continue
        top = max(counts.values())
        mapping[lab] = min(g for g, c in counts.items() if c == top)
    return LabelMapping(mapping=mapping, unmapped=unmapped)


def _cosine_similarities(vectors: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    def unit(m: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(m, axis=1, keepdims=True)
        return np.divide(m, norms, out=np.zeros_like(m), where=norms > 0)

    return unit(vectors) @ unit(centroids).T


def centroid_classifier_train_eval(
    train: Sequence[tuple[str, str]],
    test: Sequence[tuple[str, str]],
    dim: int = DEFAULT_DIM,
) -> float:
    """Train class centroids in embedding space, predict the nearest
    centroid by cosine (ties: lexicographically first class), return the
    macro F1 on the test rows."""
    if not train:
        raise EvalError("no labelled training data")
    if not test:
        raise EvalError("no test data")
    classes = sorted({lab for _, lab in train})
    vectorizer = HashedTfidfVectorizer(dim).fit([t for t, _ in train])
    train_vecs = vectorizer.transform([t for t, _ in train])
    test_vecs = vectorizer.transform([t for t, _ in test])
    labels = np.array([lab for _, lab in train])
    centroids = np.stack([train_vecs[labels == c].mean(axis=0) for c in classes])
    sims = _cosine_similarities(test_vecs, centroids)
    preds = {str(i): classes[int(np.argmax(sims[i]))] for i in range(len(test))}
    gold = {str(i): lab for i, (_, lab) in enumerate(test)}
    return macro_f1(preds, gold)


def centroid_classifier_cv(
    rows: Sequence[tuple[str, str]], folds: int = 5, dim: int = DEFAULT_DIM
) -> float:
    """Stratified k-fold cross-validation mean macro F1 of the centroid
    classifier. Fold assignment is deterministic: per class, members are
    dealt round-robin in input order."""
    if not rows:
        raise EvalError("no labelled data")
    fold_of: dict[int, int] = {}
    per_class: dict[str, list[int]] = defaultdict(list)
    for i, (_, lab) in enumerate(rows):
        per_class[lab].append(i)
    for members in per_class.values():
        for j, idx in enumerate(members):
            fold_of[idx] = j % folds
    scores = []
    for fold in range(folds):
        train = [rows[i] for i in range(len(rows)) if fold_of[i] != fold]
        test = [rows[i] for i in range(len(rows)) if fold_of[i] == fold]
        if not train or not test:
            continue
        scores.append(centroid_classifier_train_eval(train, test, dim=dim))
    if not scores:
        return float("nan")
    return float(sum(scores) / len(scores))


def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation, NaN-safe."""
    vals = [v for v in values if not math.isnan(v)]
    if not vals:
        return float("nan"), float("nan")
    arr = np.array(vals, dtype=np.float64)
    return float(arr.mean()), float(arr.std())

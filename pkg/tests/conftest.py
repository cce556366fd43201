import json

import pytest

from activeanno.corpus import synthetic_corpus
from activeanno.data import Dataset, dataset_from_rows
from activeanno.session import SessionConfig


@pytest.fixture(scope="session")
def corpus_pool() -> tuple:
    pool, _test = synthetic_corpus()
    return pool


@pytest.fixture(scope="session")
def corpus_test() -> tuple:
    _pool, test = synthetic_corpus()
    return test


@pytest.fixture(scope="session")
def corpus_dataset(corpus_pool) -> Dataset:
    return dataset_from_rows(corpus_pool)


@pytest.fixture(scope="session")
def small_dataset(corpus_pool) -> Dataset:
    """First 300 corpus rows: enough structure for fast session tests."""
    return dataset_from_rows(corpus_pool[:300])


def fast_config(**overrides) -> SessionConfig:
    """Session config tuned for test speed, not clustering quality."""
    defaults = dict(rng_seed=0, k_max=8, seeds_per_k=2, recluster_threshold=None)
    defaults.update(overrides)
    return SessionConfig(**defaults)


def write_dataset(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")

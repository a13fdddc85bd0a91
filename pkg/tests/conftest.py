import numpy as np
import pytest

from coreselect.data_model import SampleRecord
from coreselect.embedding_store import EmbeddingStore


def unit_rows(rng, n, d):
    """Random unit vectors, renormalized through float32 so stores validate."""
    x = rng.normal(size=(n, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    x32 = x.astype(np.float32)
    x32 = (x32.astype(np.float64)
           / np.linalg.norm(x32.astype(np.float64), axis=1, keepdims=True))
    return x32.astype(np.float32)


def make_store(matrix, ids=None, normalized=True):
    matrix = np.asarray(matrix, dtype=np.float32)
    if ids is None:
        ids = tuple(f"s{i}" for i in range(matrix.shape[0]))
    return EmbeddingStore(matrix=matrix, normalized=normalized, ids=ids)


def make_corpus(n, task="NLI", dataset="RTE", tasks=None, datasets=None,
                token_counts=None):
    records = []
    for i in range(n):
        records.append(SampleRecord(
            id=f"s{i}",
            task=tasks[i] if tasks else task,
            dataset=datasets[i] if datasets else dataset,
            text=f"example {i}",
            token_count=token_counts[i] if token_counts else 2,
        ))
    return records


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import itertools

import numpy as np
import pytest

from conftest import make_store, unit_rows
from coreselect.clustering import (
    ClusterModel,
    KMeansConfig,
    assign,
    default_k,
    kmeans,
    read_cluster_model,
    recompute_inertia,
    write_cluster_model,
)
from coreselect.errors import DimensionMismatch, NotNormalized, TooFewSamples


def brute_force_two_means(x):
    """Optimal k=2 inertia by enumerating every 2-partition (point 0 fixed)."""
    n = len(x)
    best = np.inf
    for bits in itertools.product([0, 1], repeat=n - 1):
        labels = np.array([0] + list(bits))
        inertia = 0.0
        for c in (0, 1):
            pts = x[labels == c]
            if len(pts) == 0:
                continue
            inertia += ((pts - pts.mean(axis=0)) ** 2).sum()
        best = min(best, inertia)
    return best


def test_k1_closed_form(rng):
    store = make_store(unit_rows(rng, 12, 4))
    model = kmeans(store, KMeansConfig(k=1, seed=0))
    x = store.matrix.astype(np.float64)
    mean = x.mean(axis=0)
    assert np.allclose(model.centroids[0], mean, atol=1e-6)
    assert model.inertia == pytest.approx(((x - mean) ** 2).sum(), rel=1e-4)


def test_k_equals_n_zero_inertia(rng):
    store = make_store(unit_rows(rng, 6, 3))
    model = kmeans(store, KMeansConfig(k=6, seed=1))
    assert model.inertia == pytest.approx(0.0, abs=1e-10)
    assert sorted(model.assignments) == list(range(6))


def test_two_separated_blobs_match_brute_force(rng):
    # blobs around (1,0) and (0,1) on the unit circle
    angles = np.concatenate([rng.normal(0.0, 0.02, size=5),
                             rng.normal(np.pi / 2, 0.02, size=5)])
    x = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    store = make_store((x / np.linalg.norm(x, axis=1, keepdims=True)).astype(np.float32))
    model = kmeans(store, KMeansConfig(k=2, seed=3))
    labels = model.assignments
    assert len(set(labels[:5])) == 1 and len(set(labels[5:])) == 1
    assert labels[0] != labels[5]
    x64 = store.matrix.astype(np.float64)
    assert model.inertia == pytest.approx(brute_force_two_means(x64), rel=1e-4)


def test_inertia_history_non_increasing(rng):
    store = make_store(unit_rows(rng, 200, 8))
    model = kmeans(store, KMeansConfig(k=7, seed=5))
    hist = model.inertia_history
    assert all(hist[i + 1] <= hist[i] + 1e-9 for i in range(len(hist) - 1))


def test_seed_reproducibility(rng):
    store = make_store(unit_rows(rng, 80, 5))
    a = kmeans(store, KMeansConfig(k=4, seed=9))
    b = kmeans(store, KMeansConfig(k=4, seed=9))
    assert np.array_equal(a.centroids, b.centroids)
    assert np.array_equal(a.assignments, b.assignments)
    assert a.inertia == b.inertia


def test_centroids_are_cluster_means(rng):
    store = make_store(unit_rows(rng, 100, 4))
    model = kmeans(store, KMeansConfig(k=5, seed=2, tol=0.0))
    x = store.matrix.astype(np.float64)
    for j in range(model.k):
        members = x[model.assignments == j]
        if len(members):
            assert np.allclose(model.centroids[j], members.mean(axis=0), atol=1e-5)


def test_inertia_matches_recomputation(rng):
    store = make_store(unit_rows(rng, 150, 6))
    model = kmeans(store, KMeansConfig(k=6, seed=11))
    assert model.inertia == pytest.approx(recompute_inertia(model, store), rel=1e-5)


def test_kmeanspp_quality_vs_brute_force():
    violations = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 11))
        d = int(rng.integers(2, 4))
        store = make_store(unit_rows(rng, n, d))
        model = kmeans(store, KMeansConfig(k=2, seed=seed, tol=0.0))
        opt = brute_force_two_means(store.matrix.astype(np.float64))
        if model.inertia > opt * 1.25 + 1e-9:
            violations += 1
    assert violations == 0


def test_requires_normalized(rng):
    store = make_store(rng.normal(size=(10, 3)).astype(np.float32), normalized=False)
    with pytest.raises(NotNormalized):
        kmeans(store, KMeansConfig(k=2, seed=0))


def test_too_few_samples(rng):
    store = make_store(unit_rows(rng, 3, 3))
    with pytest.raises(TooFewSamples):
        kmeans(store, KMeansConfig(k=4, seed=0))


def test_assign_nearest_and_ties():
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0], [0.0, 1.0]], dtype=np.float32),
        assignments=np.array([0, 1]), inertia=0.0)
    v = np.array([0.9, 0.1])
    assert assign(model, v / np.linalg.norm(v)) == 0
    tie = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert assign(model, tie) == 0
    with pytest.raises(DimensionMismatch):
        assign(model, np.array([1.0, 0.0, 0.0]))


def test_default_k():
    assert default_k(1) == 1
    assert default_k(2) == 1
    assert default_k(200) == 10
    assert default_k(160000) == 283


def test_cluster_model_round_trip(tmp_path, rng):
    store = make_store(unit_rows(rng, 40, 5))
    model = kmeans(store, KMeansConfig(k=3, seed=7))
    path = tmp_path / "clusters.bin"
    write_cluster_model(model, path)
    loaded = read_cluster_model(path)
    assert loaded.centroids.tobytes() == model.centroids.tobytes()
    assert np.array_equal(loaded.assignments, model.assignments)
    assert loaded.inertia == model.inertia
    assert loaded.seed == model.seed

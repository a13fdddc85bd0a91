"""K-Means (Lloyd's algorithm, k-means++ init) over unit embeddings.

Everything is deterministic for a fixed seed: init draws come from one
numpy Generator, assignment ties break to the lowest centroid index, and
emptied clusters are reseeded to the current farthest point.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from coreselect import kernels
from coreselect.embedding_store import EmbeddingStore, read_store, write_store
from coreselect.errors import (
    DimensionMismatch,
    FormatError,
    NotNormalized,
    TooFewSamples,
    TruncatedFile,
)


def default_k(n):
    """Cluster-count heuristic used when the caller gives no k."""
    return max(1, math.ceil(math.sqrt(n / 2)))


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iters: int = 100
    tol: float = 1e-4
    seed: int = 0
    n_init: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")


@dataclass(frozen=True)
class ClusterModel:
    centroids: np.ndarray          # k x d float32
    assignments: np.ndarray        # length-n int64
    inertia: float
    seed: int = 0
    inertia_history: tuple = field(default_factory=tuple)

    @property
    def k(self):
        return self.centroids.shape[0]

    @property
    def d(self):
        return self.centroids.shape[1]


def _kmeans_pp_init(x, k, rng):
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = x[first]
    if k == 1:
        return centers
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[j] = x[idx]
        np.minimum(d2, ((x - centers[j]) ** 2).sum(axis=1), out=d2)
    return centers


def _repair_empty(x, centers, labels, d2, k):
    """Reseed each empty cluster to the point farthest from its centroid."""
    counts = np.bincount(labels, minlength=k)
    for j in range(k):
        if counts[j] > 0:
            continue
        p = int(np.argmax(d2))
        counts[labels[p]] -= 1
        labels[p] = j
        counts[j] = 1
        centers[j] = x[p]
        d2[p] = 0.0
    return labels, d2


def _cluster_means(x, labels, k):
    sums = np.zeros((k, x.shape[1]), dtype=np.float64)
    np.add.at(sums, labels, x)
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    return sums / counts[:, None]


def _lloyd(x, cfg, rng):
    """One Lloyd run from a fresh k-means++ seeding; returns (centers, history)."""
    centers = _kmeans_pp_init(x, cfg.k, rng)
    history = []
    prev_inertia = None
    prev_labels = None
    for _ in range(cfg.max_iters):
        raw_labels, d2 = kernels.nearest_centroids(x, centers)
        labels = np.asarray(raw_labels, dtype=np.int64)
        d2 = np.asarray(d2, dtype=np.float64)
        labels, d2 = _repair_empty(x, centers, labels, d2, cfg.k)
        inertia = float(d2.sum())
        history.append(inertia)
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        if prev_inertia is not None and prev_inertia > 0.0:
            if (prev_inertia - inertia) <= cfg.tol * prev_inertia:
                break
        if prev_inertia == 0.0:
            break
        prev_inertia = inertia
        prev_labels = labels.copy()
        centers = _cluster_means(x, labels, cfg.k)
    return centers, history


def kmeans(store, cfg):
    """Cluster a normalized store; returns centroids, labels and inertia."""
    if not store.normalized:
        raise NotNormalized("kmeans requires a normalized embedding store")
    n = store.n
    if cfg.k > n:
        raise TooFewSamples(f"k={cfg.k} exceeds sample count {n}")

    x = store.matrix.astype(np.float64)
    rng = np.random.default_rng(cfg.seed)

    centers = None
    history = None
    best_inertia = None
    for _ in range(cfg.n_init):
        run_centers, run_history = _lloyd(x, cfg, rng)
        if best_inertia is None or run_history[-1] < best_inertia:
            best_inertia = run_history[-1]
            centers = run_centers
            history = run_history

    # freeze to the serialized precision so in-memory and on-disk models agree
    c64 = centers.astype(np.float32).astype(np.float64)
    raw_labels, d2 = kernels.nearest_centroids(x, c64)
    labels = np.asarray(raw_labels, dtype=np.int64)
    d2 = np.asarray(d2, dtype=np.float64)
    labels, d2 = _repair_empty(x, c64, labels, d2, cfg.k)
    centroids32 = c64.astype(np.float32)
    inertia = float(d2.sum())

    return ClusterModel(
        centroids=centroids32,
        assignments=labels,
        inertia=inertia,
        seed=cfg.seed,
        inertia_history=tuple(history),
    )


def assign(model, v):
    """Nearest-centroid index for one vector, lowest index on ties."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (model.d,):
        raise DimensionMismatch(
            f"vector has shape {v.shape}, centroids have d={model.d}")
    d2 = ((model.centroids.astype(np.float64) - v) ** 2).sum(axis=1)
    return int(np.argmin(d2))


def recompute_inertia(model, store):
    x = store.matrix.astype(np.float64)
    c = model.centroids.astype(np.float64)
    diffs = x - c[model.assignments]
    return float((diffs * diffs).sum())


def write_cluster_model(model, path):
    k, d = model.centroids.shape
    n = len(model.assignments)
    header = (f"k={k}\nd={d}\nn={n}\ninertia={model.inertia!r}\n"
              f"seed={model.seed}\n").encode("ascii")
    with open(path, "wb") as f:
        f.write(header)
        centroid_store = EmbeddingStore(
            matrix=model.centroids, normalized=False,
            ids=tuple(str(j) for j in range(k)))
        write_store(centroid_store, f)
        f.write(np.ascontiguousarray(model.assignments, dtype="<u4").tobytes())


def read_cluster_model(path):
    with open(path, "rb") as f:
        fields = {}
        for _ in range(5):
            line = f.readline().decode("ascii").strip()
            if "=" not in line:
                raise FormatError(f"bad cluster model header line: {line!r}")
            key, value = line.split("=", 1)
            fields[key] = value
        try:
            k = int(fields["k"])
            d = int(fields["d"])
            n = int(fields["n"])
            inertia = float(fields["inertia"])
            seed = int(fields["seed"])
        except (KeyError, ValueError) as e:
            raise FormatError(f"bad cluster model header: {e}") from e
        centroid_store = read_store(f)
        if centroid_store.matrix.shape != (k, d):
            raise FormatError(
                f"centroid block is {centroid_store.matrix.shape}, header says {(k, d)}")
        payload = f.read(n * 4)
        if len(payload) != n * 4:
            raise TruncatedFile("assignments block shorter than header-declared n")
        assignments = np.frombuffer(payload, dtype="<u4").astype(np.int64)
    if assignments.size and assignments.max() >= k:
        raise FormatError("assignment references a cluster index >= k")
    return ClusterModel(centroids=centroid_store.matrix, assignments=assignments,
                        inertia=inertia, seed=seed)

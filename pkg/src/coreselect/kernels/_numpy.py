"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or forced off via
CORESELECT_FORCE_PYTHON=1). Semantics match the compiled version:
argmin/argmax ties resolve to the lowest index.
"""

import numpy as np

BACKEND = "numpy"


def nearest_centroids(x, centroids):
    """Assign each row of x to its nearest centroid (squared Euclidean).

    Returns (labels int64[n], sqdist float64[n]).
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    c = np.ascontiguousarray(centroids, dtype=np.float64)
    # ||x-c||^2 = ||x||^2 - 2 x.c + ||c||^2, clamped against fp negatives
    d2 = (x * x).sum(axis=1)[:, None] - 2.0 * (x @ c.T) + (c * c).sum(axis=1)[None, :]
    np.maximum(d2, 0.0, out=d2)
    labels = np.argmin(d2, axis=1)
    return labels.astype(np.int64), d2[np.arange(x.shape[0]), labels]


def greedy_select(x, initial, count):
    """Farthest-point greedy on unit rows under cosine distance 1 - dot.

    Starts from row `initial` and picks `count` rows total. Already-picked
    rows are masked with -1 so they can never win the argmax.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    selected = np.empty(count, dtype=np.int64)
    selected[0] = initial
    min_dist = 1.0 - x @ x[initial]
    min_dist[initial] = -1.0
    for t in range(1, count):
        pick = int(np.argmax(min_dist))
        selected[t] = pick
        cand = 1.0 - x @ x[pick]
        np.minimum(min_dist, cand, out=min_dist)
        min_dist[pick] = -1.0
    return selected

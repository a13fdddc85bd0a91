"""Task center discovery.

The distribution center of a task is the (renormalized) centroid of the
cluster its samples fall into most often; the task center is the real
task sample closest to that centroid by cosine similarity.
"""

import json
from dataclasses import dataclass

import numpy as np

from coreselect.embedding_store import NORM_TOL, l2_normalize
from coreselect.errors import NotNormalized, ParseError, UnknownTask


@dataclass(frozen=True)
class TaskCenters:
    task: str
    distribution_center: np.ndarray   # unit d-vector, float64
    modal_cluster: int
    frequency_histogram: dict         # cluster index -> task sample count
    task_center_index: int = None     # corpus row of the nearest real sample


def cosine_similarity(a, b):
    """Dot product of two unit vectors, clamped to [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    for name, v in (("a", a), ("b", b)):
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"vector {name} has norm {norm}, expected 1")
    return float(np.clip(np.dot(a, b), -1.0, 1.0))


def task_rows(corpus, task):
    rows = [i for i, r in enumerate(corpus) if r.task == task]
    if not rows:
        raise UnknownTask(f"no sample carries task label {task!r}")
    return rows


def distribution_center(model, corpus, task):
    """Histogram the task over clusters and take the modal cluster's centroid."""
    rows = task_rows(corpus, task)
    hist = {}
    for i in rows:
        c = int(model.assignments[i])
        hist[c] = hist.get(c, 0) + 1
    top = max(hist.values())
    modal = min(c for c, count in hist.items() if count == top)
    dc = l2_normalize(model.centroids[modal].astype(np.float64))
    return TaskCenters(task=task, distribution_center=dc, modal_cluster=modal,
                       frequency_histogram=hist)


def task_center(store, corpus, task, dc):
    """Corpus row of the task sample most similar to the distribution center."""
    if not store.normalized:
        raise NotNormalized("task_center requires a normalized store")
    rows = task_rows(corpus, task)
    sims = store.matrix[rows].astype(np.float64) @ np.asarray(dc, dtype=np.float64)
    return rows[int(np.argmax(sims))]


def find_task_centers(store, model, corpus, task):
    centers = distribution_center(model, corpus, task)
    idx = task_center(store, corpus, task, centers.distribution_center)
    return TaskCenters(
        task=centers.task,
        distribution_center=centers.distribution_center,
        modal_cluster=centers.modal_cluster,
        frequency_histogram=centers.frequency_histogram,
        task_center_index=idx,
    )


def write_task_centers(centers, corpus, path):
    record = {
        "task": centers.task,
        "modal_cluster": centers.modal_cluster,
        "task_center_id": corpus[centers.task_center_index].id,
        "task_center_index": centers.task_center_index,
        "histogram": {str(c): n for c, n in sorted(centers.frequency_histogram.items())},
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(record, sort_keys=True) + "\n")


def read_task_centers_record(path):
    """Read the checkpoint record back as a plain dict (no embedding data)."""
    with open(path, "r", encoding="utf-8") as f:
        line = f.readline().strip()
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(str(e), line=1) from e
    for key in ("task", "modal_cluster", "task_center_id", "task_center_index",
                "histogram"):
        if key not in record:
            raise ParseError(f"missing key {key!r}", line=1)
    return record

"""Budgeted subset selection within one task's sample pool.

Five methods: farthest-point greedy k-center seeded at the task center
(the main method), topK / leastK / mixed ranked by similarity to the
distribution center, and a uniform random control. All distances are
cosine distances (1 - dot) on unit embeddings, and all ties break to the
lowest corpus row index.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from coreselect import kernels
from coreselect.center_finder import task_rows
from coreselect.errors import (
    BudgetExceedsPool,
    EmptySelection,
    NotATaskSample,
    NotNormalized,
    ParseError,
)

METHODS = ("coreset", "topk", "leastk", "mixed", "random")


@dataclass(frozen=True)
class SelectionBudget:
    proportion: float
    resolved_count: int

    @classmethod
    def from_proportion(cls, proportion, pool_size):
        if not 0.0 < proportion <= 1.0:
            raise ValueError(f"proportion must be in (0, 1], got {proportion}")
        if pool_size < 1:
            raise ValueError("pool is empty")
        return cls(proportion=proportion,
                   resolved_count=math.ceil(proportion * pool_size))


@dataclass(frozen=True)
class SelectionResult:
    method: str
    indices: tuple          # corpus row indices, in selection order
    budget: SelectionBudget
    coverage_radius: float
    task: str = ""
    seed: int = None        # random method only


def _task_matrix(store, rows):
    if not store.normalized:
        raise NotNormalized("selection requires a normalized store")
    return store.matrix[rows].astype(np.float64)


def _check_budget(budget, pool_size):
    if budget.resolved_count > pool_size:
        raise BudgetExceedsPool(
            f"budget {budget.resolved_count} exceeds task pool of {pool_size}")


def coverage_radius(store, rows, selected):
    """Max over pool rows of cosine distance to the nearest selected row."""
    rows = list(rows)
    selected = list(selected)
    if not selected:
        raise EmptySelection("coverage radius needs a non-empty selection")
    pool = store.matrix[rows].astype(np.float64)
    sel = store.matrix[selected].astype(np.float64)
    # on unit rows 1 - dot == 0.5 * ||a - b||^2; the difference form is exact
    # at 0 for identical rows, so full-budget selections cover at radius 0
    radius = 0.0
    block = max(1, (1 << 22) // max(1, sel.shape[0] * sel.shape[1]))
    for start in range(0, pool.shape[0], block):
        chunk = pool[start:start + block]
        d2 = 0.5 * ((chunk[:, None, :] - sel[None, :, :]) ** 2).sum(axis=2)
        radius = max(radius, float(d2.min(axis=1).max()))
    return radius


def kcenter_greedy(store, corpus, task, initial, budget):
    """Greedy k-center selection starting from a given task sample."""
    rows = task_rows(corpus, task)
    if initial not in rows:
        raise NotATaskSample(
            f"initial row {initial} does not belong to task {task!r}")
    _check_budget(budget, len(rows))
    x = _task_matrix(store, rows)
    local = kernels.greedy_select(x, rows.index(initial), budget.resolved_count)
    indices = tuple(rows[int(p)] for p in local)
    return SelectionResult(
        method="coreset", indices=indices, budget=budget, task=task,
        coverage_radius=coverage_radius(store, rows, indices))


def _ranked(store, corpus, task, dc, budget):
    rows = task_rows(corpus, task)
    _check_budget(budget, len(rows))
    x = _task_matrix(store, rows)
    sims = x @ np.asarray(dc, dtype=np.float64)
    top_order = np.argsort(-sims, kind="stable")     # ties keep lowest row
    least_order = np.argsort(sims, kind="stable")
    return rows, top_order, least_order


def _result(method, store, rows, picks, budget, task):
    indices = tuple(rows[int(p)] for p in picks)
    return SelectionResult(
        method=method, indices=indices, budget=budget, task=task,
        coverage_radius=coverage_radius(store, rows, indices))


def top_k(store, corpus, task, dc, budget):
    rows, top_order, _ = _ranked(store, corpus, task, dc, budget)
    return _result("topk", store, rows, top_order[:budget.resolved_count],
                   budget, task)


def least_k(store, corpus, task, dc, budget):
    rows, _, least_order = _ranked(store, corpus, task, dc, budget)
    return _result("leastk", store, rows, least_order[:budget.resolved_count],
                   budget, task)


def mixed(store, corpus, task, dc, budget):
    """ceil(b/2) top-ranked plus floor(b/2) least-ranked samples.

    An overlap is kept as a top pick; the shortfall is backfilled from the
    next-ranked top candidates.
    """
    rows, top_order, least_order = _ranked(store, corpus, task, dc, budget)
    b = budget.resolved_count
    n_top = math.ceil(b / 2)
    n_least = b - n_top
    picks = list(top_order[:n_top])
    chosen = set(picks)
    for p in least_order[:n_least]:
        p = int(p)
        if p not in chosen:
            picks.append(p)
            chosen.add(p)
    cursor = n_top
    while len(picks) < b:
        p = int(top_order[cursor])
        cursor += 1
        if p not in chosen:
            picks.append(p)
            chosen.add(p)
    return _result("mixed", store, rows, picks, budget, task)


def random_baseline(store, corpus, task, budget, seed):
    rows = task_rows(corpus, task)
    _check_budget(budget, len(rows))
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(rows), size=budget.resolved_count, replace=False)
    indices = tuple(rows[int(p)] for p in picks)
    return SelectionResult(
        method="random", indices=indices, budget=budget, task=task, seed=seed,
        coverage_radius=coverage_radius(store, rows, indices))


def write_selection(result, corpus, path):
    header = {
        "method": result.method,
        "task": result.task,
        "proportion": result.budget.proportion,
        "resolved_count": result.budget.resolved_count,
        "coverage_radius": result.coverage_radius,
        "seed": result.seed,
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for i in result.indices:
            f.write(corpus[i].id + "\n")


def read_selection(path):
    """Return (header dict, list of selected sample ids in order)."""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline()
        try:
            header = json.loads(first)
        except json.JSONDecodeError as e:
            raise ParseError(str(e), line=1) from e
        ids = [line.rstrip("\n") for line in f if line.strip()]
    return header, ids

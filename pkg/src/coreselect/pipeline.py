"""Full selection pipeline and token-budget accounting.

run_pipeline chains: alignment check -> K-Means -> task centers ->
selection method -> artifact files + budget report. Every stage error is
re-raised tagged with the stage name so CLI failures point at the step
that broke.
"""

import json
import os
from dataclasses import dataclass

from coreselect import center_finder, clustering, sampler
from coreselect.data_model import load_corpus
from coreselect.embedding_store import check_alignment, read_store
from coreselect.errors import (
    CoreselectError,
    NotNormalized,
    StageError,
    UnknownId,
)


@dataclass
class PipelineConfig:
    corpus: str
    embeddings: str
    task: str
    output_dir: str
    proportion: float = 0.1
    method: str = "coreset"
    k: int = None
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-4
    initial: str = "auto"           # "auto" or a sample id
    reference_tokens: int = None

    def __post_init__(self):
        if not 0.0 < self.proportion <= 1.0:
            raise ValueError(f"proportion must be in (0, 1], got {self.proportion}")
        if self.method not in sampler.METHODS:
            raise ValueError(
                f"method must be one of {sampler.METHODS}, got {self.method!r}")


@dataclass
class BudgetReport:
    per_task: dict                   # task -> {"samples": int, "tokens": int}
    selected_samples: int
    selected_tokens: int
    task: str
    percent_of_task: float
    percent_of_reference: float = None
    reference_tokens: int = None

    def to_dict(self):
        out = {
            "per_task": self.per_task,
            "task": self.task,
            "selected_samples": self.selected_samples,
            "selected_tokens": self.selected_tokens,
            "percent_of_task": self.percent_of_task,
            "percent_of_task_display": f"{self.percent_of_task:.2f}",
        }
        if self.reference_tokens is not None:
            out["reference_tokens"] = self.reference_tokens
            out["percent_of_reference"] = self.percent_of_reference
            out["percent_of_reference_display"] = f"{self.percent_of_reference:.2f}"
        return out


def stats(corpus, task, selected_ids, reference_total_tokens=None):
    """Exact integer token sums and the percentage claims derived from them."""
    by_id = {r.id: r for r in corpus}
    per_task = {}
    for r in corpus:
        bucket = per_task.setdefault(r.task, {"samples": 0, "tokens": 0})
        bucket["samples"] += 1
        bucket["tokens"] += r.token_count
    sel_tokens = 0
    for sid in selected_ids:
        if sid not in by_id:
            raise UnknownId(f"selected id {sid!r} not present in corpus")
        sel_tokens += by_id[sid].token_count
    task_tokens = per_task.get(task, {"tokens": 0})["tokens"]
    pct_task = 100.0 * sel_tokens / task_tokens if task_tokens else 0.0
    pct_ref = None
    if reference_total_tokens is not None:
        pct_ref = 100.0 * sel_tokens / reference_total_tokens
    return BudgetReport(
        per_task=per_task,
        selected_samples=len(selected_ids),
        selected_tokens=sel_tokens,
        task=task,
        percent_of_task=pct_task,
        percent_of_reference=pct_ref,
        reference_tokens=reference_total_tokens,
    )


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CoreselectError as e:
        raise StageError(name, e) from e


def run_pipeline(cfg):
    """Execute every stage and write all artifacts into cfg.output_dir.

    Returns (SelectionResult, BudgetReport).
    """
    os.makedirs(cfg.output_dir, exist_ok=True)

    corpus = _stage("load", load_corpus, cfg.corpus)
    store = _stage("load", read_store, cfg.embeddings)
    _stage("align", check_alignment, store, corpus)
    if not store.normalized:
        raise StageError("normalize-check", NotNormalized(
            "embedding store is not normalized; run `pool` first"))

    k = cfg.k if cfg.k is not None else clustering.default_k(store.n)
    model = _stage("cluster", clustering.kmeans, store, clustering.KMeansConfig(
        k=k, max_iters=cfg.max_iters, tol=cfg.tol, seed=cfg.seed))
    clustering.write_cluster_model(model, os.path.join(cfg.output_dir, "clusters.bin"))

    centers = _stage("centers", center_finder.find_task_centers,
                     store, model, corpus, cfg.task)
    center_finder.write_task_centers(
        centers, corpus, os.path.join(cfg.output_dir, "centers.jsonl"))

    result = _stage("select", _run_method, cfg, store, corpus, centers)
    sampler.write_selection(result, corpus,
                            os.path.join(cfg.output_dir, "selection.txt"))

    selected_ids = [corpus[i].id for i in result.indices]
    report = _stage("stats", stats, corpus, cfg.task, selected_ids,
                    cfg.reference_tokens)
    with open(os.path.join(cfg.output_dir, "budget_report.json"), "w",
              encoding="utf-8") as f:
        json.dump(report.to_dict(), f, sort_keys=True, indent=2)
        f.write("\n")
    return result, report


def _run_method(cfg, store, corpus, centers):
    rows = center_finder.task_rows(corpus, cfg.task)
    budget = sampler.SelectionBudget.from_proportion(cfg.proportion, len(rows))
    if cfg.method == "coreset":
        if cfg.initial == "auto":
            initial = centers.task_center_index
        else:
            ids = [corpus[i].id for i in rows]
            if cfg.initial not in ids:
                raise UnknownId(
                    f"initial id {cfg.initial!r} is not a sample of task {cfg.task!r}")
            initial = rows[ids.index(cfg.initial)]
        return sampler.kcenter_greedy(store, corpus, cfg.task, initial, budget)
    if cfg.method == "topk":
        return sampler.top_k(store, corpus, cfg.task,
                             centers.distribution_center, budget)
    if cfg.method == "leastk":
        return sampler.least_k(store, corpus, cfg.task,
                               centers.distribution_center, budget)
    if cfg.method == "mixed":
        return sampler.mixed(store, corpus, cfg.task,
                             centers.distribution_center, budget)
    return sampler.random_baseline(store, corpus, cfg.task, budget, cfg.seed)

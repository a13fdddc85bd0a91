"""Command-line entry point.

Subcommands mirror the pipeline stages (pool, cluster, centers, select,
score, stats) plus `run` for the whole chain. A JSON config file may
supply any flag; explicit flags win.

Usage examples:
    coreselect pool --tokens toks.ltdt --output embed.ltde
    coreselect cluster --embeddings embed.ltde --k 8 --seed 1 --output clusters.bin
    coreselect run --config run.json --method coreset --output-dir out/
"""

import argparse
import json
import sys

from coreselect import center_finder, clustering, pipeline, sampler, scoring
from coreselect.data_model import load_corpus
from coreselect.embedding_store import (
    check_alignment,
    normalize_store,
    pool_token_file,
    read_store,
    write_store,
)
from coreselect.errors import CoreselectError, FormatError


def _load_config(path):
    with open(path, "r", encoding="utf-8") as f:
        line = f.readline().strip()
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise FormatError("config file must hold a single JSON object")
    return obj


def _merged(args, keys):
    """Start from config-file values, overridden by explicitly-set flags."""
    values = {}
    if getattr(args, "config", None):
        cfg = _load_config(args.config)
        for key in keys:
            if key in cfg:
                values[key] = cfg[key]
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    missing = [k for k in keys
               if k not in values and k in ("corpus", "embeddings", "task",
                                            "output_dir", "output")]
    if missing:
        raise CoreselectError(f"missing required option(s): {', '.join(missing)}")
    return values


def cmd_pool(args):
    if args.tokens:
        store = pool_token_file(args.tokens)
    else:
        store = normalize_store(read_store(args.embeddings))
    if args.corpus:
        check_alignment(store, load_corpus(args.corpus))
    write_store(store, args.output)
    print(f"pooled {store.n} x {store.d} embeddings -> {args.output}")


def cmd_cluster(args):
    store = read_store(args.embeddings)
    k = args.k if args.k is not None else clustering.default_k(store.n)
    cfg = clustering.KMeansConfig(k=k, max_iters=args.max_iters,
                                  tol=args.tol, seed=args.seed)
    model = clustering.kmeans(store, cfg)
    clustering.write_cluster_model(model, args.output)
    print(f"k={k} inertia={model.inertia:.6f} iters={len(model.inertia_history)} "
          f"-> {args.output}")


def cmd_centers(args):
    corpus = load_corpus(args.corpus)
    store = read_store(args.embeddings)
    check_alignment(store, corpus)
    model = clustering.read_cluster_model(args.clusters)
    centers = center_finder.find_task_centers(store, model, corpus, args.task)
    center_finder.write_task_centers(centers, corpus, args.output)
    print(f"task={args.task} modal_cluster={centers.modal_cluster} "
          f"center_id={corpus[centers.task_center_index].id} -> {args.output}")


def cmd_select(args):
    values = _merged(args, ("corpus", "embeddings", "task", "method",
                            "proportion", "seed", "initial", "clusters",
                            "output"))
    corpus = load_corpus(values["corpus"])
    store = read_store(values["embeddings"])
    check_alignment(store, corpus)
    task = values["task"]
    method = values.get("method", "coreset")
    rows = center_finder.task_rows(corpus, task)
    budget = sampler.SelectionBudget.from_proportion(
        float(values.get("proportion", 0.1)), len(rows))
    seed = int(values.get("seed", 0))

    if method == "random":
        result = sampler.random_baseline(store, corpus, task, budget, seed)
    else:
        if "clusters" not in values:
            raise CoreselectError(f"method {method!r} needs --clusters")
        model = clustering.read_cluster_model(values["clusters"])
        centers = center_finder.find_task_centers(store, model, corpus, task)
        cfg = pipeline.PipelineConfig(
            corpus=values["corpus"], embeddings=values["embeddings"], task=task,
            output_dir=".", proportion=budget.proportion, method=method,
            seed=seed, initial=values.get("initial", "auto"))
        result = pipeline._run_method(cfg, store, corpus, centers)
    sampler.write_selection(result, corpus, values["output"])
    print(f"method={result.method} selected={len(result.indices)} "
          f"coverage_radius={result.coverage_radius:.6f} -> {values['output']}")


def cmd_score(args):
    acc = scoring.score_file(args.input, args.output)
    print(f"accuracy={acc:.4f} -> {args.output}")


def cmd_stats(args):
    corpus = load_corpus(args.corpus)
    header, ids = sampler.read_selection(args.selection)
    report = pipeline.stats(corpus, header.get("task", ""), ids,
                            args.reference_tokens)
    print(json.dumps(report.to_dict(), sort_keys=True, indent=2))


def cmd_run(args):
    values = _merged(args, ("corpus", "embeddings", "task", "k", "proportion",
                            "method", "seed", "max_iters", "tol", "initial",
                            "reference_tokens", "output_dir"))
    cfg = pipeline.PipelineConfig(
        corpus=values["corpus"],
        embeddings=values["embeddings"],
        task=values["task"],
        output_dir=values["output_dir"],
        proportion=float(values.get("proportion", 0.1)),
        method=values.get("method", "coreset"),
        k=values.get("k"),
        seed=int(values.get("seed", 0)),
        max_iters=int(values.get("max_iters", 100)),
        tol=float(values.get("tol", 1e-4)),
        initial=values.get("initial", "auto"),
        reference_tokens=values.get("reference_tokens"),
    )
    result, report = pipeline.run_pipeline(cfg)
    print(f"method={result.method} selected={len(result.indices)} "
          f"tokens={report.selected_tokens} "
          f"percent_of_task={report.percent_of_task:.2f}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coreselect",
        description="Coreset-based training-data selection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pool", help="pool/normalize embeddings into an LTDE store")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tokens", help="per-token LTDT input file")
    g.add_argument("--embeddings", help="unnormalized LTDE input file")
    p.add_argument("--corpus", help="optional corpus to check id alignment")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("cluster", help="K-Means over a normalized store")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("centers", help="distribution + task center for one task")
    p.add_argument("--corpus", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--clusters", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_centers)

    p = sub.add_parser("select", help="budgeted subset selection")
    p.add_argument("--config")
    p.add_argument("--corpus")
    p.add_argument("--embeddings")
    p.add_argument("--clusters")
    p.add_argument("--task")
    p.add_argument("--method", choices=sampler.METHODS)
    p.add_argument("--proportion", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--initial", help="'auto' or a sample id")
    p.add_argument("--output")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("score", help="answer-option scoring over a probs file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="token-budget report for a selection")
    p.add_argument("--corpus", required=True)
    p.add_argument("--selection", required=True)
    p.add_argument("--reference-tokens", dest="reference_tokens", type=int)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("run", help="full pipeline")
    p.add_argument("--config")
    p.add_argument("--corpus")
    p.add_argument("--embeddings")
    p.add_argument("--task")
    p.add_argument("--k", type=int)
    p.add_argument("--proportion", type=float)
    p.add_argument("--method", choices=sampler.METHODS)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--initial")
    p.add_argument("--reference-tokens", dest="reference_tokens", type=int)
    p.add_argument("--output-dir", dest="output_dir")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CoreselectError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Standalone extraction commands.

    embextract extract --corpus raw.jsonl --model ./model --out prefix
    embextract probs   --corpus raw.jsonl --model ./model --out probs.jsonl
"""

import argparse
import sys

from embextract.extract import (
    EmptyOptions,
    ExtractorConfig,
    ModelLoadError,
    emit_option_probs,
    extract,
)


def _add_model_flags(p):
    p.add_argument("--model", required=True, help="model id or local path")
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--max-seq-len", type=int, default=128)
    p.add_argument("--device", default="cpu")


def main(argv=None):
    parser = argparse.ArgumentParser(prog="embextract", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="export embeddings + corpus metadata")
    _add_model_flags(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output prefix")
    p.add_argument("--per-token", action="store_true",
                   help="dump per-token matrices (LTDT) instead of pooling")
    p = sub.add_parser("probs", help="export per-option token probabilities")
    _add_model_flags(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    cfg = ExtractorConfig(model=args.model, batch_size=args.batch_size,
                          max_seq_len=args.max_seq_len, device=args.device,
                          pool_here=not getattr(args, "per_token", False))
    try:
        if args.command == "extract":
            metadata = extract(args.corpus, cfg, args.out)
            print(f"extracted {len(metadata)} samples -> {args.out}.*")
        else:
            rows = emit_option_probs(args.corpus, cfg, args.out)
            print(f"scored {len(rows)} samples -> {args.out}")
    except (ModelLoadError, EmptyOptions, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

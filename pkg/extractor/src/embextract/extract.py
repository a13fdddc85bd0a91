"""Run a causal LM over instruction-formatted text and export embeddings.

Per sample: tokenize the full text, right-truncate to the configured
maximum (recorded in metadata), take the final hidden layer, drop padding
positions, and either mean-pool here (LTDE output) or dump the per-token
matrix (LTDT output) so the consumer can pool and cross-check.
"""

import os
from dataclasses import dataclass

import numpy as np
import torch

from embextract.formats import read_raw_corpus, write_ltde, write_ltdt, write_metadata


class ModelLoadError(Exception):
    pass


class EmptyOptions(Exception):
    pass


@dataclass(frozen=True)
class ExtractorConfig:
    model: str
    batch_size: int = 8
    max_seq_len: int = 128
    device: str = "cpu"
    pool_here: bool = True

    def __post_init__(self):
        if self.max_seq_len < 1:
            raise ValueError("max_seq_len must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def load_model(cfg):
    from transformers import AutoModelForCausalLM, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(cfg.model)
        model = AutoModelForCausalLM.from_pretrained(cfg.model)
    except (OSError, ValueError) as e:
        raise ModelLoadError(f"cannot load model {cfg.model!r}: {e}") from e
    if tokenizer.pad_token is None:
        tokenizer.pad_token = tokenizer.eos_token or tokenizer.unk_token
    model.eval()
    model.to(cfg.device)
    return tokenizer, model


def _batched(seq, size):
    for start in range(0, len(seq), size):
        yield seq[start:start + size]


def extract(corpus_path, cfg, out_prefix):
    """Write <prefix>.ltde (pooled) or <prefix>.ltdt plus <prefix>.meta.jsonl.

    Returns the list of metadata rows. Metadata token_count is the true
    tokenizer count of the full text, before any truncation.
    """
    rows = read_raw_corpus(corpus_path)
    tokenizer, model = load_model(cfg)

    pooled = []
    token_items = []
    metadata = []
    with torch.no_grad():
        for batch in _batched(rows, cfg.batch_size):
            encodings = [tokenizer(r["text"], add_special_tokens=False)["input_ids"]
                         for r in batch]
            full_lengths = [len(e) for e in encodings]
            clipped = [e[:cfg.max_seq_len] for e in encodings]
            max_len = max(len(e) for e in clipped)
            pad_id = tokenizer.pad_token_id
            input_ids = torch.full((len(batch), max_len), pad_id, dtype=torch.long)
            mask = torch.zeros((len(batch), max_len), dtype=torch.long)
            for i, ids in enumerate(clipped):
                input_ids[i, :len(ids)] = torch.tensor(ids)
                mask[i, :len(ids)] = 1
            out = model(input_ids=input_ids.to(cfg.device),
                        attention_mask=mask.to(cfg.device),
                        output_hidden_states=True)
            hidden = out.hidden_states[-1].cpu().to(torch.float32)
            for i, (row, ids) in enumerate(zip(batch, clipped)):
                tokens = hidden[i, :len(ids)].numpy()   # padding excluded
                if cfg.pool_here:
                    pooled.append(tokens.mean(axis=0))
                else:
                    token_items.append((row["id"], tokens))
                metadata.append({
                    "id": row["id"],
                    "task": row.get("task", ""),
                    "dataset": row.get("dataset", ""),
                    "text": row["text"],
                    "token_count": full_lengths[i],
                    "truncated": full_lengths[i] > cfg.max_seq_len,
                })

    ids = [r["id"] for r in rows]
    if cfg.pool_here:
        write_ltde(f"{out_prefix}.ltde", np.stack(pooled), ids, normalized=False)
    else:
        write_ltdt(f"{out_prefix}.ltdt", token_items)
    write_metadata(f"{out_prefix}.meta.jsonl", metadata)
    return metadata


def option_token_probs(tokenizer, model, device, prompt, option):
    """Probability of each option token given prompt + preceding option tokens."""
    prompt_ids = tokenizer(prompt, add_special_tokens=False)["input_ids"]
    option_ids = tokenizer(option, add_special_tokens=False)["input_ids"]
    if not option_ids:
        raise EmptyOptions(f"option {option!r} tokenizes to nothing")
    if not prompt_ids:
        prompt_ids = [tokenizer.pad_token_id]
    ids = torch.tensor([prompt_ids + option_ids], device=device)
    with torch.no_grad():
        logits = model(input_ids=ids).logits[0]
    # logits at position t predict token t+1
    start = len(prompt_ids) - 1
    probs = torch.softmax(logits[start:start + len(option_ids)].float(), dim=-1)
    picked = probs[torch.arange(len(option_ids)), torch.tensor(option_ids)]
    return [float(p) for p in picked]


def emit_option_probs(corpus_path, cfg, out_path):
    """Write the scoring-input file: per-option token probabilities."""
    rows = read_raw_corpus(corpus_path)
    tokenizer, model = load_model(cfg)
    out_rows = []
    for row in rows:
        options = row.get("options") or []
        if len(options) < 2:
            raise EmptyOptions(f"sample {row['id']!r} has {len(options)} options")
        probs = [option_token_probs(tokenizer, model, cfg.device,
                                    row["text"], opt)
                 for opt in options]
        out_rows.append({"id": row["id"], "gold": int(row.get("gold", 0)),
                         "options": probs})
    from embextract.formats import write_scoring_input
    write_scoring_input(out_path, out_rows)
    return out_rows

import json

import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast

WORDS = [f"w{i}" for i in range(12)]


def build_tokenizer():
    vocab = {"[PAD]": 0, "[UNK]": 1}
    for w in WORDS:
        vocab[w] = len(vocab)
    tok = Tokenizer(models.WordLevel(vocab, unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    return PreTrainedTokenizerFast(tokenizer_object=tok,
                                   pad_token="[PAD]", unk_token="[UNK]")


def build_model(tokenizer, seed=0):
    torch.manual_seed(seed)
    config = GPT2Config(vocab_size=len(tokenizer), n_positions=128,
                        n_embd=32, n_layer=2, n_head=2)
    return GPT2LMHeadModel(config)


def successor(i):
    return (i + 7) % len(WORDS)


def cycle_sentence(start, length):
    idx = start
    words = []
    for _ in range(length):
        words.append(WORDS[idx])
        idx = successor(idx)
    return " ".join(words)


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """Random-weight tiny causal LM + word-level tokenizer, saved locally."""
    path = tmp_path_factory.mktemp("tiny_model")
    tokenizer = build_tokenizer()
    model = build_model(tokenizer)
    tokenizer.save_pretrained(path)
    model.save_pretrained(path)
    return str(path)


@pytest.fixture(scope="session")
def trained_model_dir(tmp_path_factory):
    """Tiny LM trained on a deterministic-successor word cycle.

    A couple hundred steps is enough for the model to put most probability
    mass on the true next word, which the forced-decoding check relies on.
    """
    path = tmp_path_factory.mktemp("trained_model")
    tokenizer = build_tokenizer()
    model = build_model(tokenizer, seed=1)
    optimizer = torch.optim.Adam(model.parameters(), lr=3e-3)
    torch.manual_seed(2)
    model.train()
    for step in range(200):
        starts = torch.randint(0, len(WORDS), (8,))
        texts = [cycle_sentence(int(s), 16) for s in starts]
        batch = tokenizer(texts, return_tensors="pt", add_special_tokens=False)
        out = model(input_ids=batch["input_ids"], labels=batch["input_ids"])
        optimizer.zero_grad()
        out.loss.backward()
        optimizer.step()
    model.eval()
    tokenizer.save_pretrained(path)
    model.save_pretrained(path)
    return str(path)


def write_raw_corpus(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row) + "\n")


@pytest.fixture
def raw_corpus_50(tmp_path):
    import numpy as np
    rng = np.random.default_rng(42)
    rows = []
    for i in range(50):
        length = int(rng.integers(3, 20))
        words = [WORDS[int(w)] for w in rng.integers(0, len(WORDS), length)]
        rows.append({"id": f"s{i}", "task": "NLI", "dataset": "RTE",
                     "text": " ".join(words)})
    path = tmp_path / "raw.jsonl"
    write_raw_corpus(path, rows)
    return path, rows

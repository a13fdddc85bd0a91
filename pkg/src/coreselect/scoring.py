"""Answer-option scoring: product of option token probabilities, argmax.

Scores are accumulated in log space so long options stay finite; the
argmax is unchanged because log is monotone.
"""

import json
import math
from dataclasses import dataclass

from coreselect.errors import (
    InvalidProbability,
    LengthMismatch,
    ParseError,
    TooFewOptions,
)


@dataclass(frozen=True)
class OptionProbabilities:
    option_index: int
    token_probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "token_probs", tuple(self.token_probs))
        if not self.token_probs:
            raise InvalidProbability(
                f"option {self.option_index}: needs at least one token probability")


@dataclass(frozen=True)
class Prediction:
    chosen: int
    scores: tuple


def option_probability(opt):
    """Log of the product of the option's token probabilities."""
    for j, p in enumerate(opt.token_probs):
        if not (0.0 < p <= 1.0):
            raise InvalidProbability(
                f"option {opt.option_index}, token {j}: probability {p} not in (0, 1]")
    return math.fsum(math.log(p) for p in opt.token_probs)


def predict(options):
    """Highest-scoring option wins; exact ties go to the lowest option index."""
    if len(options) < 2:
        raise TooFewOptions(f"need at least 2 options, got {len(options)}")
    scores = tuple(option_probability(o) for o in options)
    best = max(scores)
    chosen = scores.index(best)
    return Prediction(chosen=chosen, scores=scores)


def accuracy(predictions, gold):
    if len(predictions) != len(gold):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(gold)} gold labels")
    if not predictions:
        return 0.0
    hits = sum(1 for p, g in zip(predictions, gold) if p.chosen == g)
    return hits / len(predictions)


def read_scoring_file(path):
    """Read line-delimited scoring inputs: id, gold index, per-option probs."""
    examples = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(str(e), line=lineno) from e
            for key in ("id", "gold", "options"):
                if key not in obj:
                    raise ParseError(f"missing key {key!r}", line=lineno)
            options = [OptionProbabilities(option_index=i, token_probs=probs)
                       for i, probs in enumerate(obj["options"])]
            examples.append((obj["id"], int(obj["gold"]), options))
    return examples


def score_file(in_path, out_path):
    """Score every example and write per-example predictions plus a summary.

    Returns the aggregate accuracy.
    """
    examples = read_scoring_file(in_path)
    predictions = []
    gold = []
    with open(out_path, "w", encoding="utf-8") as f:
        for ex_id, g, options in examples:
            pred = predict(options)
            predictions.append(pred)
            gold.append(g)
            f.write(json.dumps({
                "id": ex_id,
                "chosen": pred.chosen,
                "gold": g,
                "correct": pred.chosen == g,
                "scores": list(pred.scores),
            }, sort_keys=True) + "\n")
        acc = accuracy(predictions, gold)
        f.write(json.dumps({"summary": True, "n": len(predictions),
                            "accuracy": acc}, sort_keys=True) + "\n")
    return acc

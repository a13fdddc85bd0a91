"""Corpus records and instruction-style re-formatting.

A RawSample holds the raw task fields (premise, hypothesis, ...); an
InstructionTemplate turns it into the full training text with the gold
answer appended at the end. Downstream modules only ever see the
resulting SampleRecord.
"""

import json
import string
from dataclasses import dataclass

from coreselect.errors import (
    DatasetMismatch,
    DuplicateId,
    MissingField,
    ParseError,
)

_formatter = string.Formatter()


def whitespace_token_count(text):
    """Fallback token counter: whitespace split, floored at 1 for non-empty text."""
    if not text:
        return 0
    return max(1, len(text.split()))


@dataclass(frozen=True)
class RawSample:
    id: str
    task: str
    dataset: str
    fields: dict
    answer: str
    options: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))
        object.__setattr__(self, "fields", dict(self.fields))
        if self.options and self.answer not in self.options:
            raise ValueError(
                f"sample {self.id!r}: answer {self.answer!r} not among options")


@dataclass(frozen=True)
class InstructionTemplate:
    """One fixed prompt per dataset; placeholders use {name} syntax."""

    dataset: str
    pattern: str
    answer_separator: str = " "

    def placeholders(self):
        names = []
        for _, name, _, _ in _formatter.parse(self.pattern):
            if name is not None:
                names.append(name)
        return names


@dataclass(frozen=True)
class SampleRecord:
    id: str
    task: str
    dataset: str
    text: str = None
    token_count: int = 0

    def __post_init__(self):
        if self.text == "":
            raise ValueError(f"sample {self.id!r}: text must be non-empty when present")
        if self.token_count < 0:
            raise ValueError(f"sample {self.id!r}: negative token_count")
        if self.text is not None and self.token_count < 1:
            raise ValueError(f"sample {self.id!r}: token_count must be >= 1")


def apply_template(sample, template, token_counter=whitespace_token_count):
    """Render sample fields through the template and append the answer."""
    if template.dataset != sample.dataset:
        raise DatasetMismatch(
            f"template is for {template.dataset!r}, sample is {sample.dataset!r}")
    for name in template.placeholders():
        if not name or name not in sample.fields:
            raise MissingField(
                f"placeholder {{{name}}} has no field in sample {sample.id!r}")
    body = template.pattern.format(**sample.fields)
    text = body + template.answer_separator + sample.answer
    return SampleRecord(
        id=sample.id,
        task=sample.task,
        dataset=sample.dataset,
        text=text,
        token_count=token_counter(text),
    )


_REQUIRED_KEYS = ("id", "task", "dataset", "token_count")


def load_corpus(path):
    """Read a line-delimited corpus metadata file, in file order."""
    records = []
    seen = set()
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(str(e), line=lineno) from e
            if not isinstance(obj, dict):
                raise ParseError("record is not an object", line=lineno)
            for key in _REQUIRED_KEYS:
                if key not in obj:
                    raise ParseError(f"missing key {key!r}", line=lineno)
            if obj["id"] in seen:
                raise DuplicateId(f"duplicate id {obj['id']!r} at line {lineno}")
            seen.add(obj["id"])
            try:
                records.append(SampleRecord(
                    id=obj["id"],
                    task=obj["task"],
                    dataset=obj["dataset"],
                    text=obj.get("text"),
                    token_count=int(obj["token_count"]),
                ))
            except (ValueError, TypeError) as e:
                raise ParseError(str(e), line=lineno) from e
    return records


def write_corpus(records, path):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            obj = {"id": r.id, "task": r.task, "dataset": r.dataset,
                   "token_count": r.token_count}
            if r.text is not None:
                obj["text"] = r.text
            f.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")

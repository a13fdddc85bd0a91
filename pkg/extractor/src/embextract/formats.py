"""Writers for the interchange files the selection toolkit consumes.

Implemented against the published format spec (not imported from the
consumer) so this package stays a standalone producer:

* LTDE — magic "LTDE", u16 version=1, u8 normalized, u8 reserved, u64 n,
  u32 d, n*d little-endian float32 row-major, n ids (u16 len + UTF-8).
* LTDT — magic "LTDT", u16 version=1, u16 reserved, u64 n, u32 d, then
  per sample: u16 id len + id, u32 l, l*d little-endian float32.
* Corpus metadata — JSON lines with id, task, dataset, text, token_count.
* Scoring input — JSON lines with id, gold, options (per-option
  token-probability arrays).
"""

import json

import numpy as np

VERSION = 1


def write_ltde(path, matrix, ids, normalized=False):
    import struct

    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    n, d = matrix.shape
    if len(ids) != n:
        raise ValueError(f"{len(ids)} ids for {n} rows")
    with open(path, "wb") as f:
        f.write(b"LTDE")
        f.write(struct.pack("<HBBQI", VERSION, int(normalized), 0, n, d))
        f.write(matrix.tobytes())
        for sid in ids:
            raw = sid.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)


def write_ltdt(path, items):
    import struct

    if not items:
        raise ValueError("token file needs at least one sample")
    d = np.asarray(items[0][1]).shape[1]
    with open(path, "wb") as f:
        f.write(b"LTDT")
        f.write(struct.pack("<HHQI", VERSION, 0, len(items), d))
        for sid, mat in items:
            mat = np.ascontiguousarray(mat, dtype="<f4")
            if mat.ndim != 2 or mat.shape[1] != d:
                raise ValueError(f"sample {sid!r}: expected l x {d}, got {mat.shape}")
            raw = sid.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
            f.write(struct.pack("<I", mat.shape[0]))
            f.write(mat.tobytes())


def write_metadata(path, rows):
    """rows: dicts with id, task, dataset, text, token_count (+ extras)."""
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def write_scoring_input(path, rows):
    """rows: dicts with id, gold and options = list of probability lists."""
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, sort_keys=True) + "\n")


def read_raw_corpus(path):
    """Extractor input: JSON lines with id/task/dataset/text (+ options, gold)."""
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            for key in ("id", "text"):
                if key not in obj:
                    raise ValueError(f"line {lineno}: missing key {key!r}")
            rows.append(obj)
    return rows

"""Sentence-embedding storage and transforms.

Embeddings live in an n x d float32 matrix aligned row-for-row with a
corpus. Two binary formats are defined here:

* LTDE — one vector per sample (see write_store/read_store).
* LTDT — variable-length per-token matrices, the input to mean pooling.
"""

import struct
from dataclasses import dataclass, field

import numpy as np

from coreselect.errors import (
    AlignmentError,
    DimensionMismatch,
    EmptyInput,
    FormatError,
    TruncatedFile,
    ZeroVector,
)

MAGIC = b"LTDE"
TOKEN_MAGIC = b"LTDT"
VERSION = 1
NORM_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingStore:
    """n x d float32 sentence embeddings plus positional sample ids."""

    matrix: np.ndarray
    normalized: bool
    ids: tuple = field(default_factory=tuple)

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-D, got {m.ndim}-D")
        if m.dtype != np.float32:
            object.__setattr__(self, "matrix", m.astype(np.float32))
            m = self.matrix
        if not np.all(np.isfinite(m)):
            raise FormatError("embedding matrix contains non-finite entries")
        if len(self.ids) != m.shape[0]:
            raise DimensionMismatch(
                f"{len(self.ids)} ids for {m.shape[0]} rows")
        object.__setattr__(self, "ids", tuple(self.ids))
        if self.normalized:
            norms = np.linalg.norm(m.astype(np.float64), axis=1)
            bad = np.where(np.abs(norms - 1.0) > NORM_TOL)[0]
            if bad.size:
                raise FormatError(
                    f"store flagged normalized but row {bad[0]} has norm {norms[bad[0]]}")

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def d(self):
        return self.matrix.shape[1]


def mean_pool(tokens):
    """Average l x d token embeddings into a single d-vector."""
    tokens = np.asarray(tokens)
    if tokens.ndim != 2:
        raise DimensionMismatch(f"token matrix must be 2-D, got {tokens.ndim}-D")
    if tokens.shape[0] == 0:
        raise EmptyInput("no token rows to pool")
    return tokens.astype(np.float64).mean(axis=0)


def l2_normalize(v):
    """Scale v to unit Euclidean length. Degenerate input raises ZeroVector."""
    v = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVector("cannot normalize a zero (or non-finite) vector")
    return v / norm


def normalize_store(store):
    """Return a copy of the store with every row L2-normalized."""
    rows = store.matrix.astype(np.float64)
    norms = np.linalg.norm(rows, axis=1)
    zero = np.where(norms == 0.0)[0]
    if zero.size:
        raise ZeroVector(f"row {zero[0]} (id {store.ids[zero[0]]}) has zero norm")
    out = (rows / norms[:, None]).astype(np.float32)
    # float32 rounding can leave norms a hair off 1; renormalize once more
    norms32 = np.linalg.norm(out.astype(np.float64), axis=1)
    out = (out.astype(np.float64) / norms32[:, None]).astype(np.float32)
    return EmbeddingStore(matrix=out, normalized=True, ids=store.ids)


def check_alignment(store, records):
    """Raise AlignmentError unless store ids equal corpus ids in order."""
    corpus_ids = tuple(r.id for r in records)
    if store.ids != corpus_ids:
        n = min(len(store.ids), len(corpus_ids))
        for i in range(n):
            if store.ids[i] != corpus_ids[i]:
                raise AlignmentError(
                    f"id mismatch at row {i}: embeddings have "
                    f"{store.ids[i]!r}, corpus has {corpus_ids[i]!r}")
        raise AlignmentError(
            f"{len(store.ids)} embedding rows vs {len(corpus_ids)} corpus records")


def _read_exact(f, size, what):
    data = f.read(size)
    if len(data) != size:
        raise TruncatedFile(f"file ended while reading {what}")
    return data


def write_store(store, path_or_file):
    if hasattr(path_or_file, "write"):
        _write_store(store, path_or_file)
    else:
        with open(path_or_file, "wb") as f:
            _write_store(store, f)


def _write_store(store, f):
    n, d = store.matrix.shape
    f.write(MAGIC)
    f.write(struct.pack("<HBBQI", VERSION, int(store.normalized), 0, n, d))
    f.write(np.ascontiguousarray(store.matrix, dtype="<f4").tobytes())
    for sid in store.ids:
        raw = sid.encode("utf-8")
        f.write(struct.pack("<H", len(raw)))
        f.write(raw)


def read_store(path_or_file):
    if hasattr(path_or_file, "read"):
        return _read_store(path_or_file)
    with open(path_or_file, "rb") as f:
        return _read_store(f)


def _read_store(f):
    magic = f.read(4)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version, normalized, _reserved, n, d = struct.unpack(
        "<HBBQI", _read_exact(f, 16, "header"))
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    payload = _read_exact(f, n * d * 4, f"{n}x{d} matrix")
    matrix = np.frombuffer(payload, dtype="<f4").reshape(n, d).copy()
    ids = []
    for i in range(n):
        (length,) = struct.unpack("<H", _read_exact(f, 2, f"id {i} length"))
        ids.append(_read_exact(f, length, f"id {i}").decode("utf-8"))
    return EmbeddingStore(matrix=matrix, normalized=bool(normalized), ids=tuple(ids))


def write_token_file(items, path):
    """Write per-token matrices: a list of (id, l x d float array) pairs."""
    if not items:
        raise EmptyInput("token file needs at least one sample")
    d = np.asarray(items[0][1]).shape[1]
    with open(path, "wb") as f:
        f.write(TOKEN_MAGIC)
        f.write(struct.pack("<HHQI", VERSION, 0, len(items), d))
        for sid, mat in items:
            mat = np.ascontiguousarray(mat, dtype="<f4")
            if mat.ndim != 2 or mat.shape[1] != d:
                raise DimensionMismatch(
                    f"sample {sid!r}: expected l x {d} matrix, got {mat.shape}")
            raw = sid.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
            f.write(struct.pack("<I", mat.shape[0]))
            f.write(mat.tobytes())


def read_token_file(path):
    """Read per-token matrices back as a list of (id, l x d float32) pairs."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != TOKEN_MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {TOKEN_MAGIC!r}")
        version, _reserved, n, d = struct.unpack("<HHQI", _read_exact(f, 16, "header"))
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")
        items = []
        for i in range(n):
            (length,) = struct.unpack("<H", _read_exact(f, 2, f"id {i} length"))
            sid = _read_exact(f, length, f"id {i}").decode("utf-8")
            (l,) = struct.unpack("<I", _read_exact(f, 4, f"sample {sid} row count"))
            payload = _read_exact(f, l * d * 4, f"sample {sid} matrix")
            items.append((sid, np.frombuffer(payload, dtype="<f4").reshape(l, d).copy()))
        return items


def pool_token_file(path):
    """Mean-pool and L2-normalize a per-token file into an EmbeddingStore."""
    items = read_token_file(path)
    if not items:
        raise EmptyInput("token file holds no samples")
    ids = tuple(sid for sid, _ in items)
    rows = np.stack([l2_normalize(mean_pool(mat)) for _, mat in items])
    raw = EmbeddingStore(matrix=rows.astype(np.float32), normalized=False, ids=ids)
    return normalize_store(raw)

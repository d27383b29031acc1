"""The sparse non-negative PMI base space and its binary persistence format.

Weighting applies a smoothed, log2-scaled positive PMI to every stored
co-occurrence count:

    M[w, c] = log2( n_wc * W / (n_w * (n_c + a)) + 1 )

where W is the total occurrence count of target-vocabulary words, n_w and
n_c are the unigram frequencies from the target and context vocabularies,
and a is a non-negative smoothing constant that damps rare contexts. Counts
of zero are never stored, so every stored value is strictly positive and
zeros stay implicit.

File format (versioned, little-endian throughout):

    magic      8 bytes   b"PMISPACE"
    version    u32       currently 1
    window     u32
    smoothing  f64       the constant a (integers round-trip exactly)
    vocab      target vocabulary block
    vocab      context vocabulary block
    n_rows     u64       must equal the target vocabulary size
    rows       per target row:
                   nnz    u32
                   deltas nnz * u32   first entry is the context id itself,
                                      later entries are successive id gaps
                   values nnz * f64   raw PMI values, bit-exact
    crc32      u32       zlib CRC-32 of everything after the magic

    vocabulary block:
        count  u64
        per word: length u32, UTF-8 bytes, frequency u64

A wrong magic or version raises :class:`FormatError`; truncation, checksum
mismatch, or any inconsistent length raises :class:`IntegrityError` and no
partial space is ever returned.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np
from scipy import sparse

from .corpus import CooccurrenceTable, Vocabulary
from .errors import ConsistencyError, FormatError, IntegrityError

_MAGIC = b"PMISPACE"
_VERSION = 1

# reference token count used to scale the smoothing constant down from the
# web-scale default of 10,000
_REFERENCE_TOTAL = 2_000_000_000
_REFERENCE_SMOOTHING = 10_000


def scaled_smoothing(total_tokens: int) -> int:
    """Default smoothing constant for a corpus of ``total_tokens`` words.

    The web-scale default of 10,000 assumes roughly 2e9 tokens; smaller
    corpora scale it down proportionally (rounded to the nearest integer).
    """
    if total_tokens < 0:
        raise ValueError("total_tokens must be >= 0")
    return round(_REFERENCE_SMOOTHING * total_tokens / _REFERENCE_TOTAL)


class BaseSpace:
    """Sparse non-negative PMI matrix over (target words x context words).

    Rows are CSR with strictly increasing context ids; absent entries are
    implicit zeros and are never materialized.
    """

    def __init__(
        self,
        matrix: sparse.csr_matrix,
        target_vocab: Vocabulary,
        context_vocab: Vocabulary,
        window: int,
        smoothing_a,
    ):
        matrix = matrix.tocsr()
        matrix.sort_indices()
        if matrix.shape != (len(target_vocab), len(context_vocab)):
            raise ValueError("matrix shape does not match the vocabularies")
        self.matrix = matrix
        self.target_vocab = target_vocab
        self.context_vocab = context_vocab
        self.window = int(window)
        self.smoothing_a = smoothing_a
        self._csc = None

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def row(self, word_id: int) -> tuple[np.ndarray, np.ndarray]:
        """Stored (context ids, values) for one target row, ids ascending."""
        lo, hi = self.matrix.indptr[word_id], self.matrix.indptr[word_id + 1]
        return self.matrix.indices[lo:hi], self.matrix.data[lo:hi]

    def row_support(self, word_id: int) -> np.ndarray:
        return self.row(word_id)[0]

    def value(self, word_id: int, context_id: int) -> float:
        ids, vals = self.row(word_id)
        pos = np.searchsorted(ids, context_id)
        if pos < len(ids) and ids[pos] == context_id:
            return float(vals[pos])
        return 0.0

    def dense_row_values(self, word_id: int, dims: np.ndarray) -> np.ndarray:
        """Raw values for one word over an arbitrary dim list, zeros filled."""
        dims = np.asarray(dims)
        ids, vals = self.row(word_id)
        out = np.zeros(len(dims), dtype=np.float64)
        if len(ids):
            pos = np.searchsorted(ids, dims)
            pos = np.minimum(pos, len(ids) - 1)
            hit = ids[pos] == dims
            out[hit] = vals[pos[hit]]
        return out

    def _columns(self) -> sparse.csc_matrix:
        if self._csc is None:
            csc = self.matrix.tocsc()
            csc.sort_indices()
            self._csc = csc
        return self._csc

    def column(self, context_id: int) -> tuple[np.ndarray, np.ndarray]:
        """Stored (word ids, values) for one context dim, ids ascending."""
        csc = self._columns()
        lo, hi = csc.indptr[context_id], csc.indptr[context_id + 1]
        return csc.indices[lo:hi], csc.data[lo:hi]

    def project_columns(self, dims: np.ndarray) -> np.ndarray:
        """Dense (targets x len(dims)) block of raw values, zeros filled."""
        return np.asarray(self._columns()[:, np.asarray(dims)].todense(), dtype=np.float64)


def weight_pmi(table: CooccurrenceTable, smoothing_a) -> BaseSpace:
    """Weight a co-occurrence table into a sparse positive PMI space.

    Every stored count n_wc maps to log2(n_wc * W / (n_w * (n_c + a)) + 1).
    Stored counts are >= 1, so every stored value is strictly positive; the
    entry layout (sparsity pattern) is preserved exactly.
    """
    if smoothing_a < 0:
        raise ValueError("smoothing_a must be >= 0")
    m = table.counts.tocsr()
    m.sort_indices()
    n_rows = m.shape[0]
    if n_rows != len(table.target_vocab) or m.shape[1] != len(table.context_vocab):
        raise ConsistencyError("table shape does not match its vocabularies")
    row_nnz = np.diff(m.indptr)
    if np.any((row_nnz > 0) & (table.target_vocab.freq <= 0)):
        raise ConsistencyError("a word with stored counts has zero frequency")
    W = float(table.target_vocab.total_in_vocab)
    row_ids = np.repeat(np.arange(n_rows), row_nnz)
    n_w = table.target_vocab.freq[row_ids].astype(np.float64)
    n_c = table.context_vocab.freq[m.indices].astype(np.float64)
    values = np.log2(m.data.astype(np.float64) * W / (n_w * (n_c + float(smoothing_a))) + 1.0)
    matrix = sparse.csr_matrix(
        (values, m.indices.copy(), m.indptr.copy()), shape=m.shape
    )
    return BaseSpace(matrix, table.target_vocab, table.context_vocab, table.window, smoothing_a)


def _write_vocab(buf: bytearray, vocab: Vocabulary) -> None:
    buf += struct.pack("<Q", len(vocab))
    for word, freq in zip(vocab.words, vocab.freq):
        raw = word.encode("utf-8")
        buf += struct.pack("<I", len(raw))
        buf += raw
        buf += struct.pack("<Q", int(freq))


class _Cursor:
    """Bounds-checked reader over an in-memory space file payload."""

    def __init__(self, data: bytes, offset: int = 0):
        self.data = data
        self.off = offset

    def take(self, n: int) -> bytes:
        if n < 0 or self.off + n > len(self.data):
            raise IntegrityError("space file truncated")
        out = self.data[self.off : self.off + n]
        self.off += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def array(self, dtype: str, count: int) -> np.ndarray:
        raw = self.take(count * np.dtype(dtype).itemsize)
        return np.frombuffer(raw, dtype=dtype, count=count)


def _read_vocab(cur: _Cursor) -> Vocabulary:
    count = cur.u64()
    words: list[str] = []
    freqs: list[int] = []
    for _ in range(count):
        length = cur.u32()
        raw = cur.take(length)
        try:
            words.append(raw.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise IntegrityError("space file vocabulary is not valid UTF-8") from exc
        freqs.append(cur.u64())
    try:
        return Vocabulary(words, freqs)
    except ValueError as exc:
        raise IntegrityError(f"space file vocabulary invalid: {exc}") from exc


def save_space(space: BaseSpace, path) -> None:
    """Write a space to ``path`` in the versioned binary format."""
    buf = bytearray()
    buf += _MAGIC
    buf += struct.pack("<II", _VERSION, space.window)
    buf += struct.pack("<d", float(space.smoothing_a))
    _write_vocab(buf, space.target_vocab)
    _write_vocab(buf, space.context_vocab)
    m = space.matrix
    buf += struct.pack("<Q", m.shape[0])
    indptr, indices, data = m.indptr, m.indices, m.data
    for i in range(m.shape[0]):
        lo, hi = int(indptr[i]), int(indptr[i + 1])
        nnz = hi - lo
        buf += struct.pack("<I", nnz)
        if nnz:
            ids = indices[lo:hi].astype(np.int64)
            deltas = np.empty(nnz, dtype="<u4")
            deltas[0] = ids[0]
            deltas[1:] = np.diff(ids)
            buf += deltas.tobytes()
            buf += data[lo:hi].astype("<f8", copy=False).tobytes()
    buf += struct.pack("<I", zlib.crc32(bytes(buf[8:])) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(buf))


def load_space(path) -> BaseSpace:
    """Read a space file, verifying magic, version, checksum, and layout."""
    data = Path(path).read_bytes()
    if len(data) < len(_MAGIC):
        raise IntegrityError("space file truncated")
    if data[: len(_MAGIC)] != _MAGIC:
        raise FormatError("not a space file (bad magic)")
    if len(data) < len(_MAGIC) + 4 + 4 + 8 + 4:
        raise IntegrityError("space file truncated")
    (version,) = struct.unpack_from("<I", data, 8)
    if version != _VERSION:
        raise FormatError(f"unsupported space file version {version}")
    (stored_crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[8:-4]) & 0xFFFFFFFF != stored_crc:
        raise IntegrityError("space file checksum mismatch")
    cur = _Cursor(data[:-4], offset=12)
    window = cur.u32()
    smoothing = cur.f64()
    if smoothing == int(smoothing):
        smoothing = int(smoothing)
    target_vocab = _read_vocab(cur)
    context_vocab = _read_vocab(cur)
    n_rows = cur.u64()
    if n_rows != len(target_vocab):
        raise IntegrityError("space file row count does not match vocabulary")
    n_cols = len(context_vocab)
    id_parts: list[np.ndarray] = []
    val_parts: list[np.ndarray] = []
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    for i in range(n_rows):
        nnz = cur.u32()
        indptr[i + 1] = indptr[i] + nnz
        if nnz:
            deltas = cur.array("<u4", nnz).astype(np.int64)
            ids = np.cumsum(deltas)
            if np.any(deltas[1:] < 1):
                raise IntegrityError("space file row ids are not strictly increasing")
            if ids[-1] >= n_cols:
                raise IntegrityError("space file context id out of range")
            id_parts.append(ids)
            val_parts.append(cur.array("<f8", nnz).copy())
    if cur.off != len(cur.data):
        raise IntegrityError("space file has trailing bytes")
    if id_parts:
        indices = np.concatenate(id_parts)
        values = np.concatenate(val_parts)
    else:
        indices = np.zeros(0, dtype=np.int64)
        values = np.zeros(0, dtype=np.float64)
    matrix = sparse.csr_matrix((values, indices, indptr), shape=(n_rows, n_cols))
    return BaseSpace(matrix, target_vocab, context_vocab, window, smoothing)

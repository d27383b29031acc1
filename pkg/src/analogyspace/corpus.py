"""Corpus ingestion: tokenization, vocabularies, windowed co-occurrence counts.

Everything here is deterministic. Vocabulary ranks break frequency ties
lexicographically, counting is plain integer arithmetic (no distance
weighting), and co-occurrence windows never cross document boundaries.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import DecodeError

_TOKEN_RE = re.compile(r"\w+")  # maximal runs of letters, digits, underscore


@dataclass(frozen=True)
class TokenStream:
    """Normalized tokens grouped by document.

    Document boundaries matter: co-occurrence windows never cross them.
    """

    documents: tuple[tuple[str, ...], ...]
    total_tokens: int

    @classmethod
    def from_documents(cls, documents: Iterable[Sequence[str]]) -> "TokenStream":
        docs = tuple(tuple(d) for d in documents if len(d) > 0)
        return cls(docs, sum(len(d) for d in docs))


def tokenize(raw_text: str, doc_delimiter: str = "line") -> TokenStream:
    """Lowercase ``raw_text`` and split it into word tokens.

    A token is a maximal run of letters, digits, and underscores; every
    other character separates tokens. ``doc_delimiter`` selects how the text
    is divided into documents: "line" treats each line as one document,
    "none" keeps the whole text as a single document. Empty documents are
    dropped.
    """
    if doc_delimiter == "line":
        chunks = raw_text.split("\n")
    elif doc_delimiter == "none":
        chunks = [raw_text]
    else:
        raise ValueError(f"unknown doc_delimiter: {doc_delimiter!r}")
    return TokenStream.from_documents(
        _TOKEN_RE.findall(chunk.lower()) for chunk in chunks
    )


def _read_text(path: Path) -> str:
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(
            f"{path}: invalid UTF-8 at byte offset {exc.start}",
            byte_offset=exc.start,
            path=str(path),
        ) from exc


def read_corpus(
    paths: Sequence[str | Path] | str | Path, docs_per: str = "line"
) -> TokenStream:
    """Read UTF-8 text into one token stream.

    Each path may be a file or a directory. Directory inputs contribute
    their files (sorted by name, recursively) as one document each; plain
    files are split per ``docs_per``, either "line" (default) or "file".
    Malformed encoding raises :class:`DecodeError` with the byte offset.
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    if docs_per not in ("line", "file"):
        raise ValueError(f"unknown docs_per: {docs_per!r}")
    docs: list[tuple[str, ...]] = []
    for path in paths:
        path = Path(path)
        if path.is_dir():
            for sub in sorted(p for p in path.rglob("*") if p.is_file()):
                docs.extend(tokenize(_read_text(sub), "none").documents)
        else:
            delim = "line" if docs_per == "line" else "none"
            docs.extend(tokenize(_read_text(path), delim).documents)
    return TokenStream.from_documents(docs)


class Vocabulary:
    """Frequency-ranked word table with dense ids (rank 0 = most frequent).

    Frequency ties rank in ascending lexicographic order, so ids are stable
    across runs and platforms. ``total_in_vocab`` counts occurrences of the
    retained types only.
    """

    def __init__(self, words: Sequence[str], freq):
        self.words: list[str] = list(words)
        self.freq: np.ndarray = np.asarray(freq, dtype=np.int64)
        if len(self.words) != len(self.freq):
            raise ValueError("words and freq must have equal length")
        if self.freq.size and int(self.freq.min()) < 1:
            raise ValueError("every frequency must be >= 1")
        if np.any(self.freq[1:] > self.freq[:-1]):
            raise ValueError("frequencies must be non-increasing with rank")
        self._id_of = {w: i for i, w in enumerate(self.words)}
        if len(self._id_of) != len(self.words):
            raise ValueError("duplicate words in vocabulary")
        self.total_in_vocab: int = int(self.freq.sum())

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return word in self._id_of

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.words == other.words
            and np.array_equal(self.freq, other.freq)
        )

    def __repr__(self) -> str:
        return f"Vocabulary({len(self.words)} words, total={self.total_in_vocab})"

    def id_of(self, word: str) -> int:
        return self._id_of[word]

    def get(self, word: str, default=None):
        return self._id_of.get(word, default)

    def word(self, word_id: int) -> str:
        return self.words[word_id]

    def freq_of(self, word_id: int) -> int:
        return int(self.freq[word_id])


def build_vocabulary(
    tokens: TokenStream, max_size: int | None, min_count: int = 1
) -> Vocabulary:
    """The most frequent token types, ranked by descending frequency.

    Types with frequency below ``min_count`` are dropped, then the top
    ``max_size`` survive (``None`` keeps all). Ties at equal frequency are
    ranked in ascending lexicographic order.
    """
    if max_size is not None and max_size < 1:
        raise ValueError("max_size must be >= 1")
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts: Counter[str] = Counter()
    for doc in tokens.documents:
        counts.update(doc)
    eligible = [(w, n) for w, n in counts.items() if n >= min_count]
    eligible.sort(key=lambda wn: (-wn[1], wn[0]))
    if max_size is not None:
        eligible = eligible[:max_size]
    return Vocabulary([w for w, _ in eligible], [n for _, n in eligible])


@dataclass(frozen=True)
class CooccurrenceTable:
    """Symmetric windowed co-occurrence counts over two vocabularies.

    ``counts`` is an integer CSR matrix of shape (targets, contexts); absent
    entries mean zero. Counting is symmetric in position, so for words
    present in both vocabularies count(w -> c) == count(c -> w).
    """

    counts: sparse.csr_matrix
    target_vocab: Vocabulary
    context_vocab: Vocabulary
    window: int

    @property
    def nnz(self) -> int:
        return int(self.counts.nnz)

    def count_of(self, target_id: int, context_id: int) -> int:
        return int(self.counts[target_id, context_id])

    def merge(self, other: "CooccurrenceTable") -> "CooccurrenceTable":
        """Entrywise sum of two shard tables over identical vocabularies."""
        if self.target_vocab != other.target_vocab:
            raise ValueError("cannot merge tables with different target vocabularies")
        if self.context_vocab != other.context_vocab:
            raise ValueError("cannot merge tables with different context vocabularies")
        if self.window != other.window:
            raise ValueError("cannot merge tables with different windows")
        total = (self.counts + other.counts).tocsr()
        total.sort_indices()
        return CooccurrenceTable(total, self.target_vocab, self.context_vocab, self.window)

    def validate(self) -> None:
        """Check the counting invariants; intended for tests on small tables."""
        if self.counts.nnz and int(self.counts.data.min()) < 1:
            raise AssertionError("stored counts must be >= 1")
        # marginal bound: a target occurrence has at most 2*window neighbours
        row_sums = np.asarray(self.counts.sum(axis=1)).ravel()
        limits = 2 * self.window * self.target_vocab.freq
        if np.any(row_sums > limits):
            raise AssertionError("row marginal exceeds 2*window*freq bound")
        # positional symmetry for words present in both vocabularies
        coo = self.counts.tocoo()
        for w_id, c_id, v in zip(coo.row, coo.col, coo.data):
            w = self.target_vocab.word(int(w_id))
            c = self.context_vocab.word(int(c_id))
            back_t = self.target_vocab.get(c)
            back_c = self.context_vocab.get(w)
            if back_t is not None and back_c is not None:
                if int(self.counts[back_t, back_c]) != int(v):
                    raise AssertionError(f"asymmetric counts for ({w}, {c})")


def _pairs_to_csr(rows: np.ndarray, cols: np.ndarray, shape) -> sparse.csr_matrix:
    part = sparse.coo_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=shape
    )
    return part.tocsr()


def count_cooccurrences(
    tokens: TokenStream,
    target_vocab: Vocabulary,
    context_vocab: Vocabulary,
    window: int,
) -> CooccurrenceTable:
    """Count symmetric windowed co-occurrences.

    Every ordered pair of positions (i, j) with 0 < |i - j| <= window inside
    one document contributes one count to (token[i] as target, token[j] as
    context), provided both tokens are in their respective vocabularies.
    Tokens outside a vocabulary neither count nor block the window. There is
    no distance weighting and windows never cross document boundaries.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    shape = (len(target_vocab), len(context_vocab))
    # Map the stream to id arrays once, separating documents with `window`
    # sentinel positions so a single vectorized pass cannot pair across
    # document boundaries.
    t_parts: list[np.ndarray] = []
    c_parts: list[np.ndarray] = []
    pad = np.full(window, -1, dtype=np.int64)
    t_get = target_vocab._id_of.get
    c_get = context_vocab._id_of.get
    for doc in tokens.documents:
        n = len(doc)
        t_parts.append(np.fromiter((t_get(w, -1) for w in doc), np.int64, n))
        c_parts.append(np.fromiter((c_get(w, -1) for w in doc), np.int64, n))
        t_parts.append(pad)
        c_parts.append(pad)
    if not t_parts:
        return CooccurrenceTable(
            sparse.csr_matrix(shape, dtype=np.int64), target_vocab, context_vocab, window
        )
    tids = np.concatenate(t_parts)
    cids = np.concatenate(c_parts)
    total = sparse.csr_matrix(shape, dtype=np.int64)
    for k in range(1, window + 1):
        if k >= len(tids):
            break
        for trow, ccol in ((tids[:-k], cids[k:]), (tids[k:], cids[:-k])):
            mask = (trow >= 0) & (ccol >= 0)
            if mask.any():
                total = total + _pairs_to_csr(trow[mask], ccol[mask], shape)
    total = total.tocsr()
    total.sort_indices()
    return CooccurrenceTable(total, target_vocab, context_vocab, window)

"""Per-analogy subspace selection.

The pipeline projects a small, query-specific subspace out of the base
space in four steps: gather the context dims shared by the three given
words, L1-normalize the gathered rows, keep the k1 dims with the highest
mean normalized value, then keep the k2 of those whose raw values best
satisfy the analogical offset equation. Every step is deterministic; score
ties always break toward the ascending context id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .corpus import Vocabulary
from .errors import (
    DegenerateRowError,
    NoSharedContextError,
    OOVError,
)
from .space import BaseSpace


@dataclass(frozen=True)
class AnalogyQuery:
    """One analogy a : b :: c : d, read as b - a should match d - c.

    ``d`` may be None for exploratory queries. ``section`` and ``line``
    carry test-set provenance when parsed from a file.
    """

    a: str
    b: str
    c: str
    d: str | None = None
    section: str | None = None
    line: int | None = None

    def words(self, with_d: bool = True) -> tuple[str, ...]:
        if with_d and self.d is not None:
            return (self.a, self.b, self.c, self.d)
        return (self.a, self.b, self.c)

    def missing_words(self, vocab: Vocabulary, with_d: bool = True) -> tuple[str, ...]:
        seen = []
        for w in self.words(with_d):
            if w not in vocab and w not in seen:
                seen.append(w)
        return tuple(seen)

    def __str__(self) -> str:
        d = self.d if self.d is not None else "?"
        return f"{self.a} : {self.b} :: {self.c} : {d}"


@dataclass(frozen=True)
class Subspace:
    """A dense projection of selected context dims.

    ``dims`` keeps selection order (best score first); ``coords`` rows align
    with ``word_ids`` (ascending target ids). Values are raw PMI, zero where
    the base space stores nothing.
    """

    dims: np.ndarray
    coords: np.ndarray
    word_ids: np.ndarray
    vocab: Vocabulary
    k1: int | None = None
    k2: int | None = None
    query: AnalogyQuery | None = None

    def __post_init__(self):
        if self.coords.shape != (len(self.word_ids), len(self.dims)):
            raise ValueError("coords shape does not match word_ids x dims")

    @property
    def dim(self) -> int:
        return len(self.dims)

    def coords_of(self, word_id: int) -> np.ndarray:
        pos = int(np.searchsorted(self.word_ids, word_id))
        if pos >= len(self.word_ids) or self.word_ids[pos] != word_id:
            raise KeyError(f"word id {word_id} not projected into this subspace")
        return self.coords[pos]

    def dim_labels(self, context_vocab: Vocabulary) -> list[str]:
        return [context_vocab.word(int(d)) for d in self.dims]


def gather_shared_dims(
    space: BaseSpace, words: Sequence[str], mode: str = "intersection"
) -> np.ndarray:
    """Context dims where the rows of all given words store a value.

    Returns ascending context ids. ``mode="union"`` widens the support to
    dims stored by any of the words (ablation switch); the default
    intersection is what the downstream selection steps assume.
    """
    missing = tuple(w for w in words if w not in space.target_vocab)
    if missing:
        raise OOVError(missing)
    supports = [space.row_support(space.target_vocab.id_of(w)) for w in words]
    if mode == "intersection":
        shared = reduce(np.intersect1d, supports)
    elif mode == "union":
        shared = reduce(np.union1d, supports)
    else:
        raise ValueError(f"unknown support mode: {mode!r}")
    shared = np.asarray(shared, dtype=np.int64)
    if len(shared) == 0:
        raise NoSharedContextError(words)
    return shared


def l1_normalize(rows: np.ndarray) -> np.ndarray:
    """Scale each row to sum to 1, preserving proportions and support."""
    rows = np.asarray(rows, dtype=np.float64)
    sums = rows.sum(axis=1)
    if np.any(sums <= 0):
        bad = int(np.argmax(sums <= 0))
        raise DegenerateRowError(f"row {bad} has non-positive mass and cannot be normalized")
    return rows / sums[:, None]


def select_context_dims(
    normalized_rows: np.ndarray, dims: np.ndarray, k1: int
) -> np.ndarray:
    """The k1 dims with the highest mean normalized value, best first.

    Ties in the mean break toward the ascending context id. When fewer than
    k1 dims are offered, all are returned (still ranked).
    """
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    dims = np.asarray(dims, dtype=np.int64)
    rows = np.asarray(normalized_rows, dtype=np.float64)
    if rows.shape[1] != len(dims):
        raise ValueError("rows and dims disagree on dimension count")
    mu = rows.mean(axis=0)
    order = np.lexsort((dims, -mu))
    return dims[order[:k1]]


def analogy_fit(
    space: BaseSpace,
    query: AnalogyQuery,
    dims: np.ndarray,
    fit_mode: str = "raw",
    support_dims: np.ndarray | None = None,
) -> np.ndarray:
    """Squared offset disagreement ((M_a - M_b) - (M_c - M_d))^2 per dim.

    Raw mode reads stored PMI values directly, with 0 where a word stores
    nothing on a dim (d in particular need not share the support). The
    normalized mode (ablation switch) L1-normalizes each word's row over
    ``support_dims`` first; a d row with no mass there contributes zeros.
    """
    if query.d is None:
        raise ValueError("analogy fit requires all four query words")
    missing = query.missing_words(space.target_vocab)
    if missing:
        raise OOVError(missing)
    dims = np.asarray(dims, dtype=np.int64)
    ids = [space.target_vocab.id_of(w) for w in (query.a, query.b, query.c, query.d)]
    if fit_mode == "raw":
        va, vb, vc, vd = (space.dense_row_values(i, dims) for i in ids)
    elif fit_mode == "normalized":
        base = dims if support_dims is None else np.asarray(support_dims, dtype=np.int64)
        rows = np.stack([space.dense_row_values(i, base) for i in ids])
        sums = rows.sum(axis=1)
        safe = np.where(sums > 0, sums, 1.0)
        rows = rows / safe[:, None]
        if support_dims is None:
            sel = np.arange(len(dims))
        else:
            order = np.argsort(base)
            pos = np.searchsorted(base, dims, sorter=order)
            sel = order[pos]
        va, vb, vc, vd = (rows[i][sel] for i in range(4))
    else:
        raise ValueError(f"unknown fit mode: {fit_mode!r}")
    return ((va - vb) - (vc - vd)) ** 2


def select_analogy_dims(
    space: BaseSpace,
    query: AnalogyQuery,
    candidates: np.ndarray,
    k2: int,
    fit_mode: str = "raw",
    support_dims: np.ndarray | None = None,
) -> np.ndarray:
    """The k2 candidate dims where the analogy offsets agree best.

    Returned best fit first; ties break toward the ascending context id.
    Fewer than k2 candidates are all returned (still ranked).
    """
    if k2 < 1:
        raise ValueError("k2 must be >= 1")
    candidates = np.asarray(candidates, dtype=np.int64)
    fit = analogy_fit(space, query, candidates, fit_mode, support_dims)
    order = np.lexsort((candidates, fit))
    return candidates[order[:k2]]


def project(
    space: BaseSpace,
    dims: np.ndarray,
    word_ids: Iterable[int] | None = None,
    k1: int | None = None,
    k2: int | None = None,
    query: AnalogyQuery | None = None,
) -> Subspace:
    """Project words onto the selected dims with raw values, zeros filled.

    ``word_ids=None`` projects the entire target vocabulary (the usual
    completion candidate set). Words that store nothing on any selected dim
    get the zero vector.
    """
    dims = np.asarray(dims, dtype=np.int64)
    if len(np.unique(dims)) != len(dims):
        raise ValueError("dims must be distinct")
    if len(dims) and (dims.min() < 0 or dims.max() >= len(space.context_vocab)):
        raise ValueError("dims out of range for the context vocabulary")
    if word_ids is None:
        ids = np.arange(len(space.target_vocab), dtype=np.int64)
        coords = space.project_columns(dims)
    else:
        ids = np.unique(np.asarray(list(word_ids), dtype=np.int64))
        coords = np.stack([space.dense_row_values(int(i), dims) for i in ids]) if len(ids) else np.zeros((0, len(dims)))
    return Subspace(dims, coords, ids, space.target_vocab, k1=k1, k2=k2, query=query)

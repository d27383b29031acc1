"""Analogy completion, test-set parsing, and evaluation.

Completion is plain vector offset: the target point is coords(b) -
coords(a) + coords(c), and the answer is the nearest candidate word by
Euclidean distance (cosine optional). The query words themselves are
excluded by default. Distance ties break toward the ascending word id.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DomainError,
    NoCandidatesError,
    OOVError,
    TestsetParseError,
)
from .projection import (
    AnalogyQuery,
    Subspace,
    gather_shared_dims,
    l1_normalize,
    project,
    select_analogy_dims,
    select_context_dims,
)
from .space import BaseSpace

# cosine distance assigned to zero-norm vectors; above any attainable
# cosine distance in a non-negative space, so such candidates rank last
COSINE_SENTINEL = 2.0


@dataclass(frozen=True)
class PipelineParams:
    """Knobs for subspace selection and completion."""

    k1: int = 200
    k2: int = 20
    metric: str = "euclidean"
    exclude_inputs: bool = True
    support_mode: str = "intersection"
    fit_mode: str = "raw"
    top_n: int = 10

    def __post_init__(self):
        if self.k1 < 1 or self.k2 < 1 or self.top_n < 1:
            raise ValueError("k1, k2, and top_n must be >= 1")
        if self.metric not in ("euclidean", "cosine"):
            raise ValueError(f"unknown metric: {self.metric!r}")
        if self.support_mode not in ("intersection", "union"):
            raise ValueError(f"unknown support mode: {self.support_mode!r}")
        if self.fit_mode not in ("raw", "normalized"):
            raise ValueError(f"unknown fit mode: {self.fit_mode!r}")


@dataclass(frozen=True)
class CompletionResult:
    """Outcome of one offset completion."""

    predicted: str
    target_point: np.ndarray
    ranked_candidates: tuple[tuple[str, float], ...]
    excluded: frozenset[str]


def _distances(coords: np.ndarray, target: np.ndarray, metric: str) -> tuple[np.ndarray, np.ndarray]:
    """Per-candidate distance and the key used for ranking."""
    if metric == "euclidean":
        diff = coords - target
        sq = np.einsum("ij,ij->i", diff, diff)
        return np.sqrt(sq), sq
    if metric == "cosine":
        norms = np.sqrt(np.einsum("ij,ij->i", coords, coords))
        t_norm = float(np.sqrt(target @ target))
        dist = np.full(len(coords), COSINE_SENTINEL, dtype=np.float64)
        if t_norm > 0.0:
            ok = norms > 0.0
            dist[ok] = 1.0 - (coords[ok] @ target) / (norms[ok] * t_norm)
        return dist, dist
    raise ValueError(f"unknown metric: {metric!r}")


def complete_analogy(
    subspace: Subspace,
    a_id: int,
    b_id: int,
    c_id: int,
    candidate_ids: Iterable[int] | None = None,
    exclude_inputs: bool = True,
    metric: str = "euclidean",
    top_n: int = 10,
) -> CompletionResult:
    """Complete a : b :: c : ? by nearest neighbour to b - a + c.

    Candidates default to every word projected into the subspace. With
    ``exclude_inputs`` (the default) the three query words cannot be their
    own answer. Distance ties break toward the ascending word id; with the
    cosine metric, zero-norm vectors rank last at a fixed sentinel distance.
    """
    target = subspace.coords_of(b_id) - subspace.coords_of(a_id) + subspace.coords_of(c_id)
    if candidate_ids is None:
        cand = subspace.word_ids
    else:
        cand = np.unique(np.asarray(list(candidate_ids), dtype=np.int64))
    excluded_ids: set[int] = set()
    if exclude_inputs:
        excluded_ids = {int(a_id), int(b_id), int(c_id)}
        cand = cand[~np.isin(cand, list(excluded_ids))]
    if len(cand) == 0:
        raise NoCandidatesError("no candidate words remain after exclusions")
    pos = np.searchsorted(subspace.word_ids, cand)
    if np.any(pos >= len(subspace.word_ids)) or np.any(subspace.word_ids[pos] != cand):
        raise KeyError("candidate ids missing from the subspace projection")
    coords = subspace.coords[pos]
    dist, key = _distances(coords, target, metric)
    order = np.argsort(key, kind="stable")  # cand ascending, so ties keep id order
    top = order[: max(1, top_n)]
    vocab = subspace.vocab
    ranked = tuple((vocab.word(int(cand[i])), float(dist[i])) for i in top)
    excluded_words = frozenset(vocab.word(i) for i in excluded_ids)
    return CompletionResult(ranked[0][0], target, ranked, excluded_words)


def run_pipeline(
    space: BaseSpace, query: AnalogyQuery, params: PipelineParams = PipelineParams()
) -> tuple[Subspace, CompletionResult, bool]:
    """Select the query's subspace, complete it, and report the match.

    All four query words must be in the target vocabulary; d steers
    dimension selection but is withheld from completion, so ``matched``
    reports whether the offset alone recovers it.
    """
    if query.d is None:
        raise ValueError("run_pipeline requires a four-word query; see complete_in_mean_subspace")
    missing = query.missing_words(space.target_vocab)
    if missing:
        raise OOVError(missing)
    if len(set(query.words())) != 4:
        raise ValueError(f"query words must be distinct: {query}")
    shared = gather_shared_dims(space, query.words(with_d=False), mode=params.support_mode)
    ids3 = [space.target_vocab.id_of(w) for w in query.words(with_d=False)]
    rows = np.stack([space.dense_row_values(i, shared) for i in ids3])
    normalized = l1_normalize(rows)
    candidates = select_context_dims(normalized, shared, params.k1)
    dims = select_analogy_dims(
        space, query, candidates, params.k2, fit_mode=params.fit_mode, support_dims=shared
    )
    sub = project(space, dims, k1=params.k1, k2=params.k2, query=query)
    result = complete_analogy(
        sub,
        *(space.target_vocab.id_of(w) for w in (query.a, query.b, query.c)),
        exclude_inputs=params.exclude_inputs,
        metric=params.metric,
        top_n=params.top_n,
    )
    return sub, result, result.predicted == query.d


def complete_in_mean_subspace(
    space: BaseSpace, a: str, b: str, c: str, params: PipelineParams = PipelineParams()
) -> tuple[Subspace, CompletionResult]:
    """Three-word fallback: complete in the k1 mean-relevance subspace.

    Without d there is no analogical fit filter, so this skips the second
    selection stage entirely and works in the (up to) k1 highest-mean dims.
    Exploratory mode only; its accuracy is not comparable to the full
    pipeline.
    """
    query = AnalogyQuery(a, b, c)
    missing = query.missing_words(space.target_vocab)
    if missing:
        raise OOVError(missing)
    if len({a, b, c}) != 3:
        raise ValueError("query words must be distinct")
    shared = gather_shared_dims(space, (a, b, c), mode=params.support_mode)
    ids3 = [space.target_vocab.id_of(w) for w in (a, b, c)]
    rows = np.stack([space.dense_row_values(i, shared) for i in ids3])
    dims = select_context_dims(l1_normalize(rows), shared, params.k1)
    sub = project(space, dims, k1=params.k1, query=query)
    result = complete_analogy(
        sub,
        *ids3,
        exclude_inputs=params.exclude_inputs,
        metric=params.metric,
        top_n=params.top_n,
    )
    return sub, result


def parse_testset(source) -> list[AnalogyQuery]:
    """Parse the standard analogy test-set format.

    Four space-separated words per line, lowercased on read; lines starting
    with ':' open a named section. Anything else raises
    :class:`TestsetParseError` with the 1-based line number.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
        lines = text.splitlines()
    else:
        lines = [str(line).rstrip("\n") for line in source]
    queries: list[AnalogyQuery] = []
    section: str | None = None
    for lineno, line in enumerate(lines, start=1):
        if line.startswith(":"):
            section = line[1:].strip()
            continue
        parts = line.split()
        if len(parts) != 4:
            raise TestsetParseError(
                f"line {lineno}: expected 4 words, got {len(parts)}", line_number=lineno
            )
        a, b, c, d = (p.lower() for p in parts)
        queries.append(AnalogyQuery(a, b, c, d, section=section, line=lineno))
    return queries


def sample_queries(
    queries: Sequence[AnalogyQuery], size: int, seed: int
) -> list[AnalogyQuery]:
    """Seeded sample of ``size`` queries, kept in file order."""
    if size < 0:
        raise ValueError("size must be >= 0")
    if size >= len(queries):
        return list(queries)
    picked = random.Random(seed).sample(range(len(queries)), size)
    return [queries[i] for i in sorted(picked)]


@dataclass(frozen=True)
class EvalReport:
    """Aggregate outcome of an evaluation run.

    ``total == oov_skipped + correct + len(failures)`` always holds.
    ``accuracy`` is None (undefined) when nothing was attempted.
    """

    total: int
    oov_skipped: int
    attempted: int
    correct: int
    failures: tuple[tuple[AnalogyQuery, str | None, str | None], ...]
    oov_details: tuple[tuple[AnalogyQuery, tuple[str, ...]], ...]
    per_section: dict

    @property
    def accuracy(self) -> float | None:
        if self.attempted == 0:
            return None
        return self.correct / self.attempted

    @property
    def accuracy_defined(self) -> bool:
        return self.attempted > 0

    def to_dict(self, params: PipelineParams | None = None, **extra) -> dict:
        def q_dict(q: AnalogyQuery) -> dict:
            return {
                "words": list(q.words()),
                "section": q.section,
                "line": q.line,
            }

        out = {
            "total": self.total,
            "oov_skipped": self.oov_skipped,
            "attempted": self.attempted,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "accuracy_defined": self.accuracy_defined,
            "oov": [
                {**q_dict(q), "missing": list(missing)} for q, missing in self.oov_details
            ],
            "failures": [
                {**q_dict(q), "predicted": predicted, "reason": reason}
                for q, predicted, reason in self.failures
            ],
            "per_section": {
                (name if name is not None else ""): dict(stats)
                for name, stats in self.per_section.items()
            },
        }
        if params is not None:
            out["params"] = {
                "k1": params.k1,
                "k2": params.k2,
                "metric": params.metric,
                "exclude_inputs": params.exclude_inputs,
                "support_mode": params.support_mode,
                "fit_mode": params.fit_mode,
            }
        out.update(extra)
        return out


def evaluate_testset(
    space: BaseSpace,
    queries: Sequence[AnalogyQuery],
    params: PipelineParams = PipelineParams(),
    limit: int | None = None,
) -> EvalReport:
    """Run the full pipeline over queries and tally the outcomes.

    Queries with any word outside the target vocabulary are skipped and
    recorded; other per-query domain errors (no shared context, no
    candidates) count as failures with the reason recorded. ``limit`` keeps
    only the first N queries.
    """
    todo = list(queries) if limit is None else list(queries)[:limit]
    correct = 0
    failures: list[tuple[AnalogyQuery, str | None, str | None]] = []
    oov_details: list[tuple[AnalogyQuery, tuple[str, ...]]] = []
    per_section: dict = {}

    def bucket(q: AnalogyQuery) -> dict:
        return per_section.setdefault(
            q.section, {"total": 0, "oov_skipped": 0, "attempted": 0, "correct": 0}
        )

    for q in todo:
        stats = bucket(q)
        stats["total"] += 1
        missing = q.missing_words(space.target_vocab)
        if missing:
            oov_details.append((q, missing))
            stats["oov_skipped"] += 1
            continue
        stats["attempted"] += 1
        try:
            _, result, matched = run_pipeline(space, q, params)
        except DomainError as exc:
            failures.append((q, None, f"{exc.slug}: {exc}"))
            continue
        if matched:
            correct += 1
            stats["correct"] += 1
        else:
            failures.append((q, result.predicted, None))
    attempted = len(todo) - len(oov_details)
    return EvalReport(
        total=len(todo),
        oov_skipped=len(oov_details),
        attempted=attempted,
        correct=correct,
        failures=tuple(failures),
        oov_details=tuple(oov_details),
        per_section=per_section,
    )

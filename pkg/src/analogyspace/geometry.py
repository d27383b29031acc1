"""Instrumentation for dimension profiles and parallelogram shape.

This module computes plot-ready data only; rendering lives elsewhere.

The parallelogram metrics quantify how closely four points A, B, C, D
realize b - a = d - c and how the figure sits relative to the space
diagonal (the all-ones direction). All of them are scale-invariant except
``closure_abs``, and all are finite and non-negative with angles in
degrees within [0, 90]:

    closure_abs  = ||(B - A + C) - D||_2
    closure_rel  = closure_abs / mean(||B - A||_2, ||D - C||_2)
                   (defined as 0 when the offsets themselves vanish)
    flatness     = sigma_3 / sigma_1 of the centered 4-point matrix,
                   0 for perfectly planar figures and for 2-dim spaces
    centrality   = unsigned angle(centroid, all-ones diagonal)
    obliqueness  = unsigned angle(best-fit-plane normal within the points'
                   span, all-ones diagonal); the normal is the third right
                   singular vector of the centered points, and in 2-dim
                   spaces the plane contains the diagonal so the angle is 90
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateFigureError, UnknownDimensionError
from .space import BaseSpace

_DEFINITIONS = {
    "closure_abs": "euclidean norm of (B - A + C) - D",
    "closure_rel": "closure_abs / mean(|B - A|, |D - C|); 0 when both offsets vanish",
    "flatness": "sigma3/sigma1 of the centered 4-point matrix (0 = planar; 0 by definition in 2 dims)",
    "centrality": "unsigned angle in degrees between the centroid and the all-ones diagonal",
    "obliqueness": "unsigned angle in degrees between the best-fit plane normal (third right singular vector of the centered points) and the all-ones diagonal; 90 by definition in 2 dims",
}


@dataclass(frozen=True)
class DimensionHistogram:
    """All stored values on one context dim, ranked ascending.

    ``ranked`` holds (rank, word, value) with rank 0 the smallest stored
    value; value ties rank by ascending word id. ``highlights`` maps each
    requested word to its rank, or None when the word stores nothing on the
    dim (implied value 0).
    """

    dim: int
    dim_label: str
    ranked: tuple[tuple[int, str, float], ...]
    highlights: dict

    def highlight_value(self, word: str) -> float:
        rank = self.highlights.get(word)
        if rank is None:
            return 0.0
        return self.ranked[rank][2]


def dimension_histogram(
    space: BaseSpace, dim: int, highlight: Iterable[str] = ()
) -> DimensionHistogram:
    """Rank every stored value on ``dim`` ascending, resolving highlights."""
    if dim < 0 or dim >= len(space.context_vocab):
        raise UnknownDimensionError(f"context dimension {dim} does not exist")
    word_ids, values = space.column(dim)
    order = np.lexsort((word_ids, values))
    ranked = tuple(
        (rank, space.target_vocab.word(int(word_ids[i])), float(values[i]))
        for rank, i in enumerate(order)
    )
    rank_of = {int(word_ids[i]): rank for rank, i in enumerate(order)}
    highlights = {}
    for word in highlight:
        wid = space.target_vocab.get(word)
        highlights[word] = rank_of.get(wid) if wid is not None else None
    return DimensionHistogram(
        dim=int(dim),
        dim_label=space.context_vocab.word(int(dim)),
        ranked=ranked,
        highlights=highlights,
    )


def write_histogram_tsv(hist: DimensionHistogram, path) -> None:
    """rank, word, value rows, tab-separated, ascending rank."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank\tword\tpmi\n")
        for rank, word, value in hist.ranked:
            fh.write(f"{rank}\t{word}\t{value!r}\n")


def write_histogram_json(hist: DimensionHistogram, path) -> None:
    """Sidecar with the dim identity and resolved highlights."""
    doc = {
        "dim": hist.dim,
        "dim_label": hist.dim_label,
        "stored_entries": len(hist.ranked),
        "highlights": {
            word: {
                "rank": rank,
                "value": hist.highlight_value(word),
                "present": rank is not None,
            }
            for word, rank in hist.highlights.items()
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ParallelogramReport:
    """Shape metrics for one completed analogy figure."""

    closure_abs: float
    closure_rel: float
    flatness: float
    centrality: float
    obliqueness: float

    def to_dict(self, **extra) -> dict:
        out = {
            "closure_abs": self.closure_abs,
            "closure_rel": self.closure_rel,
            "flatness": self.flatness,
            "centrality": self.centrality,
            "obliqueness": self.obliqueness,
            "definitions": dict(_DEFINITIONS),
        }
        out.update(extra)
        return out


def _unsigned_angle_deg(u: np.ndarray, v: np.ndarray) -> float:
    """Angle between the lines spanned by u and v, in [0, 90] degrees."""
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    cos = abs(float(u @ v)) / (nu * nv)
    return float(np.degrees(np.arccos(np.clip(cos, 0.0, 1.0))))


def parallelogram_metrics(
    a: Sequence[float],
    b: Sequence[float],
    c: Sequence[float],
    d: Sequence[float],
) -> ParallelogramReport:
    """Measure how the four points realize and orient the analogy figure.

    All four vectors must share a dimension >= 2. Four coincident points
    (or a centroid exactly at the origin, which leaves the diagonal angle
    meaningless) raise :class:`DegenerateFigureError`.
    """
    pts = np.asarray([a, b, c, d], dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] != 4:
        raise ValueError("expected exactly four coordinate vectors")
    k = pts.shape[1]
    if k < 2:
        raise ValueError("points must have dimension >= 2")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    if np.all(pts == pts[0]):
        raise DegenerateFigureError("all four points coincide")

    av, bv, cv, dv = pts
    closure_abs = float(np.linalg.norm((bv - av) + cv - dv))
    denom = (float(np.linalg.norm(bv - av)) + float(np.linalg.norm(dv - cv))) / 2.0
    closure_rel = closure_abs / denom if denom > 0.0 else 0.0

    centroid = pts.mean(axis=0)
    centered = pts - centroid
    _, sv, vt = np.linalg.svd(centered, full_matrices=False)
    flatness = 0.0 if k == 2 else float(sv[2] / sv[0])

    ones = np.ones(k)
    if float(np.linalg.norm(centroid)) == 0.0:
        raise DegenerateFigureError("centroid at the origin; diagonal angle undefined")
    centrality = _unsigned_angle_deg(centroid, ones)
    obliqueness = 90.0 if k == 2 else _unsigned_angle_deg(vt[2], ones)
    return ParallelogramReport(
        closure_abs=closure_abs,
        closure_rel=closure_rel,
        flatness=flatness,
        centrality=centrality,
        obliqueness=obliqueness,
    )

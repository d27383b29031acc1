"""Matplotlib rendering for the CLI report paths.

Every renderer takes already-computed report data and writes one figure
file; nothing here recomputes model quantities. The Agg backend keeps
rendering headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from mpl_toolkits.mplot3d.art3d import Line3DCollection, Poly3DCollection

from .geometry import DimensionHistogram, ParallelogramReport


def render_histogram(hist: DimensionHistogram, path) -> None:
    """Rank-vs-value curve for one dim, highlight words marked."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    values = [v for _, _, v in hist.ranked]
    ax.plot(range(len(values)), values, lw=1.2, color="#27557b")
    for word, rank in sorted(hist.highlights.items()):
        if rank is None:
            continue
        value = hist.ranked[rank][2]
        ax.plot([rank], [value], marker="x", ms=9, mew=2, color="#c23b22")
        ax.annotate(
            word,
            (rank, value),
            textcoords="offset points",
            xytext=(-6, 6),
            ha="right",
            fontsize=9,
        )
    absent = sorted(w for w, r in hist.highlights.items() if r is None)
    title = f"dimension {hist.dim_label!r} (id {hist.dim})"
    if absent:
        title += "  [absent: " + ", ".join(absent) + "]"
    ax.set_title(title)
    ax.set_xlabel("rank (ascending value)")
    ax.set_ylabel("pmi")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_parallelogram(
    points: np.ndarray,
    labels: list[str],
    report: ParallelogramReport,
    path,
    dim_labels: list[str] | None = None,
) -> None:
    """3D view of the four analogy points (first three dims when wider)."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[1] == 2:
        pts = np.column_stack([pts, np.zeros(len(pts))])
        dim_labels = (list(dim_labels) + [""]) if dim_labels else None
    view = pts[:, :3]
    a, b, c, d = view
    fig = plt.figure(figsize=(6.5, 5.5))
    ax = fig.add_subplot(projection="3d")
    quad = [a, b, d, c]  # cycle order: edges ab, bd, dc, ca
    ax.add_collection3d(
        Poly3DCollection([quad], alpha=0.25, facecolor="#7da7c9", edgecolor="#27557b")
    )
    hi = float(view.max()) if view.size else 1.0
    diag = np.array([[0.0, 0.0, 0.0], [hi, hi, hi]])
    ax.add_collection3d(Line3DCollection([diag], colors="#888888", linestyles="dashed"))
    for p, name in zip(view, labels):
        ax.scatter(*p, color="#c23b22", s=25)
        ax.text(*p, f" {name}", fontsize=9)
    if dim_labels:
        ax.set_xlabel(dim_labels[0])
        ax.set_ylabel(dim_labels[1])
        if len(dim_labels) > 2:
            ax.set_zlabel(dim_labels[2])
    ax.set_title(
        f"closure_abs={report.closure_abs:.3f}  closure_rel={report.closure_rel:.3f}  "
        f"flatness={report.flatness:.3f}"
    )
    lo = min(0.0, float(view.min())) if view.size else 0.0
    for setter in (ax.set_xlim, ax.set_ylim, ax.set_zlim):
        setter(lo, hi * 1.05 if hi > lo else lo + 1.0)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_eval(report_doc: dict, path) -> None:
    """Per-section accuracy bars for one evaluation report."""
    sections = report_doc.get("per_section", {})
    names, accs, counts = [], [], []
    for name, stats in sections.items():
        attempted = stats.get("attempted", 0)
        names.append(name if name else "(none)")
        counts.append(attempted)
        accs.append(stats.get("correct", 0) / attempted if attempted else 0.0)
    fig, ax = plt.subplots(figsize=(max(5.0, 1.2 * len(names) + 2), 4.2))
    xs = np.arange(len(names))
    ax.bar(xs, accs, color="#27557b")
    ax.set_xticks(xs)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    for x, acc, n in zip(xs, accs, counts):
        ax.annotate(f"{acc:.2f}\n(n={n})", (x, acc), ha="center", va="bottom", fontsize=7)
    overall = report_doc.get("accuracy")
    title = "accuracy by section"
    if overall is not None:
        title += f"  (overall {overall:.3f})"
    ax.set_title(title)
    ax.set_ylim(0, 1.1)
    ax.set_ylabel("accuracy")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)

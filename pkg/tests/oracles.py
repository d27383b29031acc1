"""Independent reference implementations used to check the library.

Everything here is deliberately naive: plain dicts, python loops,
math.log2, and tuple-keyed sorts. No numpy, no shared code with the
package, so agreement is meaningful.
"""

from __future__ import annotations

import math


def brute_force_counts(documents, target_vocab_words, context_vocab_words, window):
    """Quadratic pair enumeration: dict (target_id, context_id) -> count."""
    t_ids = {w: i for i, w in enumerate(target_vocab_words)}
    c_ids = {w: i for i, w in enumerate(context_vocab_words)}
    counts: dict[tuple[int, int], int] = {}
    for doc in documents:
        n = len(doc)
        for i in range(n):
            for j in range(n):
                if i == j or abs(i - j) > window:
                    continue
                w = t_ids.get(doc[i])
                c = c_ids.get(doc[j])
                if w is None or c is None:
                    continue
                counts[(w, c)] = counts.get((w, c), 0) + 1
    return counts


def direct_pmi(count, total_target_occurrences, target_freq, context_freq, smoothing):
    """Straight evaluation of the weighting formula for one entry."""
    return math.log2(
        count * total_target_occurrences
        / (target_freq * (context_freq + smoothing))
        + 1.0
    )


def rank_vocabulary(tokens, max_size, min_count):
    """Frequency-then-lexicographic ranking over a flat token list."""
    freq: dict[str, int] = {}
    for tok in tokens:
        freq[tok] = freq.get(tok, 0) + 1
    eligible = [(w, n) for w, n in freq.items() if n >= min_count]
    eligible.sort(key=lambda wn: (-wn[1], wn[0]))
    if max_size is not None:
        eligible = eligible[:max_size]
    return eligible


def top_mean_dims(rows, dims, k1):
    """Exhaustive sort for the mean-relevance selection, best first.

    ``rows`` is a list of three equal-length value lists aligned with
    ``dims``. The mean is computed exactly as a three-term sum divided by
    three so float results agree bit for bit with a vectorized mean.
    """
    scored = []
    for pos, dim in enumerate(dims):
        mu = (rows[0][pos] + rows[1][pos] + rows[2][pos]) / 3.0
        scored.append((-mu, dim))
    scored.sort()
    return [dim for _, dim in scored[:k1]]


def best_fit_dims(values_a, values_b, values_c, values_d, dims, k2):
    """Exhaustive sort for the analogical-fit selection, best first."""
    scored = []
    for pos, dim in enumerate(dims):
        fit = ((values_a[pos] - values_b[pos]) - (values_c[pos] - values_d[pos])) ** 2
        scored.append((fit, dim))
    scored.sort()
    return [dim for fit, dim in scored[:k2]]


def nearest_candidates(coords_by_id, target, candidate_ids, metric="euclidean"):
    """Distance ranking by (distance key, word id); returns (id, key) list."""
    scored = []
    for wid in sorted(candidate_ids):
        vec = coords_by_id[wid]
        if metric == "euclidean":
            key = sum((x - t) ** 2 for x, t in zip(vec, target))
        else:
            nv = math.sqrt(sum(x * x for x in vec))
            nt = math.sqrt(sum(t * t for t in target))
            if nv == 0.0 or nt == 0.0:
                key = 2.0
            else:
                dot = sum(x * t for x, t in zip(vec, target))
                key = 1.0 - dot / (nv * nt)
        scored.append((key, wid))
    scored.sort()
    return [(wid, key) for key, wid in scored]

import numpy as np
import pytest
from scipy import sparse

from analogyspace import (
    BaseSpace,
    TokenStream,
    Vocabulary,
    build_vocabulary,
    count_cooccurrences,
    weight_pmi,
)


def make_stream(*docs):
    return TokenStream.from_documents([d.split() for d in docs])


def space_from_docs(docs, window=2, smoothing=0, max_size=None, min_count=1):
    """Corpus -> counts -> PMI with one vocabulary on both axes."""
    stream = TokenStream.from_documents([d.split() for d in docs])
    vocab = build_vocabulary(stream, max_size=max_size, min_count=min_count)
    table = count_cooccurrences(stream, vocab, vocab, window=window)
    return weight_pmi(table, smoothing)


def space_from_rows(words, context_words, rows, window=5, smoothing=0):
    """Hand-built space: ``rows`` maps word -> {context word: value}."""
    tv = Vocabulary(words, [len(words) - i + 10 for i in range(len(words))])
    cv = Vocabulary(context_words, [len(context_words) - i + 10 for i in range(len(context_words))])
    mat = sparse.dok_matrix((len(words), len(context_words)), dtype=np.float64)
    for word, values in rows.items():
        for cw, v in values.items():
            mat[tv.id_of(word), cv.id_of(cw)] = v
    return BaseSpace(mat.tocsr(), tv, cv, window, smoothing)


PLANTED_PAIRS = [("one", "first"), ("two", "second"), ("three", "third"), ("four", "fourth")]
PLANTED_MARKERS = ["alpha", "beta", "gamma", "delta"]
PLANTED_WINDOW = 7


def planted_docs():
    """Corpus with four planted pairs sharing side and pair markers.

    Each pair's sentences give its two members mirrored counts against the
    side words (cardinal, ordinal) and a doubled count on its own marker,
    so b - a + c lands exactly on d for every cross-pair analogy at window
    PLANTED_WINDOW.
    """
    all_markers = " ".join(PLANTED_MARKERS)
    docs = []
    for (x, y), m in zip(PLANTED_PAIRS, PLANTED_MARKERS):
        docs += [f"{x} {y} cardinal ordinal {all_markers}"] * 10
        docs += [f"{x} cardinal {m}"] * 10
        docs += [f"{y} ordinal {m}"] * 10
    return docs


@pytest.fixture
def royal_space():
    """Small corpus whose structure supports man : woman :: king : queen."""
    docs = []
    for _ in range(20):
        docs += [
            "king crown court gold",
            "queen crown court silk",
            "man work road gold",
            "woman work road silk",
            "king man royal estate",
            "queen woman royal estate",
        ]
    return space_from_docs(docs, window=3)

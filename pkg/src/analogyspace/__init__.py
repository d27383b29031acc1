"""Sparse interpretable word spaces with per-analogy subspace projection.

The package builds a non-negative PMI matrix over (target word, context
word) pairs from windowed co-occurrence counts, then answers analogies
a : b :: c : ? by projecting a small query-specific subspace (shared
support, mean-relevance filter, analogical-fit filter) and completing the
offset b - a + c by nearest neighbour. Dimensions stay tied to context
words throughout, so every coordinate is inspectable.
"""

from . import errors
from .analogy import (
    COSINE_SENTINEL,
    CompletionResult,
    EvalReport,
    PipelineParams,
    complete_analogy,
    complete_in_mean_subspace,
    evaluate_testset,
    parse_testset,
    run_pipeline,
    sample_queries,
)
from .corpus import (
    CooccurrenceTable,
    TokenStream,
    Vocabulary,
    build_vocabulary,
    count_cooccurrences,
    read_corpus,
    tokenize,
)
from .geometry import (
    DimensionHistogram,
    ParallelogramReport,
    dimension_histogram,
    parallelogram_metrics,
    write_histogram_json,
    write_histogram_tsv,
)
from .projection import (
    AnalogyQuery,
    Subspace,
    analogy_fit,
    gather_shared_dims,
    l1_normalize,
    project,
    select_analogy_dims,
    select_context_dims,
)
from .space import BaseSpace, load_space, save_space, scaled_smoothing, weight_pmi

__version__ = "0.1.0"

__all__ = [
    "AnalogyQuery",
    "BaseSpace",
    "COSINE_SENTINEL",
    "CompletionResult",
    "CooccurrenceTable",
    "DimensionHistogram",
    "EvalReport",
    "ParallelogramReport",
    "PipelineParams",
    "Subspace",
    "TokenStream",
    "Vocabulary",
    "analogy_fit",
    "build_vocabulary",
    "complete_analogy",
    "complete_in_mean_subspace",
    "count_cooccurrences",
    "dimension_histogram",
    "errors",
    "evaluate_testset",
    "gather_shared_dims",
    "l1_normalize",
    "load_space",
    "parallelogram_metrics",
    "parse_testset",
    "project",
    "read_corpus",
    "run_pipeline",
    "sample_queries",
    "save_space",
    "scaled_smoothing",
    "select_analogy_dims",
    "select_context_dims",
    "tokenize",
    "weight_pmi",
    "write_histogram_json",
    "write_histogram_tsv",
]

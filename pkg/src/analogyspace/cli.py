"""Command line interface.

Subcommands: build, solve, eval, inspect-dim, geometry. All configuration
comes from flags (no environment variables). Exit codes: 0 on success, 2
for I/O, format, or configuration problems, 3 for domain errors such as
out-of-vocabulary words or an empty shared support. Errors print one
machine-parsable line to stderr: ``error: <slug>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analogy import (
    AnalogyQuery,
    PipelineParams,
    complete_in_mean_subspace,
    evaluate_testset,
    parse_testset,
    run_pipeline,
    sample_queries,
)
from .corpus import build_vocabulary, count_cooccurrences, read_corpus
from .errors import (
    AnalogySpaceError,
    DomainError,
    InputError,
    OOVError,
    UnknownDimensionError,
)
from .geometry import (
    dimension_histogram,
    parallelogram_metrics,
    write_histogram_json,
    write_histogram_tsv,
)
from .projection import project
from .space import load_space, save_space, scaled_smoothing, weight_pmi

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the query subcommands."""

    space_path: Path | None
    params: PipelineParams
    seed: int = 0
    sample_size: int | None = None
    limit: int | None = None
    out: Path | None = None
    figure: Path | None = None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _require_file(path: Path, what: str) -> Path:
    if not path.exists():
        raise InputError(f"{what} not found: {path}")
    return path


def _require_outdir(path: Path) -> Path:
    parent = path.parent if path.parent != Path("") else Path(".")
    if not parent.exists():
        raise InputError(f"output directory not found: {parent}")
    return path


def _selection_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("subspace selection")
    g.add_argument("--k1", type=_positive_int, default=200,
                   help="mean-relevance dims to keep (default 200)")
    g.add_argument("--k2", type=_positive_int, default=20,
                   help="analogical-fit dims to keep (default 20)")
    g.add_argument("--metric", choices=("euclidean", "cosine"), default="euclidean",
                   help="completion distance (default euclidean)")
    g.add_argument("--exclude-inputs", action=argparse.BooleanOptionalAction,
                   default=True, help="keep query words out of the candidates")
    g.add_argument("--support", choices=("intersection", "union"),
                   default="intersection", help="shared-dim mode (default intersection)")
    g.add_argument("--fit", choices=("raw", "normalized"), default="raw",
                   help="value scale for the fit equation (default raw)")
    return p


def _params_from_args(args: argparse.Namespace, top_n: int = 10) -> PipelineParams:
    return PipelineParams(
        k1=args.k1,
        k2=args.k2,
        metric=args.metric,
        exclude_inputs=args.exclude_inputs,
        support_mode=args.support,
        fit_mode=args.fit,
        top_n=top_n,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="analogyspace",
        description="Build sparse PMI word spaces and solve analogies in "
        "per-query projected subspaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sel = _selection_parent()

    p = sub.add_parser("build", help="count a corpus and write a space file")
    p.add_argument("corpus", nargs="+", help="text files or directories")
    p.add_argument("--out", "-o", required=True, help="space file to write")
    p.add_argument("--docs-per", choices=("line", "file"), default="line",
                   help="document boundary within plain files (default line)")
    p.add_argument("--vocab-size", type=_positive_int, default=200_000,
                   help="target vocabulary cap (default 200000)")
    p.add_argument("--context-min-count", type=_positive_int, default=1,
                   help="minimum frequency for context types (default 1)")
    p.add_argument("--window", type=_positive_int, default=5,
                   help="co-occurrence window (default 5)")
    p.add_argument("--smoothing-a", default="auto",
                   help="PMI smoothing constant; 'auto' scales 10000 by "
                   "corpus size (default auto)")

    p = sub.add_parser("solve", parents=[sel], help="complete a : b :: c : ?")
    p.add_argument("words", nargs="+", metavar="WORD",
                   help="three words (a b c) or four (a b c d)")
    p.add_argument("--space", required=True, help="space file")
    p.add_argument("--top", type=_positive_int, default=10,
                   help="candidates to report (default 10)")
    p.add_argument("--json", dest="json_out", help="also write the result as JSON")

    p = sub.add_parser("eval", parents=[sel], help="score a four-word test set")
    p.add_argument("testset", help="test-set file (4 words per line, ':' headers)")
    p.add_argument("--space", required=True, help="space file")
    p.add_argument("--limit", type=_positive_int, default=None,
                   help="evaluate only the first N queries")
    p.add_argument("--sample-size", type=_positive_int, default=None,
                   help="evaluate a seeded random sample of N queries")
    p.add_argument("--seed", type=_nonneg_int, default=0,
                   help="sampling seed (default 0)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--figure", help="render a per-section accuracy figure here")

    p = sub.add_parser("inspect-dim", help="export one dim's ranked histogram")
    p.add_argument("dim_word", help="context word naming the dimension")
    p.add_argument("--space", required=True, help="space file")
    p.add_argument("--highlight", nargs="*", default=[],
                   help="words to resolve to ranks")
    p.add_argument("--out", required=True,
                   help="output prefix; writes PREFIX.tsv and PREFIX.json")
    p.add_argument("--figure", help="render the histogram figure here")

    p = sub.add_parser("geometry", parents=[sel],
                       help="parallelogram metrics for a b c d")
    p.add_argument("words", nargs=4, metavar="WORD", help="a b c d")
    p.add_argument("--space", help="space file (omit when using --coords)")
    p.add_argument("--coords", nargs=4, metavar="CSV",
                   help="override coordinates, four comma-separated vectors")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--figure", help="render the parallelogram figure here")
    return parser


def cmd_build(args: argparse.Namespace) -> int:
    paths = [Path(p) for p in args.corpus]
    for p in paths:
        _require_file(p, "corpus path")
    out = _require_outdir(Path(args.out))
    if args.smoothing_a != "auto":
        try:
            smoothing = int(args.smoothing_a)
        except ValueError:
            raise InputError(f"--smoothing-a must be an integer or 'auto', got {args.smoothing_a!r}")
        if smoothing < 0:
            raise InputError("--smoothing-a must be >= 0")
    t0 = time.perf_counter()
    tokens = read_corpus(paths, docs_per=args.docs_per)
    target_vocab = build_vocabulary(tokens, max_size=args.vocab_size, min_count=1)
    context_vocab = build_vocabulary(tokens, max_size=None, min_count=args.context_min_count)
    if args.smoothing_a == "auto":
        smoothing = scaled_smoothing(target_vocab.total_in_vocab)
    table = count_cooccurrences(tokens, target_vocab, context_vocab, window=args.window)
    space = weight_pmi(table, smoothing)
    save_space(space, out)
    dt = time.perf_counter() - t0
    size_mb = out.stat().st_size / 1e6
    print(f"tokens: {tokens.total_tokens} in {len(tokens.documents)} documents")
    print(f"target vocabulary: {len(target_vocab)} words "
          f"(W={target_vocab.total_in_vocab} in-vocab occurrences)")
    print(f"context vocabulary: {len(context_vocab)} types")
    print(f"pmi entries: {space.nnz} (window={args.window}, smoothing a={smoothing})")
    print(f"wrote {out} ({size_mb:.1f} MB) in {dt:.1f}s")
    return EXIT_OK


def _print_solution(mode: str, dims, labels, result, matched: bool | None) -> None:
    print(f"mode: {mode}")
    print(f"selected dims ({len(dims)}):")
    for rank, (d, label) in enumerate(zip(dims, labels), start=1):
        print(f"  {rank:3d}. {label}  (id {int(d)})")
    print(f"predicted: {result.predicted}")
    if matched is not None:
        print(f"matched: {'yes' if matched else 'no'}")
    print("top candidates:")
    for rank, (word, dist) in enumerate(result.ranked_candidates, start=1):
        print(f"  {rank:3d}. {word}  {dist:.6f}")


def cmd_solve(args: argparse.Namespace) -> int:
    if len(args.words) not in (3, 4):
        raise InputError("solve takes three words (a b c) or four (a b c d)")
    space = load_space(_require_file(Path(args.space), "space file"))
    params = _params_from_args(args, top_n=args.top)
    words = [w.lower() for w in args.words]
    if len(args.words) == 4:
        query = AnalogyQuery(*words)
        sub, result, matched = run_pipeline(space, query, params)
        mode = "analogical-fit subspace"
        print(f"query: {query}")
    else:
        sub, result = complete_in_mean_subspace(space, *words, params=params)
        matched = None
        mode = ("mean-relevance subspace (no fourth word: fit stage skipped; "
                "exploratory, not the reference pipeline)")
        print(f"query: {words[0]} : {words[1]} :: {words[2]} : ?")
    labels = sub.dim_labels(space.context_vocab)
    _print_solution(mode, sub.dims, labels, result, matched)
    if args.json_out:
        doc = {
            "query": words,
            "mode": "analogical" if len(words) == 4 else "mean-relevance",
            "dims": [int(d) for d in sub.dims],
            "dim_labels": labels,
            "predicted": result.predicted,
            "matched": matched,
            "candidates": [[w, d] for w, d in result.ranked_candidates],
            "excluded": sorted(result.excluded),
            "params": {
                "k1": params.k1, "k2": params.k2, "metric": params.metric,
                "exclude_inputs": params.exclude_inputs,
                "support_mode": params.support_mode, "fit_mode": params.fit_mode,
            },
        }
        _require_outdir(Path(args.json_out)).write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )
        print(f"wrote {args.json_out}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    space = load_space(_require_file(Path(args.space), "space file"))
    testset = _require_file(Path(args.testset), "test set")
    params = _params_from_args(args)
    queries = parse_testset(testset)
    sampled_lines = None
    if args.sample_size is not None:
        queries = sample_queries(queries, args.sample_size, args.seed)
        sampled_lines = [q.line for q in queries]
    report = evaluate_testset(space, queries, params, limit=args.limit)
    doc = report.to_dict(
        params,
        testset=str(testset),
        space=str(args.space),
        seed=args.seed,
        sample_size=args.sample_size,
        limit=args.limit,
        sampled_lines=sampled_lines,
    )
    acc = "undefined" if report.accuracy is None else f"{report.accuracy:.4f}"
    print(f"accuracy: {acc} ({report.correct}/{report.attempted} attempted, "
          f"{report.oov_skipped} oov-skipped of {report.total} total)")
    if args.out:
        _require_outdir(Path(args.out)).write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )
        print(f"wrote {args.out}")
    if args.figure:
        from .plots import render_eval

        render_eval(doc, _require_outdir(Path(args.figure)))
        print(f"wrote {args.figure}")
    return EXIT_OK


def cmd_inspect_dim(args: argparse.Namespace) -> int:
    space = load_space(_require_file(Path(args.space), "space file"))
    word = args.dim_word.lower()
    dim = space.context_vocab.get(word)
    if dim is None:
        raise UnknownDimensionError(f"context word not in vocabulary: {word}")
    hist = dimension_histogram(space, dim, highlight=[w.lower() for w in args.highlight])
    prefix = _require_outdir(Path(args.out))
    tsv_path = prefix.with_name(prefix.name + ".tsv")
    json_path = prefix.with_name(prefix.name + ".json")
    write_histogram_tsv(hist, tsv_path)
    write_histogram_json(hist, json_path)
    print(f"dimension {hist.dim_label!r} (id {hist.dim}): "
          f"{len(hist.ranked)} stored values")
    for w in sorted(hist.highlights):
        rank = hist.highlights[w]
        if rank is None:
            print(f"  {w}: absent (value 0)")
        else:
            print(f"  {w}: rank {rank} of {len(hist.ranked)}, value {hist.highlight_value(w):.5f}")
    print(f"wrote {tsv_path}")
    print(f"wrote {json_path}")
    if args.figure:
        from .plots import render_histogram

        render_histogram(hist, _require_outdir(Path(args.figure)))
        print(f"wrote {args.figure}")
    return EXIT_OK


def _parse_coords(texts: list[str]) -> np.ndarray:
    rows = []
    for text in texts:
        try:
            rows.append([float(x) for x in text.split(",") if x != ""])
        except ValueError:
            raise InputError(f"--coords expects comma-separated numbers, got {text!r}")
    if len({len(r) for r in rows}) != 1 or len(rows[0]) < 2:
        raise InputError("--coords vectors must share one dimension >= 2")
    return np.asarray(rows, dtype=np.float64)


def cmd_geometry(args: argparse.Namespace) -> int:
    words = [w.lower() for w in args.words]
    doc: dict
    if args.coords:
        pts = _parse_coords(args.coords)
        report = parallelogram_metrics(*pts)
        doc = report.to_dict(words=words, coords=[list(map(float, p)) for p in pts],
                             source="override")
        dim_labels = None
    else:
        if not args.space:
            raise InputError("geometry needs --space unless --coords is given")
        space = load_space(_require_file(Path(args.space), "space file"))
        params = _params_from_args(args)
        query = AnalogyQuery(*words)
        sub, _, _ = run_pipeline(space, query, params)
        ids = [space.target_vocab.id_of(w) for w in words]
        pts = np.stack([sub.coords_of(i) for i in ids])
        report = parallelogram_metrics(*pts)
        dim_labels = sub.dim_labels(space.context_vocab)
        doc = report.to_dict(
            words=words,
            dims=[int(d) for d in sub.dims],
            dim_labels=dim_labels,
            coords=[list(map(float, p)) for p in pts],
            source="selected-subspace",
        )
    print(f"closure_abs:  {report.closure_abs:.6f}")
    print(f"closure_rel:  {report.closure_rel:.6f}")
    print(f"flatness:     {report.flatness:.6f}")
    print(f"centrality:   {report.centrality:.3f} deg")
    print(f"obliqueness:  {report.obliqueness:.3f} deg")
    if args.out:
        _require_outdir(Path(args.out)).write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )
        print(f"wrote {args.out}")
    if args.figure:
        from .plots import render_parallelogram

        render_parallelogram(pts, words, report, _require_outdir(Path(args.figure)),
                             dim_labels=dim_labels)
        print(f"wrote {args.figure}")
    return EXIT_OK


_COMMANDS = {
    "build": cmd_build,
    "solve": cmd_solve,
    "eval": cmd_eval,
    "inspect-dim": cmd_inspect_dim,
    "geometry": cmd_geometry,
}


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, dispatch, and map errors onto exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc.slug}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except InputError as exc:
        print(f"error: {exc.slug}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalogySpaceError as exc:
        print(f"error: {exc.slug}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

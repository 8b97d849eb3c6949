"""Batch entry points: index building, search, explanations, reports, serve.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 file
I/O or parse failure, 2 contract violation or degenerate explanation.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click

from . import bundled_corpus_path, bundled_embeddings_path
from .corpus import load_corpus
from .engine import SearchEngine, resolve_seed
from .errors import CorpusFormatError, ExsearchError, NoResultsError
from .explain import DEFAULT_N_SAMPLES, payload_to_json
from .index import build_index, save_index
from .service import ServiceConfig

EXIT_IO = 1
EXIT_CONTRACT = 2


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn, *args, **kwargs):
    """Run a command body with the shared exception-to-exit-code mapping."""
    try:
        return fn(*args, **kwargs)
    except CorpusFormatError as exc:
        _fail(str(exc), EXIT_IO)
    except OSError as exc:
        _fail(str(exc), EXIT_IO)
    except ExsearchError as exc:
        _fail(str(exc), EXIT_CONTRACT)


def _emit(payload: dict) -> None:
    sys.stdout.write(payload_to_json(payload).decode("utf-8") + "\n")


def _load_engine(index_path: str, embeddings: str | None, pool_size: int) -> SearchEngine:
    return SearchEngine.from_index_file(
        index_path, embedding_path=embeddings, pool_size=pool_size
    )


def _clamped_n_words(engine: SearchEngine, doc_id: str, n_words: int) -> int:
    vocab_size = engine.body_vocab_size(doc_id)
    if n_words > vocab_size:
        click.echo(
            f"warning: n-words {n_words} exceeds document vocabulary "
            f"({vocab_size} terms); clamped to {vocab_size}",
            err=True,
        )
        return vocab_size
    return n_words


@click.group()
def main() -> None:
    """Explainable search: rank documents and explain the rankings."""


@main.command("index")
@click.option("--corpus", "corpus_path", required=True, help="Corpus file (JSON lines).")
@click.option("--out", "out_path", required=True, help="Where to write the index.")
def cmd_index(corpus_path: str, out_path: str) -> None:
    """Build an inverted index from a corpus file."""

    def run() -> None:
        corpus = load_corpus(corpus_path)
        index = build_index(corpus)
        save_index(out_path, index, corpus)
        click.echo(
            f"indexed {index.doc_count} documents, "
            f"avg_doc_length={index.avg_doc_length:.2f}"
        )

    _guarded(run)


_shared = [
    click.option("--index", "index_path", required=True, help="Index file from `index`."),
    click.option("--q", "query", required=True, help="Query text."),
    click.option("--ranker", default="bm25", show_default=True),
    click.option("--k", default=10, show_default=True),
    click.option("--embeddings", default=None, help="Embedding file (for ranker=embed)."),
    click.option("--pool-size", default=100, show_default=True),
]


def shared_options(fn):
    for option in reversed(_shared):
        fn = option(fn)
    return fn


_explain_knobs = [
    click.option("--n-words", default=10, show_default=True),
    click.option("--n-samples", default=DEFAULT_N_SAMPLES, show_default=True),
    click.option("--seed", default=None, type=int, help="Omit for a fresh random seed."),
]


def explain_options(fn):
    for option in reversed(_explain_knobs):
        fn = option(fn)
    return fn


@main.command("search")
@shared_options
def cmd_search(index_path, query, ranker, k, embeddings, pool_size) -> None:
    """Run a query and print the ranked results as JSON."""

    def run() -> None:
        engine = _load_engine(index_path, embeddings, pool_size)
        _emit(engine.search_payload(query, ranker, k))

    _guarded(run)


@main.command("explain")
@shared_options
@click.option("--doc-id", required=True)
@click.option("--converter", default="topk", show_default=True)
@explain_options
def cmd_explain(
    index_path, query, ranker, k, embeddings, pool_size,
    doc_id, converter, n_words, n_samples, seed,
) -> None:
    """Explain why one document is relevant to the query."""

    def run() -> None:
        engine = _load_engine(index_path, embeddings, pool_size)
        payload = engine.explain(
            q=query,
            doc_id=doc_id,
            ranker_name=ranker,
            converter_name=converter,
            k=k,
            n_words=_clamped_n_words(engine, doc_id, n_words),
            n_samples=n_samples,
            seed=seed,
        )
        _emit(payload)

    _guarded(run)


@main.command("explain-pair")
@shared_options
@click.option("--doc-a-id", required=True, help="The higher-ranked document.")
@click.option("--doc-b-id", required=True, help="The lower-ranked document.")
@explain_options
def cmd_explain_pair(
    index_path, query, ranker, k, embeddings, pool_size,
    doc_a_id, doc_b_id, n_words, n_samples, seed,
) -> None:
    """Explain why doc-a is ranked above doc-b (positive entries only)."""

    def run() -> None:
        engine = _load_engine(index_path, embeddings, pool_size)
        payload = engine.explain_pair(
            q=query,
            doc_a_id=doc_a_id,
            doc_b_id=doc_b_id,
            ranker_name=ranker,
            k=k,
            n_words=_clamped_n_words(engine, doc_a_id, n_words),
            n_samples=n_samples,
            seed=seed,
        )
        _emit(payload)

    _guarded(run)


@main.command("intent")
@shared_options
@click.option("--converter", default="topk", show_default=True)
@explain_options
def cmd_intent(
    index_path, query, ranker, k, embeddings, pool_size,
    converter, n_words, n_samples, seed,
) -> None:
    """Aggregate per-document explanations into the ranker's query intent."""

    def run() -> None:
        engine = _load_engine(index_path, embeddings, pool_size)
        payload = engine.intent(
            q=query,
            ranker_name=ranker,
            converter_name=converter,
            k=k,
            n_words=n_words,
            n_samples=n_samples,
            seed=seed,
        )
        _emit(payload)

    _guarded(run)


def _write_tsv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


@main.command("report")
@shared_options
@click.option("--converter", default="topk", show_default=True)
@explain_options
@click.option("--out-dir", "out_dir", required=True, help="Directory for TSV + figures.")
def cmd_report(
    index_path, query, ranker, k, embeddings, pool_size,
    converter, n_words, n_samples, seed, out_dir,
) -> None:
    """Search, explain the top hit and the query intent; write TSVs and charts."""
    from .viz import render_explanation_chart

    def run() -> None:
        engine = _load_engine(index_path, embeddings, pool_size)
        chosen_seed = resolve_seed(seed)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []

        search = engine.search_payload(query, ranker, k)
        results_tsv = out / "results.tsv"
        _write_tsv(
            results_tsv,
            ["rank", "doc_id", "score", "title"],
            [[r["rank"], r["doc_id"], r["score"], r["title"]] for r in search["results"]],
        )
        written.append(results_tsv)

        if not search["results"]:
            raise NoResultsError(f"query {query!r} retrieved no documents")
        top_id = search["results"][0]["doc_id"]
        explanation = engine.explain(
            q=query,
            doc_id=top_id,
            ranker_name=ranker,
            converter_name=converter,
            k=k,
            n_words=_clamped_n_words(engine, top_id, n_words),
            n_samples=n_samples,
            seed=chosen_seed,
        )
        expl_tsv = out / f"explanation_{top_id}.tsv"
        _write_tsv(
            expl_tsv,
            ["term", "weight", "class"],
            [[e["term"], e["weight"], e["class"]] for e in explanation["entries"]],
        )
        written.append(expl_tsv)
        written.append(render_explanation_chart(explanation, out / f"explanation_{top_id}.png"))

        intent = engine.intent(
            q=query,
            ranker_name=ranker,
            converter_name=converter,
            k=k,
            n_words=n_words,
            n_samples=n_samples,
            seed=chosen_seed,
        )
        intent_tsv = out / "intent.tsv"
        _write_tsv(
            intent_tsv,
            ["term", "weight", "class"],
            [[e["term"], e["weight"], e["class"]] for e in intent["entries"]],
        )
        written.append(intent_tsv)
        written.append(render_explanation_chart(intent, out / "intent.png"))

        for path in written:
            click.echo(str(path))

    _guarded(run)


@main.command("serve")
@click.option("--corpus", "corpus_path", default=None, help="Corpus file; bundled demo corpus if omitted.")
@click.option("--embeddings", default=None, help="Embedding file enabling the embed ranker.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--k", "default_k", default=10, show_default=True)
@click.option("--converter", "default_converter", default="topk", show_default=True)
@click.option("--n-samples", "default_n_samples", default=DEFAULT_N_SAMPLES, show_default=True)
@click.option("--pool-size", default=100, show_default=True)
@click.option("--ui-dir", default=None, help="Directory of built web UI files to serve at /ui.")
def cmd_serve(
    corpus_path, embeddings, host, port,
    default_k, default_converter, default_n_samples, pool_size, ui_dir,
) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    def run() -> None:
        config = ServiceConfig(
            corpus_path=corpus_path or bundled_corpus_path(),
            embedding_path=embeddings
            or (bundled_embeddings_path() if corpus_path is None else None),
            listen_address=f"{host}:{port}",
            default_k=default_k,
            default_converter=default_converter,
            default_n_samples=default_n_samples,
            pool_size=pool_size,
            ui_dir=ui_dir,
        )
        app = create_app(config)
        click.echo(f"serving on http://{config.listen_address}", err=True)
        uvicorn.run(app, host=host, port=port, log_level="info")

    _guarded(run)


if __name__ == "__main__":
    main()

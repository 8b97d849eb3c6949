"""Shared search-and-explain core behind the HTTP service and the CLI.

Both transports call into one SearchEngine so identical logical requests
(with identical seeds) produce byte-identical JSON payloads.
"""

from __future__ import annotations

import secrets
from pathlib import Path

from .converters import ConverterKind
from .corpus import Corpus, Document, TokenizedDocument, tokenize_body, tokenize_document
from .errors import (
    InvalidParameterError,
    NoResultsError,
    NotInTopKError,
    UnknownDocumentError,
)
from .explain import (
    DEFAULT_N_SAMPLES,
    ExplanationParams,
    explain_document,
    explain_intent,
    explain_pair,
    explanation_payload,
    intent_payload,
)
from .index import Index, build_index, load_index
from .rankers import (
    EmbeddingTable,
    Query,
    RankedList,
    bm25_retrieve,
    get_ranker,
    load_embeddings,
    make_registry,
    rank_documents,
)

DEFAULT_POOL_SIZE = 100
SNIPPET_LENGTH = 200


def resolve_seed(seed: int | None) -> int:
    """Use the caller's seed, or mint one so the answer stays reproducible."""
    return seed if seed is not None else secrets.randbelow(2**31)


class SearchEngine:
    """Immutable corpus + index + rankers, ready to search and explain."""

    def __init__(
        self,
        corpus: Corpus,
        index: Index | None = None,
        embeddings: EmbeddingTable | None = None,
        pool_size: int = DEFAULT_POOL_SIZE,
    ):
        if pool_size < 1:
            raise InvalidParameterError(f"pool_size must be >= 1, got {pool_size}")
        self.corpus = corpus
        self.index = index if index is not None else build_index(corpus)
        self.registry = make_registry(self.index, embeddings)
        self.pool_size = pool_size
        self._full_tokens = {d.doc_id: tokenize_document(d) for d in corpus}
        self._body_tokens: dict[str, TokenizedDocument] = {}

    @classmethod
    def from_corpus_file(
        cls,
        corpus_path: str | Path,
        embedding_path: str | Path | None = None,
        pool_size: int = DEFAULT_POOL_SIZE,
    ) -> "SearchEngine":
        from .corpus import load_corpus

        corpus = load_corpus(corpus_path)
        embeddings = load_embeddings(embedding_path) if embedding_path else None
        return cls(corpus, embeddings=embeddings, pool_size=pool_size)

    @classmethod
    def from_index_file(
        cls,
        index_path: str | Path,
        embedding_path: str | Path | None = None,
        pool_size: int = DEFAULT_POOL_SIZE,
    ) -> "SearchEngine":
        index, corpus = load_index(index_path)
        embeddings = load_embeddings(embedding_path) if embedding_path else None
        return cls(corpus, index=index, embeddings=embeddings, pool_size=pool_size)

    # -- documents -------------------------------------------------------

    def document(self, doc_id: str) -> Document:
        doc = self.corpus.get(doc_id)
        if doc is None:
            raise UnknownDocumentError(f"unknown doc_id {doc_id!r}")
        return doc

    def body_tokens(self, doc_id: str) -> TokenizedDocument:
        if doc_id not in self._body_tokens:
            self._body_tokens[doc_id] = tokenize_body(self.document(doc_id))
        return self._body_tokens[doc_id]

    def body_vocab_size(self, doc_id: str) -> int:
        return len(self.body_tokens(doc_id).vocabulary)

    # -- search ----------------------------------------------------------

    def search(self, q: str, ranker_name: str, k: int) -> RankedList:
        """BM25 candidate pool re-scored by the named ranker, cut at k."""
        if k < 1:
            raise InvalidParameterError(f"k must be >= 1, got {k}")
        query = Query.from_raw(q)
        query.require_terms()
        ranker = get_ranker(self.registry, ranker_name)
        pool = bm25_retrieve(self.index, list(query.terms), self.pool_size)
        candidates = [self._full_tokens[doc_id] for doc_id in pool.doc_ids()]
        return rank_documents(ranker, query, candidates, k)

    def search_payload(self, q: str, ranker_name: str, k: int) -> dict:
        ranked = self.search(q, ranker_name, k)
        results = []
        for rank, (doc_id, score) in enumerate(ranked.entries, start=1):
            doc = self.document(doc_id)
            results.append(
                {
                    "rank": rank,
                    "doc_id": doc_id,
                    "title": doc.title,
                    "snippet": doc.snippet(SNIPPET_LENGTH),
                    "score": score,
                }
            )
        return {"query": q, "ranker": ranker_name, "k": k, "results": results}

    # -- explanations ----------------------------------------------------

    def _params(
        self,
        converter: ConverterKind,
        seed: int,
        n_words: int,
        n_samples: int | None,
    ) -> ExplanationParams:
        return ExplanationParams(
            converter=converter,
            seed=seed,
            n_words=n_words,
            n_samples=n_samples if n_samples is not None else DEFAULT_N_SAMPLES,
        )

    def explain(
        self,
        q: str,
        doc_id: str,
        ranker_name: str,
        converter_name: str,
        k: int,
        n_words: int,
        n_samples: int | None = None,
        seed: int | None = None,
    ) -> dict:
        seed = resolve_seed(seed)
        converter = ConverterKind.from_wire(converter_name)
        ranked = self.search(q, ranker_name, k)
        self.document(doc_id)
        if ranked.rank_of(doc_id) is None:
            raise NotInTopKError(
                f"document {doc_id!r} is not in the top-{k} list for query {q!r}"
            )
        params = self._params(converter, seed, n_words, n_samples)
        explanation = explain_document(
            get_ranker(self.registry, ranker_name),
            ranked.query,
            self.body_tokens(doc_id),
            ranked,
            params,
        )
        return explanation_payload(explanation, seed)

    def explain_pair(
        self,
        q: str,
        doc_a_id: str,
        doc_b_id: str,
        ranker_name: str,
        k: int,
        n_words: int,
        n_samples: int | None = None,
        seed: int | None = None,
    ) -> dict:
        # The pair question compares against the threshold set by doc_b, so
        # the comparison-based converter is the only one that sees it.
        seed = resolve_seed(seed)
        ranked = self.search(q, ranker_name, k)
        self.document(doc_a_id)
        self.document(doc_b_id)
        rank_b = ranked.rank_of(doc_b_id)
        if ranked.rank_of(doc_a_id) is None or rank_b is None:
            raise NotInTopKError(
                f"both documents must be in the top-{k} list for query {q!r}"
            )
        params = self._params(ConverterKind.TOP_K_BINARY, seed, n_words, n_samples)
        explanation = explain_pair(
            get_ranker(self.registry, ranker_name),
            ranked.query,
            self.body_tokens(doc_a_id),
            rank_b,
            ranked,
            params,
        )
        return explanation_payload(explanation, seed)

    def intent(
        self,
        q: str,
        ranker_name: str,
        converter_name: str,
        k: int,
        n_words: int,
        n_samples: int | None = None,
        seed: int | None = None,
    ) -> dict:
        seed = resolve_seed(seed)
        converter = ConverterKind.from_wire(converter_name)
        ranked = self.search(q, ranker_name, k)
        if not ranked.entries:
            raise NoResultsError(f"query {q!r} retrieved no documents")
        params = self._params(converter, seed, n_words, n_samples)
        docs = {doc_id: self.body_tokens(doc_id) for doc_id in ranked.doc_ids()}
        intent = explain_intent(
            get_ranker(self.registry, ranker_name), ranked.query, ranked, params, docs
        )
        return intent_payload(intent, seed)

    def meta(self, defaults: dict | None = None) -> dict:
        return {
            "rankers": sorted(self.registry),
            "converters": [kind.value for kind in ConverterKind],
            "corpus": {"doc_count": self.index.doc_count},
            "defaults": defaults or {},
        }

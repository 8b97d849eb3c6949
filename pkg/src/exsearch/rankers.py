"""Pointwise rankers and ranked-list construction.

Every ranker is a blackbox R(query, document) -> score to the rest of the
system: deterministic, finite, stateless. Two implementations ship here —
BM25 over the inverted index, and a cosine scorer over mean word vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .corpus import TokenizedDocument, tokenize
from .errors import (
    CorpusFormatError,
    EmptyQueryError,
    InvalidParameterError,
    UnknownRankerError,
)
from .index import Index


@dataclass(frozen=True)
class Query:
    raw: str
    terms: tuple[str, ...]

    @classmethod
    def from_raw(cls, raw: str) -> "Query":
        return cls(raw=raw, terms=tuple(tokenize(raw)))

    def require_terms(self) -> None:
        if not self.terms:
            raise EmptyQueryError(f"query {self.raw!r} contains no tokens")


@dataclass(frozen=True)
class RankedList:
    """Top-k documents for a query, sorted by score desc, ties by doc_id."""

    query: Query
    entries: tuple[tuple[str, float], ...]
    k: int

    def doc_ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.entries]

    def scores(self) -> list[float]:
        return [score for _, score in self.entries]

    def rank_of(self, doc_id: str) -> int | None:
        """1-based rank, or None when the document is not listed."""
        for i, (candidate, _) in enumerate(self.entries, start=1):
            if candidate == doc_id:
                return i
        return None

    def truncated(self, k: int) -> "RankedList":
        return RankedList(query=self.query, entries=self.entries[:k], k=k)


class Ranker(Protocol):
    name: str

    def score(self, query: Query, doc: TokenizedDocument) -> float: ...


class BM25Ranker:
    """BM25 against the corpus statistics of a fixed index.

    tf and document length come from the document actually handed in, so
    perturbed token subsequences are scored exactly like real documents.
    """

    name = "bm25"

    def __init__(self, index: Index):
        self._index = index

    def score(self, query: Query, doc: TokenizedDocument) -> float:
        query.require_terms()
        counts = doc.term_counts
        dl = len(doc.tokens)
        total = 0.0
        for term in query.terms:
            total += self._index.term_weight(term, counts.get(term, 0), dl)
        return total


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Parse a text embedding file: one ``term v1 v2 ... vd`` row per line.

    The first line fixes the dimension; any deviating or non-numeric line
    is rejected with its line number.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            term, components = parts[0], parts[1:]
            if not components:
                raise CorpusFormatError(f"{path}:{lineno}: no vector components")
            try:
                vec = np.array([float(x) for x in components], dtype=np.float64)
            except ValueError as exc:
                raise CorpusFormatError(
                    f"{path}:{lineno}: non-numeric vector component"
                ) from exc
            if not np.all(np.isfinite(vec)):
                raise CorpusFormatError(f"{path}:{lineno}: non-finite vector component")
            if dimension is None:
                dimension = len(vec)
            elif len(vec) != dimension:
                raise CorpusFormatError(
                    f"{path}:{lineno}: expected {dimension} components, got {len(vec)}"
                )
            vectors[term] = vec
    if dimension is None:
        raise CorpusFormatError(f"{path}: empty embedding file")
    return EmbeddingTable(dimension=dimension, vectors=vectors)


class EmbeddingRanker:
    """Cosine similarity between mean query vector and mean document vector.

    Out-of-vocabulary tokens are skipped; if either side has nothing left
    the score is 0. Output always lies in [-1, 1].
    """

    name = "embed"

    def __init__(self, table: EmbeddingTable):
        if not table.vectors:
            raise InvalidParameterError("embedding table is empty")
        self._table = table

    def _centroid(self, tokens) -> np.ndarray | None:
        vectors = self._table.vectors
        found = [vectors[t] for t in tokens if t in vectors]
        if not found:
            return None
        return np.mean(found, axis=0)

    def score(self, query: Query, doc: TokenizedDocument) -> float:
        query.require_terms()
        q_vec = self._centroid(query.terms)
        d_vec = self._centroid(doc.tokens)
        if q_vec is None or d_vec is None:
            return 0.0
        q_norm = float(np.linalg.norm(q_vec))
        d_norm = float(np.linalg.norm(d_vec))
        if q_norm == 0.0 or d_norm == 0.0:
            return 0.0
        cos = float(np.dot(q_vec, d_vec) / (q_norm * d_norm))
        return max(-1.0, min(1.0, cos))


def make_registry(index: Index, embeddings: EmbeddingTable | None = None) -> dict[str, Ranker]:
    registry: dict[str, Ranker] = {"bm25": BM25Ranker(index)}
    if embeddings is not None:
        registry["embed"] = EmbeddingRanker(embeddings)
    return registry


def get_ranker(registry: dict[str, Ranker], name: str) -> Ranker:
    try:
        return registry[name]
    except KeyError:
        available = ", ".join(sorted(registry))
        raise UnknownRankerError(
            f"unknown ranker {name!r}; available rankers: {available}"
        ) from None


def rank_documents(
    ranker: Ranker,
    query: Query,
    candidates: list[TokenizedDocument],
    k: int,
) -> RankedList:
    """Score all candidates and keep the top k (ties broken by doc_id)."""
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    query.require_terms()
    scored = [(doc.doc_id, ranker.score(query, doc)) for doc in candidates]
    for doc_id, score in scored:
        if not math.isfinite(score):
            raise InvalidParameterError(
                f"ranker {ranker.name!r} produced a non-finite score for {doc_id!r}"
            )
    scored.sort(key=lambda item: (-item[1], item[0]))
    return RankedList(query=query, entries=tuple(scored[:k]), k=k)


def bm25_retrieve(index: Index, query_terms: list[str], pool_size: int) -> RankedList:
    """BM25 candidate retrieval straight off the postings lists.

    Scores are accumulated per query token in query order, which keeps them
    float-identical to re-scoring the same document with BM25Ranker.
    """
    if pool_size < 1:
        raise InvalidParameterError(f"pool_size must be >= 1, got {pool_size}")
    query = Query(raw=" ".join(query_terms), terms=tuple(query_terms))
    if not query.terms:
        return RankedList(query=query, entries=(), k=pool_size)

    scores: dict[str, float] = {}
    for term in query.terms:
        for doc_id, tf in index.postings.get(term, ()):
            weight = index.term_weight(term, tf, index.doc_lengths[doc_id])
            scores[doc_id] = scores.get(doc_id, 0.0) + weight
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return RankedList(query=query, entries=tuple(ranked[:pool_size]), k=pool_size)

"""Shared fixtures: planted rankers and synthetic documents.

The planted ranker scores a document by how many distinct query terms it
contains, so the "right" explanation is known by construction and the
pipeline has a ground truth to recover.
"""

from __future__ import annotations

import pytest

from exsearch import bundled_corpus_path, bundled_embeddings_path
from exsearch.corpus import TokenizedDocument
from exsearch.engine import SearchEngine
from exsearch.rankers import Query, RankedList


class QueryTermCountRanker:
    """score = scale * (number of distinct query terms present in the doc)."""

    name = "planted"

    def __init__(self, scale: float = 1.0):
        self.scale = scale

    def score(self, query: Query, doc: TokenizedDocument) -> float:
        vocab = doc.vocabulary
        return self.scale * float(sum(1 for t in set(query.terms) if t in vocab))


def make_doc(doc_id: str, tokens: list[str]) -> TokenizedDocument:
    return TokenizedDocument(doc_id, tokens)


def make_ranked(entries: list[tuple[str, float]], q: str = "rail strikes") -> RankedList:
    return RankedList(query=Query.from_raw(q), entries=tuple(entries), k=len(entries))


@pytest.fixture(scope="session")
def bundled_engine() -> SearchEngine:
    return SearchEngine.from_corpus_file(bundled_corpus_path(), bundled_embeddings_path())


@pytest.fixture()
def planted_ranker() -> QueryTermCountRanker:
    return QueryTermCountRanker()

"""Inverted index construction, BM25 weighting and index persistence.

The index stores corpus-level statistics only (postings, lengths); the
documents themselves travel alongside it in the persisted container so a
single file is enough to search and explain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus, Document, tokenize_document
from .errors import CorpusFormatError, DuplicateDocIdError

BM25_K1 = 1.2
BM25_B = 0.75

INDEX_FORMAT_VERSION = 1


@dataclass
class Index:
    """Immutable-after-build inverted index.

    postings map term -> [(doc_id, term_frequency), ...] sorted by doc_id,
    so iteration order is deterministic everywhere downstream.
    """

    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    doc_lengths: dict[str, int] = field(default_factory=dict)
    doc_count: int = 0
    avg_doc_length: float = 0.0

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log((self.doc_count - df + 0.5) / (df + 0.5) + 1.0)

    def term_weight(self, term: str, tf: int, doc_length: int) -> float:
        """BM25 contribution of one term occurrence count in one document."""
        if tf <= 0:
            return 0.0
        if self.avg_doc_length > 0:
            norm = 1.0 - BM25_B + BM25_B * doc_length / self.avg_doc_length
        else:
            norm = 1.0
        return self.idf(term) * tf * (BM25_K1 + 1.0) / (tf + BM25_K1 * norm)


def build_index(corpus: Corpus | list[Document]) -> Index:
    """Build an inverted index over title+body tokens of every document."""
    documents = list(corpus)
    seen: set[str] = set()
    for doc in documents:
        if doc.doc_id in seen:
            raise DuplicateDocIdError(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)

    postings: dict[str, dict[str, int]] = {}
    doc_lengths: dict[str, int] = {}
    for doc in documents:
        tokenized = tokenize_document(doc)
        doc_lengths[doc.doc_id] = len(tokenized.tokens)
        for term, tf in tokenized.term_counts.items():
            postings.setdefault(term, {})[doc.doc_id] = tf

    sorted_postings = {
        term: sorted(entries.items()) for term, entries in postings.items()
    }
    doc_count = len(documents)
    avg = sum(doc_lengths.values()) / doc_count if doc_count else 0.0
    return Index(
        postings=sorted_postings,
        doc_lengths=doc_lengths,
        doc_count=doc_count,
        avg_doc_length=avg,
    )


def index_to_bytes(index: Index, corpus: Corpus) -> bytes:
    """Canonical serialization: one version byte, then sorted-key JSON."""
    payload = {
        "postings": {t: [[d, tf] for d, tf in plist] for t, plist in index.postings.items()},
        "doc_lengths": index.doc_lengths,
        "doc_count": index.doc_count,
        "avg_doc_length": index.avg_doc_length,
        "documents": [
            {"doc_id": d.doc_id, "title": d.title, "body": d.body} for d in corpus
        ],
    }
    body = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return bytes([INDEX_FORMAT_VERSION]) + body


def save_index(path: str | Path, index: Index, corpus: Corpus) -> None:
    Path(path).write_bytes(index_to_bytes(index, corpus))


def load_index(path: str | Path) -> tuple[Index, Corpus]:
    path = Path(path)
    raw = path.read_bytes()
    if not raw:
        raise CorpusFormatError(f"{path}: empty index file")
    version = raw[0]
    if version != INDEX_FORMAT_VERSION:
        raise CorpusFormatError(
            f"{path}: unsupported index format version {version} "
            f"(expected {INDEX_FORMAT_VERSION})"
        )
    try:
        payload = json.loads(raw[1:].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorpusFormatError(f"{path}: corrupt index payload ({exc})") from exc
    index = Index(
        postings={
            t: [(d, int(tf)) for d, tf in plist]
            for t, plist in payload["postings"].items()
        },
        doc_lengths={d: int(n) for d, n in payload["doc_lengths"].items()},
        doc_count=int(payload["doc_count"]),
        avg_doc_length=float(payload["avg_doc_length"]),
    )
    corpus = Corpus([Document(**record) for record in payload["documents"]])
    return index, corpus

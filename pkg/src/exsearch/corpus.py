"""Documents, tokenization and corpus loading.

The tokenizer is deliberately plain: lowercase, split on anything that is
not alphanumeric, keep everything else. No stemming and no stopword list,
because every surviving token is a candidate explanation feature and must
match what the user reads on screen.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import CorpusFormatError, DuplicateDocIdError

# Unicode alphanumerics; underscore is a separator like any other symbol.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase *text* and split it into alphanumeric runs.

    Empty input yields an empty list; token order follows the text.
    """
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Document:
    """One raw corpus entry."""

    doc_id: str
    title: str
    body: str

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise CorpusFormatError("document has an empty doc_id")
        if not self.body.strip():
            raise CorpusFormatError(f"document {self.doc_id!r} has an empty body")

    def snippet(self, length: int = 200) -> str:
        return self.body[:length]


class TokenizedDocument:
    """A document projected into token space.

    ``vocabulary`` (the unique-term set) is the interpretable feature space
    the explainer works in; ``term_positions`` and ``term_counts`` are
    computed lazily because perturbation creates thousands of short-lived
    instances that never need them all.
    """

    __slots__ = ("doc_id", "tokens", "__dict__")

    def __init__(self, doc_id: str, tokens: list[str]):
        self.doc_id = doc_id
        self.tokens = list(tokens)

    @cached_property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.tokens)

    @cached_property
    def term_counts(self) -> Counter[str]:
        return Counter(self.tokens)

    @cached_property
    def term_positions(self) -> dict[str, list[int]]:
        positions: dict[str, list[int]] = {}
        for i, term in enumerate(self.tokens):
            positions.setdefault(term, []).append(i)
        return positions

    def __len__(self) -> int:
        return len(self.tokens)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TokenizedDocument({self.doc_id!r}, {len(self.tokens)} tokens)"


def tokenize_document(doc: Document) -> TokenizedDocument:
    """Full tokenization (title first, then body) — what rankers score."""
    return TokenizedDocument(doc.doc_id, tokenize(doc.title) + tokenize(doc.body))


def tokenize_body(doc: Document) -> TokenizedDocument:
    """Body-only tokenization — what the explainer perturbs."""
    return TokenizedDocument(doc.doc_id, tokenize(doc.body))


@dataclass
class Corpus:
    """An ordered collection of documents with unique ids."""

    documents: list[Document] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for doc in self.documents:
            if doc.doc_id in seen:
                raise DuplicateDocIdError(f"duplicate doc_id {doc.doc_id!r}")
            seen.add(doc.doc_id)
        self._by_id = {doc.doc_id: doc for doc in self.documents}

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def get(self, doc_id: str) -> Document | None:
        return self._by_id.get(doc_id)


def load_corpus(path: str | Path) -> Corpus:
    """Read a corpus file: one JSON object per line with doc_id/title/body.

    Unknown fields are ignored; a missing field, bad JSON or duplicate id
    is an error naming the offending line.
    """
    path = Path(path)
    documents: list[Document] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected a JSON object")
            missing = [k for k in ("doc_id", "title", "body") if k not in record]
            if missing:
                raise CorpusFormatError(
                    f"{path}:{lineno}: missing field(s) {', '.join(missing)}"
                )
            try:
                doc = Document(
                    doc_id=str(record["doc_id"]),
                    title=str(record["title"]),
                    body=str(record["body"]),
                )
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
            if doc.doc_id in seen:
                raise DuplicateDocIdError(
                    f"{path}:{lineno}: duplicate doc_id {doc.doc_id!r}"
                )
            seen.add(doc.doc_id)
            documents.append(doc)
    return Corpus(documents)

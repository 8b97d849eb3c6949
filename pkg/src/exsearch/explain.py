"""Local explanation pipelines: single document, document pair, query intent.

The pipeline is the same in every case: perturb the document, score each
variant with the blackbox ranker, convert scores to relevance labels
against the current top-k list, weight by locality, fit the ridge
surrogate, and read explanation entries off its coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .converters import (
    ConverterKind,
    prob_rank_based,
    prob_score_based,
    prob_topk_binary,
)
from .corpus import TokenizedDocument
from .errors import (
    DegenerateLocalRegionError,
    InvalidParameterError,
    PairOrderError,
)
from .linear import ExplanationModel, fit_local_model
from .perturb import feature_terms, locality_weight, perturb
from .rankers import Query, RankedList, Ranker

RELEVANT = "RELEVANT"
IRRELEVANT = "IRRELEVANT"

DEFAULT_N_SAMPLES = 2000
DEFAULT_KERNEL_WIDTH = 0.25
DEFAULT_REGULARIZATION = 1.0


@dataclass(frozen=True)
class ExplanationParams:
    converter: ConverterKind
    seed: int
    n_samples: int = DEFAULT_N_SAMPLES
    n_words: int = 10
    kernel_width: float = DEFAULT_KERNEL_WIDTH
    regularization: float = DEFAULT_REGULARIZATION

    def __post_init__(self) -> None:
        if not isinstance(self.converter, ConverterKind):
            raise InvalidParameterError(f"bad converter: {self.converter!r}")
        if self.n_samples < 10:
            raise InvalidParameterError(f"n_samples must be >= 10, got {self.n_samples}")
        if self.n_words < 1:
            raise InvalidParameterError(f"n_words must be >= 1, got {self.n_words}")
        if self.kernel_width <= 0:
            raise InvalidParameterError(
                f"kernel_width must be > 0, got {self.kernel_width}"
            )
        if self.regularization <= 0:
            raise InvalidParameterError(
                f"regularization must be > 0, got {self.regularization}"
            )


@dataclass(frozen=True)
class Explanation:
    """Display-ready explanation for one document (or one pair)."""

    doc_id: str
    query: str
    entries: tuple[tuple[str, float, str], ...]
    converter: ConverterKind
    fit_r2: float


@dataclass(frozen=True)
class IntentExplanation:
    """Per-term coefficients summed across every document in the top-k."""

    query: str
    entries: tuple[tuple[str, float], ...]
    docs_aggregated: int
    converter: ConverterKind


def _convert_score(score: float, ranked_list: RankedList, kind: ConverterKind) -> float:
    entries = ranked_list.entries
    if kind is ConverterKind.TOP_K_BINARY:
        return prob_topk_binary(score, entries[-1][1])
    if kind is ConverterKind.SCORE_BASED:
        return prob_score_based(score, entries[0][1])
    return prob_rank_based(score, [s for _, s in entries], len(entries))


def _fit_surrogate(
    ranker: Ranker,
    query: Query,
    doc: TokenizedDocument,
    ranked_list: RankedList,
    params: ExplanationParams,
) -> ExplanationModel:
    """Run the full perturb/score/convert/weight/fit pipeline for one doc."""
    if not ranked_list.entries:
        raise InvalidParameterError("ranked list is empty; nothing anchors the converter")
    terms = feature_terms(doc)
    samples = perturb(doc, params.n_samples, params.seed)
    m = len(terms)
    for sample in samples:
        variant = TokenizedDocument(doc.doc_id, sample.kept_tokens)
        sample.score = ranker.score(query, variant)
        sample.label = _convert_score(sample.score, ranked_list, params.converter)
        sample.weight = locality_weight(m, sample.presence, params.kernel_width)
    return fit_local_model(samples, params.regularization, terms)


def _top_entries(
    coefficients: Mapping[str, float], n_words: int
) -> tuple[tuple[str, float, str], ...]:
    ordered = sorted(coefficients.items(), key=lambda kv: (-abs(kv[1]), kv[0]))
    return tuple(
        (term, weight, RELEVANT if weight > 0 else IRRELEVANT)
        for term, weight in ordered[:n_words]
    )


def explain_document(
    ranker: Ranker,
    query: Query,
    doc: TokenizedDocument,
    ranked_list: RankedList,
    params: ExplanationParams,
) -> Explanation:
    """Why is this document relevant to the query?"""
    vocab_size = len(doc.vocabulary)
    if params.n_words > vocab_size:
        raise InvalidParameterError(
            f"n_words={params.n_words} exceeds the document vocabulary "
            f"size {vocab_size}"
        )
    model = _fit_surrogate(ranker, query, doc, ranked_list, params)
    return Explanation(
        doc_id=doc.doc_id,
        query=query.raw,
        entries=_top_entries(model.coefficients, params.n_words),
        converter=params.converter,
        fit_r2=model.local_fit_r2,
    )


def explain_pair(
    ranker: Ranker,
    query: Query,
    doc_a: TokenizedDocument,
    doc_b_rank: int,
    ranked_list: RankedList,
    params: ExplanationParams,
) -> Explanation:
    """Why is doc_a ranked above the document at position doc_b_rank?

    Same pipeline with the list cut at doc_b's rank, so doc_b becomes the
    threshold document; only the entries pushing doc_a above it (positive
    weights) are kept.
    """
    if doc_b_rank < 1 or doc_b_rank > len(ranked_list.entries):
        raise InvalidParameterError(
            f"doc_b_rank={doc_b_rank} outside the ranked list (k={len(ranked_list.entries)})"
        )
    rank_a = ranked_list.rank_of(doc_a.doc_id)
    if rank_a is None:
        raise PairOrderError(f"document {doc_a.doc_id!r} is not in the ranked list")
    if rank_a >= doc_b_rank:
        raise PairOrderError(
            f"document {doc_a.doc_id!r} (rank {rank_a}) is not ranked above "
            f"rank {doc_b_rank}; the comparison is ill-posed"
        )
    base = explain_document(ranker, query, doc_a, ranked_list.truncated(doc_b_rank), params)
    positive = tuple(e for e in base.entries if e[1] > 0)
    return Explanation(
        doc_id=base.doc_id,
        query=base.query,
        entries=positive,
        converter=base.converter,
        fit_r2=base.fit_r2,
    )


def explain_intent(
    ranker: Ranker,
    query: Query,
    ranked_list: RankedList,
    params: ExplanationParams,
    docs: Mapping[str, TokenizedDocument],
) -> IntentExplanation:
    """What does the ranker think this query means?

    Fits the full (untruncated) surrogate for every listed document and
    sums coefficients per term. The list is put back into canonical order
    (score desc, doc_id asc) before anything else, so permuting the input
    entries cannot change one bit of the result. Documents whose local
    region is flat (or too small to perturb) are skipped.
    """
    if not ranked_list.entries:
        raise InvalidParameterError("ranked list is empty; nothing to aggregate")
    canonical = RankedList(
        query=ranked_list.query,
        entries=tuple(sorted(ranked_list.entries, key=lambda e: (-e[1], e[0]))),
        k=ranked_list.k,
    )
    contributions: dict[str, list[tuple[str, float]]] = {}
    aggregated = 0
    for doc_id, _ in canonical.entries:
        doc = docs[doc_id]
        if len(doc.vocabulary) < 2:
            continue
        try:
            model = _fit_surrogate(ranker, query, doc, canonical, params)
        except DegenerateLocalRegionError:
            continue
        aggregated += 1
        for term, coef in model.coefficients.items():
            contributions.setdefault(term, []).append((doc_id, coef))
    if aggregated == 0:
        raise DegenerateLocalRegionError(
            "every document in the list produced a flat local region; "
            "no intent explanation is possible"
        )
    totals = {
        term: sum(coef for _, coef in sorted(pairs))
        for term, pairs in contributions.items()
    }
    ordered = sorted(totals.items(), key=lambda kv: (-abs(kv[1]), kv[0]))
    return IntentExplanation(
        query=query.raw,
        entries=tuple(ordered[: params.n_words]),
        docs_aggregated=aggregated,
        converter=params.converter,
    )


def explanation_payload(explanation: Explanation, seed: int) -> dict:
    """Wire form shared verbatim by the CLI and the HTTP service."""
    return {
        "doc_id": explanation.doc_id,
        "query": explanation.query,
        "converter": explanation.converter.value,
        "fit_r2": explanation.fit_r2,
        "seed": seed,
        "entries": [
            {"term": term, "weight": weight, "class": label}
            for term, weight, label in explanation.entries
        ],
    }


def intent_payload(intent: IntentExplanation, seed: int) -> dict:
    return {
        "query": intent.query,
        "converter": intent.converter.value,
        "seed": seed,
        "docs_aggregated": intent.docs_aggregated,
        "entries": [
            {"term": term, "weight": weight, "class": RELEVANT if weight > 0 else IRRELEVANT}
            for term, weight in intent.entries
        ],
    }


def payload_to_json(payload: dict) -> bytes:
    """Canonical JSON bytes: compact separators, insertion key order."""
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")).encode("utf-8")

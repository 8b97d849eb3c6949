"""Score-to-probability converters.

A pointwise ranker emits an unbounded score; the local surrogate model
needs a relevance probability. Each converter anchors the mapping on the
current top-k list: its k-th score (topk), its best score (score based) or
the full score vector (rank based).
"""

from __future__ import annotations

import enum
import math

from .errors import InvalidParameterError, ScoreShiftRequiredError, UnknownConverterError


class ConverterKind(enum.Enum):
    TOP_K_BINARY = "topk"
    SCORE_BASED = "score"
    RANK_BASED = "rank"

    @classmethod
    def from_wire(cls, name: str) -> "ConverterKind":
        for kind in cls:
            if kind.value == name:
                return kind
        options = ", ".join(k.value for k in cls)
        raise UnknownConverterError(
            f"unknown converter {name!r}; available converters: {options}"
        )


def prob_topk_binary(score: float, threshold_score: float) -> float:
    """1 when the score strictly beats the k-th document's score, else 0."""
    _require_finite(score, threshold_score)
    return 1.0 if score > threshold_score else 0.0


def prob_score_based(score: float, top_score: float) -> float:
    """Relevance as the score's fraction of the top score, clamped to [0,1].

    Scores at or above the top score map to 1. The ratio form only makes
    sense for a positive top score; otherwise the caller must shift its
    scores into positive territory first.
    """
    _require_finite(score, top_score)
    if top_score <= 0:
        raise ScoreShiftRequiredError(
            f"score-based conversion needs top score > 0, got {top_score}; "
            "shift all ranker scores by a positive constant and retry"
        )
    if score >= top_score:
        return 1.0
    return max(0.0, 1.0 - (top_score - score) / top_score)


def prob_rank_based(score: float, topk_scores: list[float], k: int) -> float:
    """Relevance from the rank the score would take inside the top-k list.

    At or below the k-th score the probability is 0; otherwise the score is
    ranked above every equal-or-lower entry and mapped to 1 - rank/k, so the
    output is always one of {0} | {1 - r/k : r = 1..k-1}.
    """
    _require_finite(score, *topk_scores)
    if k < 1 or len(topk_scores) != k:
        raise InvalidParameterError(
            f"topk_scores must hold exactly k={k} entries, got {len(topk_scores)}"
        )
    if any(topk_scores[i] < topk_scores[i + 1] for i in range(k - 1)):
        raise InvalidParameterError("topk_scores must be sorted descending")
    if score <= topk_scores[k - 1]:
        return 0.0
    rank = 1 + sum(1 for s in topk_scores if s > score)
    return 1.0 - rank / k


def _require_finite(*values: float) -> None:
    for value in values:
        if not math.isfinite(value):
            raise InvalidParameterError(f"score must be finite, got {value}")

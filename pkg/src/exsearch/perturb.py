"""Word-removal perturbation and the locality kernel.

The interpretable feature space of a document is its sorted unique-term
list; a perturbed sample switches a random subset of those terms off (all
occurrences removed, order otherwise preserved). Samples close to the
intact document get more weight in the surrogate fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import TokenizedDocument
from .errors import InvalidParameterError


@dataclass
class PerturbedSample:
    """One word-removal variant: filled in stages by the pipeline."""

    presence: np.ndarray
    kept_tokens: list[str]
    score: float | None = None
    label: float | None = None
    weight: float | None = None


def feature_terms(doc: TokenizedDocument) -> tuple[str, ...]:
    """Canonical feature order shared by presence vectors and coefficients."""
    return tuple(sorted(doc.vocabulary))


def perturb(doc: TokenizedDocument, n_samples: int, seed: int) -> list[PerturbedSample]:
    """Draw ``n_samples`` term-removal variants of ``doc``.

    Each sample drops z ~ Uniform{1..m-1} distinct terms chosen uniformly,
    so the intact document and the empty document never occur. Fixed seed,
    fixed output.
    """
    terms = feature_terms(doc)
    m = len(terms)
    if m < 2:
        raise InvalidParameterError(
            f"document {doc.doc_id!r} has {m} unique term(s); need at least 2 to perturb"
        )
    if n_samples < 1:
        raise InvalidParameterError(f"n_samples must be >= 1, got {n_samples}")

    rng = np.random.default_rng(seed)
    drop_counts = rng.integers(1, m, size=n_samples)
    # Row-wise argsort of iid uniforms = one uniform permutation per sample;
    # the first z entries are a uniform z-subset.
    orders = np.argsort(rng.random((n_samples, m)), axis=1)

    samples: list[PerturbedSample] = []
    for i in range(n_samples):
        z = int(drop_counts[i])
        dropped_idx = orders[i, :z]
        presence = np.ones(m, dtype=np.int8)
        presence[dropped_idx] = 0
        dropped = {terms[j] for j in dropped_idx}
        kept_tokens = [t for t in doc.tokens if t not in dropped]
        samples.append(PerturbedSample(presence=presence, kept_tokens=kept_tokens))
    return samples


def locality_weight(
    original_vocab_size: int,
    presence: np.ndarray,
    kernel_width: float = 0.25,
) -> float:
    """Exponential kernel over the cosine distance to the intact document.

    For binary vectors the cosine distance to the all-ones vector reduces
    to 1 - sqrt(kept/m), so keeping everything gives weight 1 and weights
    shrink monotonically as more terms drop.
    """
    if kernel_width <= 0:
        raise InvalidParameterError(f"kernel_width must be > 0, got {kernel_width}")
    kept = int(np.sum(presence))
    if kept < 1:
        raise InvalidParameterError("presence vector has no kept terms")
    distance = 1.0 - math.sqrt(kept / original_vocab_size)
    return math.exp(-(distance**2) / kernel_width**2)

"""exsearch: rank documents with pluggable pointwise rankers and explain
each ranking with a local surrogate model over the document's own words."""

from importlib import resources
from pathlib import Path

from .converters import (
    ConverterKind,
    prob_rank_based,
    prob_score_based,
    prob_topk_binary,
)
from .corpus import Corpus, Document, TokenizedDocument, load_corpus, tokenize
from .engine import SearchEngine
from .explain import (
    Explanation,
    ExplanationParams,
    IntentExplanation,
    explain_document,
    explain_intent,
    explain_pair,
)
from .index import Index, build_index
from .linear import ExplanationModel, fit_local_model
from .perturb import PerturbedSample, locality_weight, perturb
from .rankers import (
    BM25Ranker,
    EmbeddingRanker,
    EmbeddingTable,
    Query,
    RankedList,
    bm25_retrieve,
    load_embeddings,
)

__version__ = "0.1.0"


def bundled_corpus_path() -> Path:
    """Path of the demo corpus shipped with the package."""
    return Path(str(resources.files("exsearch") / "data" / "corpus.jsonl"))


def bundled_embeddings_path() -> Path:
    """Path of the demo word-embedding table shipped with the package."""
    return Path(str(resources.files("exsearch") / "data" / "embeddings.txt"))

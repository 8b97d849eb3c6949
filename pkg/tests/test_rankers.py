"""Ranker contract, embedding scorer, embedding file parsing, ranked lists."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from exsearch.corpus import Corpus, Document, TokenizedDocument
from exsearch.errors import CorpusFormatError, EmptyQueryError, UnknownRankerError
from exsearch.index import build_index
from exsearch.rankers import (
    BM25Ranker,
    EmbeddingRanker,
    EmbeddingTable,
    Query,
    get_ranker,
    load_embeddings,
    make_registry,
    rank_documents,
)


def _table(**vectors) -> EmbeddingTable:
    arrays = {t: np.asarray(v, dtype=float) for t, v in vectors.items()}
    dim = len(next(iter(arrays.values())))
    return EmbeddingTable(dimension=dim, vectors=arrays)


def _doc(doc_id, tokens):
    return TokenizedDocument(doc_id, tokens)


class TestRankerContract:
    def test_bm25_zero_when_no_query_term_matches(self):
        index = build_index(Corpus([Document("d0", "", "alpha beta")]))
        ranker = BM25Ranker(index)
        assert ranker.score(Query.from_raw("gamma"), _doc("d0", ["alpha", "beta"])) == 0.0

    def test_scoring_is_deterministic(self):
        index = build_index(Corpus([Document("d0", "", "alpha beta alpha")]))
        ranker = BM25Ranker(index)
        query = Query.from_raw("alpha")
        doc = _doc("d0", ["alpha", "beta", "alpha"])
        assert ranker.score(query, doc) == ranker.score(query, doc)

    def test_empty_query_rejected(self):
        index = build_index(Corpus([Document("d0", "", "alpha")]))
        with pytest.raises(EmptyQueryError):
            BM25Ranker(index).score(Query.from_raw("!!"), _doc("d0", ["alpha"]))

    def test_registry_lists_available_on_unknown(self):
        index = build_index(Corpus([Document("d0", "", "alpha")]))
        registry = make_registry(index, _table(alpha=[1.0, 0.0]))
        with pytest.raises(UnknownRankerError, match="bm25"):
            get_ranker(registry, "drmm2")
        assert get_ranker(registry, "embed").name == "embed"

    def test_embed_absent_without_embedding_table(self):
        index = build_index(Corpus([Document("d0", "", "alpha")]))
        registry = make_registry(index)
        assert sorted(registry) == ["bm25"]
        with pytest.raises(UnknownRankerError, match="bm25"):
            get_ranker(registry, "embed")


class TestEmbeddingScore:
    def test_identical_single_term_scores_one(self):
        ranker = EmbeddingRanker(_table(cat=[0.3, 0.4]))
        score = ranker.score(Query.from_raw("cat"), _doc("d", ["cat"]))
        assert score == pytest.approx(1.0, abs=1e-12)

    def test_doc_equal_to_query_text_scores_one(self):
        ranker = EmbeddingRanker(_table(rail=[0.9, 0.3], strikes=[0.3, 0.9]))
        query = Query.from_raw("rail strikes")
        score = ranker.score(query, _doc("d", ["rail", "strikes"]))
        assert score == pytest.approx(1.0, abs=1e-12)

    def test_doc_without_vocabulary_scores_zero(self):
        ranker = EmbeddingRanker(_table(cat=[1.0, 0.0]))
        assert ranker.score(Query.from_raw("cat"), _doc("d", ["dog", "fox"])) == 0.0

    def test_hand_computed_centroid_cosine(self):
        # doc centroid = mean((1,0),(0,1)) = (0.5,0.5); cos with (1,0) = 1/sqrt(2)
        ranker = EmbeddingRanker(_table(a=[1.0, 0.0], b=[0.0, 1.0]))
        score = ranker.score(Query.from_raw("a"), _doc("d", ["a", "b"]))
        assert score == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)

    def test_query_side_out_of_vocabulary_scores_zero(self):
        ranker = EmbeddingRanker(_table(cat=[1.0, 0.0]))
        assert ranker.score(Query.from_raw("unseen"), _doc("d", ["cat"])) == 0.0

    @given(
        st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=6),
        st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=6),
    )
    def test_symmetry_under_swapping_sides(self, left, right):
        table = _table(
            a=[1.0, 0.2, 0.0], b=[0.0, 1.0, 0.3], c=[0.5, 0.5, 0.1], d=[0.2, 0.0, 1.0]
        )
        ranker = EmbeddingRanker(table)
        forward = ranker.score(
            Query(raw=" ".join(left), terms=tuple(left)), _doc("r", right)
        )
        backward = ranker.score(
            Query(raw=" ".join(right), terms=tuple(right)), _doc("l", left)
        )
        assert forward == pytest.approx(backward, abs=1e-12)

    @given(
        st.lists(st.sampled_from(["a", "b", "c", "neg"]), min_size=1, max_size=8),
        st.lists(st.sampled_from(["a", "b", "c", "neg"]), min_size=1, max_size=8),
    )
    def test_score_bounded(self, q_terms, d_tokens):
        table = _table(a=[1.0, 0.0], b=[0.0, 1.0], c=[0.7, 0.7], neg=[-1.0, 0.0])
        ranker = EmbeddingRanker(table)
        score = ranker.score(Query(raw="q", terms=tuple(q_terms)), _doc("d", d_tokens))
        assert -1.0 <= score <= 1.0


class TestLoadEmbeddings:
    def test_parses_simple_file(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("cat 1.0 0.0\ndog 0.0 1.0\n")
        table = load_embeddings(path)
        assert table.dimension == 2
        assert len(table) == 2
        assert list(table.vectors["dog"]) == [0.0, 1.0]

    def test_dimension_mismatch_names_line(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("cat 1.0 0.0\ndog 0.0 1.0 0.5\n")
        with pytest.raises(CorpusFormatError, match=r":2"):
            load_embeddings(path)

    def test_non_numeric_component_names_line(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("cat 1.0 x\n")
        with pytest.raises(CorpusFormatError, match=r":1"):
            load_embeddings(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("")
        with pytest.raises(CorpusFormatError, match="empty"):
            load_embeddings(path)

    def test_glove_style_fixture(self, tmp_path):
        # 5 words x 50 dims, constructed by hand
        words = ["alpha", "beta", "gamma", "delta", "epsilon"]
        lines = [
            w + " " + " ".join(str((i + j) % 7 / 10.0) for j in range(50))
            for i, w in enumerate(words)
        ]
        path = tmp_path / "glove.txt"
        path.write_text("\n".join(lines) + "\n")
        table = load_embeddings(path)
        assert table.dimension == 50
        assert len(table) == 5


class TestRankDocuments:
    def _docs(self):
        return [
            _doc("a", ["rail", "strikes", "rail"]),
            _doc("b", ["rail", "journey"]),
            _doc("c", ["cooking", "pasta"]),
            _doc("d", ["strikes", "rail"]),
        ]

    def test_order_is_pure_function_of_scores(self, planted_ranker):
        query = Query.from_raw("rail strikes")
        docs = self._docs()
        forward = rank_documents(planted_ranker, query, docs, 4)
        backward = rank_documents(planted_ranker, query, list(reversed(docs)), 4)
        assert forward == backward

    def test_ties_break_by_doc_id(self, planted_ranker):
        query = Query.from_raw("rail strikes")
        ranked = rank_documents(planted_ranker, query, self._docs(), 4)
        assert ranked.doc_ids() == ["a", "d", "b", "c"]

    def test_truncates_to_k(self, planted_ranker):
        query = Query.from_raw("rail strikes")
        ranked = rank_documents(planted_ranker, query, self._docs(), 2)
        assert len(ranked.entries) == 2
        assert ranked.k == 2

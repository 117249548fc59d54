import math
import random

import pytest

from stoplab.index import build_index
from stoplab.ranking import (
    BM25Params,
    DirichletParams,
    Query,
    TFIDFParams,
    score_bm25,
    score_kl_dirichlet,
    score_tfidf,
)
from stoplab.stoplists import Stoplist

import oracles

TOY_DOCS = [("D1", "a b"), ("D2", "b c"), ("D3", "c c")]


def toy_index():
    return build_index(TOY_DOCS)


def engine_scores(run):
    return {e.docno: e.score for e in run.entries}


def engine_ranking(run):
    return [e.docno for e in run.entries]


class TestParams:
    def test_defaults(self):
        assert (BM25Params().k1, BM25Params().b, BM25Params().k3) == (1.2, 0.75, 7.0)
        assert (TFIDFParams().k1, TFIDFParams().b) == (1.0, 0.3)
        assert DirichletParams().mu == 2000.0

    def test_validation(self):
        with pytest.raises(ValueError):
            BM25Params(b=1.5)
        with pytest.raises(ValueError):
            BM25Params(k1=-1)
        with pytest.raises(ValueError):
            DirichletParams(mu=0)
        with pytest.raises(ValueError):
            DirichletParams(mu=-5)


class TestQuery:
    def test_from_text_counts_terms(self):
        q = Query.from_text("1", "a b a")
        assert q.terms == {"a": 2, "b": 1}

    def test_from_text_applies_stoplist(self):
        q = Query.from_text("1", "a b", stoplist=Stoplist("s", frozenset({"b"})))
        assert q.terms == {"a": 1}

    def test_from_text_normalizes(self):
        q = Query.from_text("1", "أخبار")
        assert "اخبار" in q.terms


class TestBM25:
    def test_toy_single_term(self):
        run = score_bm25(toy_index(), Query("1", {"a": 1}))
        assert engine_ranking(run) == ["D1"]
        assert run.entries[0].score == pytest.approx(math.log(2.5 / 1.5), rel=1e-12)
        assert run.entries[0].rank == 1

    def test_vacuous_query_gives_empty_run(self):
        run = score_bm25(toy_index(), Query("1", {}))
        assert run.entries == []
        run = score_bm25(toy_index(), Query("1", {"nosuch": 1}))
        assert run.entries == []

    def test_top_k_truncates_to_best(self):
        idx = toy_index()
        full = score_bm25(idx, Query("1", {"c": 1}))
        top1 = score_bm25(idx, Query("1", {"c": 1}), top_k=1)
        assert [e.docno for e in top1.entries] == [full.entries[0].docno]
        assert top1.entries[0].rank == 1

    def test_negative_idf_not_clamped(self):
        # term in 3 of 4 docs: idf = ln(1.5/3.5) < 0
        idx = build_index([("D1", "x"), ("D2", "x"), ("D3", "x"), ("D4", "y")])
        run = score_bm25(idx, Query("1", {"x": 1}))
        assert all(e.score < 0 for e in run.entries)

    def test_tie_break_by_docno(self):
        idx = build_index([("B", "x"), ("A", "x"), ("C", "x")])
        run = score_bm25(idx, Query("1", {"x": 1}))
        assert engine_ranking(run) == ["A", "B", "C"]
        assert [e.rank for e in run.entries] == [1, 2, 3]


class TestTFIDF:
    def test_toy_single_term(self):
        run = score_tfidf(toy_index(), Query("1", {"a": 1}))
        assert engine_ranking(run) == ["D1"]
        assert run.entries[0].score == pytest.approx(0.5 * math.log(3) ** 2, rel=1e-12)

    def test_term_in_every_document_contributes_zero(self):
        idx = build_index([("D1", "x a"), ("D2", "x b")])
        run = score_tfidf(idx, Query("1", {"x": 1}))
        assert all(e.score == 0.0 for e in run.entries)
        assert len(run.entries) == 2  # still candidates

    def test_qtf_linearity(self):
        idx = toy_index()
        one = engine_scores(score_tfidf(idx, Query("1", {"a": 1})))
        two = engine_scores(score_tfidf(idx, Query("1", {"a": 2})))
        for docno, s in one.items():
            assert two[docno] == pytest.approx(2 * s, rel=1e-12)


class TestKLDirichlet:
    def test_toy_single_term(self):
        run = score_kl_dirichlet(toy_index(), Query("1", {"a": 1}))
        scores = engine_scores(run)
        expected_d1 = math.log(1 + 1 / (2000 / 6)) + math.log(2000 / 2002)
        assert scores["D1"] == pytest.approx(expected_d1, rel=1e-12)
        assert scores["D1"] == pytest.approx(0.0020, abs=5e-5)

    def test_all_documents_are_candidates(self):
        run = score_kl_dirichlet(toy_index(), Query("1", {"a": 1}))
        assert len(run.entries) == 3

    def test_unindexed_terms_dropped_with_warning(self, caplog):
        with caplog.at_level("WARNING"):
            run = score_kl_dirichlet(toy_index(), Query("1", {"a": 1, "zz": 2}))
        assert "zz" in caplog.text
        assert len(run.entries) == 3

    def test_query_of_only_unindexed_terms_gives_empty_run(self):
        run = score_kl_dirichlet(toy_index(), Query("1", {"zz": 1}))
        assert run.entries == []

    def test_identical_tf_and_dl_score_identically(self):
        idx = build_index([("D1", "a b"), ("D2", "a b"), ("D3", "c c c")])
        scores = engine_scores(score_kl_dirichlet(idx, Query("1", {"a": 1})))
        assert scores["D1"] == scores["D2"]

    def test_no_match_ties_break_by_docno(self):
        idx = build_index([("D3", "b b"), ("D2", "b b"), ("D1", "a a")])
        run = score_kl_dirichlet(idx, Query("1", {"a": 1}))
        assert engine_ranking(run) == ["D1", "D2", "D3"]


class TestOracleAgreement:
    """Engine output versus direct term-document-matrix evaluation."""

    def check_corpus(self, rng):
        token_docs = oracles.random_corpus(rng, max_docs=60, max_vocab=30)
        docs = [(d, " ".join(t)) for d, t in token_docs]
        idx = build_index(docs)
        q = oracles.random_query(rng, token_docs)
        query = Query("1", q)
        cases = [
            (score_bm25(idx, query, top_k=len(docs) + 1), oracles.bm25_scores(token_docs, q)),
            (score_tfidf(idx, query, top_k=len(docs) + 1), oracles.tfidf_scores(token_docs, q)),
            (
                score_kl_dirichlet(idx, query, top_k=len(docs) + 1),
                oracles.kl_rank_equiv_scores(token_docs, q),
            ),
        ]
        for run, expected in cases:
            got = engine_scores(run)
            assert set(got) == set(expected)
            for docno, s in expected.items():
                assert got[docno] == pytest.approx(s, rel=1e-9, abs=1e-12)
            assert engine_ranking(run) == oracles.ranking_of(expected)

    def test_small_random_corpora(self):
        rng = random.Random(31)
        for _ in range(25):
            self.check_corpus(rng)

    def test_kl_matches_full_likelihood_ordering(self):
        rng = random.Random(32)
        for _ in range(25):
            token_docs = oracles.random_corpus(rng, max_docs=60, max_vocab=30)
            docs = [(d, " ".join(t)) for d, t in token_docs]
            idx = build_index(docs)
            q = oracles.random_query(rng, token_docs)
            run = score_kl_dirichlet(idx, Query("1", q), top_k=len(docs) + 1)
            expected = oracles.kl_loglikelihood_scores(token_docs, q)
            assert engine_ranking(run) == oracles.ranking_of(expected)


class TestRankingProperties:
    def test_single_term_ranking_invariant_under_qtf(self):
        rng = random.Random(33)
        for _ in range(10):
            token_docs = oracles.random_corpus(rng, max_docs=40, max_vocab=20)
            docs = [(d, " ".join(t)) for d, t in token_docs]
            idx = build_index(docs)
            vocab = sorted(idx.ctf)
            if not vocab:
                continue
            term = rng.choice(vocab)
            for scorer in (score_bm25, score_tfidf, score_kl_dirichlet):
                base = engine_ranking(scorer(idx, Query("1", {term: 1}), top_k=idx.N + 1))
                scaled = engine_ranking(scorer(idx, Query("1", {term: 3}), top_k=idx.N + 1))
                assert base == scaled

    def test_determinism(self):
        rng = random.Random(34)
        token_docs = oracles.random_corpus(rng, max_docs=50, max_vocab=25)
        docs = [(d, " ".join(t)) for d, t in token_docs]
        idx1 = build_index(docs, workers=1)
        idx2 = build_index(docs, workers=4)
        q = Query("1", oracles.random_query(rng, token_docs))
        for scorer in (score_bm25, score_tfidf, score_kl_dirichlet):
            assert scorer(idx1, q) == scorer(idx2, q)

    def test_run_invariants(self):
        rng = random.Random(35)
        for _ in range(10):
            token_docs = oracles.random_corpus(rng, max_docs=50, max_vocab=10)
            docs = [(d, " ".join(t)) for d, t in token_docs]
            idx = build_index(docs)
            q = Query("1", oracles.random_query(rng, token_docs))
            for scorer in (score_bm25, score_tfidf, score_kl_dirichlet):
                run = scorer(idx, q, top_k=7)
                assert len(run.entries) <= 7
                assert [e.rank for e in run.entries] == list(range(1, len(run.entries) + 1))
                for prev, cur in zip(run.entries, run.entries[1:]):
                    assert prev.score > cur.score or (
                        prev.score == cur.score and prev.docno < cur.docno
                    )

    def test_top_k_must_be_positive(self):
        for scorer in (score_bm25, score_tfidf, score_kl_dirichlet):
            with pytest.raises(ValueError):
                scorer(toy_index(), Query("1", {"a": 1}), top_k=0)

import gzip
import io
import random

import pytest

from stoplab.errors import ParseError
from stoplab.index import Index, build_index, parse_trec_documents
from stoplab.stoplists import Stoplist

from oracles import random_corpus

TOY_DOCS = [("D1", "a b"), ("D2", "b c"), ("D3", "c c")]


def serialized(index: Index) -> bytes:
    buf = io.BytesIO()
    index.save(buf)
    return buf.getvalue()


class TestParseTrecDocuments:
    def test_minimal_document(self):
        text = "<DOC>\n<DOCNO> D1 </DOCNO>\n<TEXT>\nقال\n</TEXT>\n</DOC>\n"
        docs = list(parse_trec_documents(text))
        assert len(docs) == 1
        assert docs[0][0] == "D1"
        assert docs[0][1].strip() == "قال"

    def test_empty_stream(self):
        assert list(parse_trec_documents("")) == []

    def test_two_documents_in_order(self):
        text = (
            "<DOC><DOCNO>A</DOCNO><TEXT>one</TEXT></DOC>"
            "<DOC><DOCNO>B</DOCNO><TEXT>two</TEXT></DOC>"
        )
        assert [d for d, _ in parse_trec_documents(text)] == ["A", "B"]

    def test_multiple_text_regions_concatenated(self):
        text = "<DOC><DOCNO>A</DOCNO><TEXT>x y</TEXT><TEXT>z</TEXT></DOC>"
        [(_, body)] = parse_trec_documents(text)
        assert body.split() == ["x", "y", "z"]

    def test_inline_tags_inside_text_dropped(self):
        text = "<DOC><DOCNO>A</DOCNO><TEXT><P>x</P> y</TEXT></DOC>"
        [(_, body)] = parse_trec_documents(text)
        assert body.split() == ["x", "y"]

    def test_other_regions_ignored(self):
        text = "<DOC><DOCNO>A</DOCNO><HEADER>skip</HEADER><TEXT>x</TEXT></DOC>"
        [(_, body)] = parse_trec_documents(text)
        assert body.split() == ["x"]

    def test_missing_docno_reports_offset(self):
        text = "<DOC><TEXT>x</TEXT></DOC>"
        with pytest.raises(ParseError, match="offset 0"):
            list(parse_trec_documents(text))

    def test_unterminated_block(self):
        with pytest.raises(ParseError, match="unterminated"):
            list(parse_trec_documents("<DOC><DOCNO>A</DOCNO><TEXT>x</TEXT>"))


class TestBuildIndex:
    def test_toy_counts(self):
        idx = build_index(TOY_DOCS)
        assert idx.N == 3
        assert idx.avgdl == 2.0
        assert idx.df("a") == 1
        assert idx.df("b") == 2
        assert idx.ctf["c"] == 3
        assert idx.total_tokens == 6

    def test_toy_with_stoplist(self):
        idx = build_index(TOY_DOCS, stoplist=Stoplist("x", frozenset({"b"})))
        assert idx.doc_lengths == [1, 1, 2]
        assert idx.total_tokens == 4
        assert "b" not in idx.postings
        assert idx.stopwords_removed == 2

    def test_empty_corpus(self):
        idx = build_index([])
        assert idx.N == 0
        assert idx.postings == {}
        assert idx.avgdl == 0.0

    def test_duplicate_docno_rejected(self):
        with pytest.raises(ParseError, match="D1"):
            build_index([("D1", "a"), ("D1", "b")])

    def test_empty_documents_kept(self):
        idx = build_index([("D1", ""), ("D2", "a")])
        assert idx.N == 2
        assert idx.doc_lengths == [0, 1]

    def test_normalization_applied(self):
        idx = build_index([("D1", "أخبار")])
        assert "اخبار" in idx.postings

    def test_invariants_on_random_builds(self):
        rng = random.Random(21)
        for _ in range(30):
            docs = [(d, " ".join(t)) for d, t in random_corpus(rng, max_docs=60)]
            idx = build_index(docs)
            idx.check()
            assert sum(idx.ctf.values()) == idx.total_tokens == sum(idx.doc_lengths)
            for term, plist in idx.postings.items():
                assert len(plist) <= idx.N
                assert len(plist) <= idx.ctf[term]

    def test_stoplist_removes_exactly_the_stopword_mass(self):
        rng = random.Random(22)
        for _ in range(20):
            docs = [(d, " ".join(t)) for d, t in random_corpus(rng, max_docs=40)]
            plain = build_index(docs)
            vocab = sorted(plain.ctf)
            chosen = frozenset(rng.sample(vocab, min(3, len(vocab))))
            filtered = build_index(docs, stoplist=Stoplist("s", chosen))
            removed = sum(plain.ctf[w] for w in chosen)
            assert filtered.total_tokens == plain.total_tokens - removed
            assert filtered.stopwords_removed == removed


class TestSerialization:
    def test_round_trip_preserves_everything(self):
        idx = build_index(TOY_DOCS, stoplist=Stoplist("x", frozenset({"b"})))
        loaded = Index.load(io.BytesIO(serialized(idx)))
        assert loaded.docnos == idx.docnos
        assert loaded.doc_lengths == idx.doc_lengths
        assert loaded.postings == idx.postings
        assert loaded.ctf == idx.ctf
        assert loaded.total_tokens == idx.total_tokens
        assert loaded.stoplist == idx.stoplist
        assert loaded.strip_marks == idx.strip_marks
        assert loaded.stopwords_removed == idx.stopwords_removed

    def test_serialize_deserialize_serialize_identical(self):
        rng = random.Random(23)
        for _ in range(10):
            docs = [(d, " ".join(t)) for d, t in random_corpus(rng, max_docs=40)]
            idx = build_index(docs)
            blob = serialized(idx)
            assert serialized(Index.load(io.BytesIO(blob))) == blob

    def test_build_determinism(self):
        rng = random.Random(24)
        docs = [(d, " ".join(t)) for d, t in random_corpus(rng, max_docs=80)]
        assert serialized(build_index(docs)) == serialized(build_index(docs))

    def test_worker_count_does_not_change_bytes(self):
        rng = random.Random(25)
        docs = [(d, " ".join(t)) for d, t in random_corpus(rng, max_docs=120)]
        one = serialized(build_index(docs, workers=1))
        many = serialized(build_index(docs, workers=8))
        assert one == many

    def test_arabic_docnos_and_terms_survive(self):
        idx = build_index([("وثيقة-1", "قال")])
        loaded = Index.load(io.BytesIO(serialized(idx)))
        assert loaded.docnos == ["وثيقة-1"]
        assert "قال" in loaded.postings

    def test_bad_magic_rejected(self):
        with pytest.raises(ParseError, match="magic"):
            Index.load(io.BytesIO(b"NOTANIDX"))

    def test_truncated_file_rejected(self):
        blob = serialized(build_index(TOY_DOCS))
        with pytest.raises(ParseError, match="truncated"):
            Index.load(io.BytesIO(blob[: len(blob) - 4]))

    def test_file_path_round_trip(self, tmp_path):
        idx = build_index(TOY_DOCS)
        path = tmp_path / "toy.idx"
        idx.save(path)
        assert Index.load(path).docnos == idx.docnos


class TestGzipInput:
    def test_corpus_may_be_gzipped(self, tmp_path):
        raw = "<DOC><DOCNO>A</DOCNO><TEXT>x y</TEXT></DOC>"
        path = tmp_path / "c.sgml.gz"
        with gzip.open(path, "wb") as f:
            f.write(raw.encode("utf-8"))
        with gzip.open(path, "rb") as f:
            docs = list(parse_trec_documents(f.read().decode("utf-8")))
        assert docs[0][0] == "A"

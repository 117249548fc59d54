"""The three ranking models: TF*IDF, Okapi BM25, and KL-divergence with
Dirichlet-smoothed document language models.

Scoring formulas (natural log everywhere; the base affects scale, never
order):

BM25 (k1=1.2, b=0.75, k3=7):

    score(d) = sum over query terms t of
        ln((N - df + 0.5) / (df + 0.5))               # idf
        * ((k1 + 1) * tf) / (K + tf)                  # doc tf saturation
        * ((k3 + 1) * qtf) / (k3 + qtf)               # query tf saturation
    with K = k1 * ((1 - b) + b * dl / avgdl)

    The idf is deliberately NOT clamped at zero: terms appearing in more
    than half the documents score negatively, which is exactly the regime
    stoplist experiments probe.

TF*IDF (k1=1, b=0.3), BM25-style tf on the document side:

    score(d) = sum over t of [bm25tf(tf, dl) * idf] * [qtf * idf]
    with bm25tf(tf, dl) = (k1 * tf) / (tf + k1 * ((1 - b) + b * dl / avgdl))
    and idf = ln(N / df)

KL / query likelihood with Dirichlet prior (mu=2000), in rank-equivalent
form:

    score(d) = sum over t of qtf * ln(1 + tf / (mu * p(t|C)))
               + |q| * ln(mu / (mu + dl))
    with p(t|C) = ctf / total_tokens and |q| = sum of qtf

    Every document is a candidate (the length term discriminates even at
    tf = 0).  Query terms absent from the collection are dropped with a
    warning, since p(t|C) = 0 has no likelihood reading.

For BM25 and TF*IDF only documents containing at least one query term are
candidates.  Entries are ordered by descending score, ties broken by docno
ascending, ranks numbered from 1; identical inputs always produce identical
runs.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .index import Index
from .stoplists import Stoplist
from .textpipe import normalize, tokenize

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 1000


@dataclass(frozen=True)
class BM25Params:
    k1: float = 1.2
    b: float = 0.75
    k3: float = 7.0

    def __post_init__(self):
        if self.k1 < 0 or self.k3 < 0 or not 0.0 <= self.b <= 1.0:
            raise ValueError("require k1 >= 0, 0 <= b <= 1, k3 >= 0")


@dataclass(frozen=True)
class TFIDFParams:
    k1: float = 1.0
    b: float = 0.3

    def __post_init__(self):
        if self.k1 < 0 or not 0.0 <= self.b <= 1.0:
            raise ValueError("require k1 >= 0, 0 <= b <= 1")


@dataclass(frozen=True)
class DirichletParams:
    mu: float = 2000.0

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")


@dataclass
class Query:
    """A query as a bag of normalized, stoplist-filtered terms."""

    qid: str
    terms: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_text(
        cls,
        qid: str,
        text: str,
        stoplist: Stoplist | None = None,
        strip_marks: bool = True,
    ) -> "Query":
        """Build a query through the same pipeline documents go through."""
        tokens = tokenize(normalize(text, strip_marks=strip_marks))
        if stoplist is not None:
            tokens = stoplist.filter(tokens)
        return cls(qid=qid, terms=dict(Counter(tokens)))


class RunEntry(NamedTuple):
    docno: str
    score: float
    rank: int


@dataclass
class RankedRun:
    """Ranked result list for one query, tagged with its technique code."""

    qid: str
    entries: list[RunEntry]
    tag: str


def _finish(qid: str, scored: list[tuple[str, float]], top_k: int, tag: str) -> RankedRun:
    scored.sort(key=lambda item: (-item[1], item[0]))
    entries = [
        RunEntry(docno, score, rank)
        for rank, (docno, score) in enumerate(scored[:top_k], start=1)
    ]
    return RankedRun(qid=qid, entries=entries, tag=tag)


def score_bm25(
    index: Index,
    query: Query,
    params: BM25Params = BM25Params(),
    top_k: int = DEFAULT_TOP_K,
    tag: str = "BM25",
) -> RankedRun:
    """Rank with Okapi BM25.  A query with no indexed terms yields an
    empty run."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    n = index.N
    avgdl = index.avgdl
    k1, b, k3 = params.k1, params.b, params.k3
    scores: dict[int, float] = {}
    for term in sorted(query.terms):
        plist = index.postings.get(term)
        if not plist:
            continue
        qtf = query.terms[term]
        df = len(plist)
        idf = math.log((n - df + 0.5) / (df + 0.5))
        qpart = (k3 + 1.0) * qtf / (k3 + qtf)
        for ordinal, tf in plist:
            big_k = k1 * ((1.0 - b) + b * index.doc_lengths[ordinal] / avgdl)
            contribution = idf * ((k1 + 1.0) * tf / (big_k + tf)) * qpart
            scores[ordinal] = scores.get(ordinal, 0.0) + contribution
    scored = [(index.docnos[o], s) for o, s in scores.items()]
    return _finish(query.qid, scored, top_k, tag)


def score_tfidf(
    index: Index,
    query: Query,
    params: TFIDFParams = TFIDFParams(),
    top_k: int = DEFAULT_TOP_K,
    tag: str = "TFIDF",
) -> RankedRun:
    """Rank with TF*IDF using BM25-style document tf and raw qtf * idf on
    the query side."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    n = index.N
    avgdl = index.avgdl
    k1, b = params.k1, params.b
    scores: dict[int, float] = {}
    for term in sorted(query.terms):
        plist = index.postings.get(term)
        if not plist:
            continue
        qtf = query.terms[term]
        df = len(plist)
        idf = math.log(n / df)
        qweight = qtf * idf
        for ordinal, tf in plist:
            denom = tf + k1 * ((1.0 - b) + b * index.doc_lengths[ordinal] / avgdl)
            contribution = (k1 * tf / denom) * idf * qweight
            scores[ordinal] = scores.get(ordinal, 0.0) + contribution
    scored = [(index.docnos[o], s) for o, s in scores.items()]
    return _finish(query.qid, scored, top_k, tag)


def score_kl_dirichlet(
    index: Index,
    query: Query,
    params: DirichletParams = DirichletParams(),
    top_k: int = DEFAULT_TOP_K,
    tag: str = "KL",
) -> RankedRun:
    """Rank by Dirichlet-smoothed query likelihood (rank-equivalent form).

    All documents are candidates.  The ordering equals exhaustive scoring
    of ln prod p(t|d)^qtf with p(t|d) = (tf + mu*p(t|C)) / (dl + mu).
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    mu = params.mu
    terms: dict[str, int] = {}
    for term, qtf in query.terms.items():
        if index.ctf.get(term, 0) > 0:
            terms[term] = qtf
        else:
            logger.warning(
                "query %s: term %r absent from collection, dropped", query.qid, term
            )
    if not terms:
        return RankedRun(qid=query.qid, entries=[], tag=tag)
    qlen = sum(terms.values())
    scores = [qlen * math.log(mu / (mu + dl)) for dl in index.doc_lengths]
    for term in sorted(terms):
        qtf = terms[term]
        p_coll = index.ctf[term] / index.total_tokens
        for ordinal, tf in index.postings[term]:
            scores[ordinal] += qtf * math.log(1.0 + tf / (mu * p_coll))
    scored = list(zip(index.docnos, scores))
    return _finish(query.qid, scored, top_k, tag)


SCORERS = {
    "TFIDF": score_tfidf,
    "BM25": score_bm25,
    "KL": score_kl_dirichlet,
}

"""TREC-style evaluation of ranked runs against relevance judgments.

Per query: average precision, 11-point interpolated precision, precision
at standard document cutoffs, R-precision (precision at rank R, the exact
breakeven point), and the relevant/retrieved counts.  Aggregates are
arithmetic means over queries that have at least one relevant document;
queries with none are flagged and excluded from the means, following
trec_eval convention.  Recall denominators always come from the judgments,
never from what was retrieved.
"""

import os
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import ParseError
from .ranking import RankedRun

CUTOFF_LEVELS = (5, 10, 15, 20, 30, 100, 200, 500, 1000)
RECALL_LEVELS = tuple(i / 10 for i in range(11))

Qrels = dict[str, set[str]]


def _iter_lines(source):
    if hasattr(source, "read"):
        yield from source
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as f:
            yield from f
    else:
        yield from source


def parse_qrels(source) -> Qrels:
    """Parse whitespace-separated ``qid iter docno rel`` lines.

    Graded judgments collapse to binary: rel > 0 means relevant.  Queries
    whose judged documents are all nonrelevant still appear, with an empty
    set.
    """
    qrels: Qrels = {}
    for lineno, line in enumerate(_iter_lines(source), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 4:
            raise ParseError(
                "qrels line %d: expected 4 fields, got %d" % (lineno, len(fields))
            )
        qid, _, docno, rel = fields
        try:
            rel_value = int(rel)
        except ValueError:
            raise ParseError(
                "qrels line %d: relevance %r is not an integer" % (lineno, rel)
            ) from None
        judged = qrels.setdefault(qid, set())
        if rel_value > 0:
            judged.add(docno)
    return qrels


@dataclass
class QueryEval:
    qid: str
    num_relevant: int
    num_retrieved: int
    num_relevant_retrieved: int
    average_precision: float
    interp_precision: tuple[float, ...]  # at recall 0.0, 0.1, ..., 1.0
    cutoff_precision: dict[int, float]
    r_precision: float


@dataclass
class EvalReport:
    per_query: list[QueryEval]
    mean_average_precision: float
    mean_interp_precision: tuple[float, ...]
    mean_cutoff_precision: dict[int, float]
    mean_r_precision: float
    total_relevant: int
    total_retrieved: int
    total_relevant_retrieved: int
    num_evaluated: int          # queries contributing to the means
    flagged: list[str]          # qids with no relevant documents


def evaluate_query(run: RankedRun, relevant: set[str]) -> QueryEval:
    """Score one ranked list against its relevant set.

    With no relevant documents the result is defined (all metrics zero)
    but callers exclude it from aggregates.
    """
    num_relevant = len(relevant)
    hits = 0
    points: list[tuple[float, float]] = []  # (recall, precision) at relevant ranks
    precision_sum = 0.0
    rel_flags: list[bool] = []
    for position, entry in enumerate(run.entries, start=1):
        is_rel = entry.docno in relevant
        rel_flags.append(is_rel)
        if is_rel:
            hits += 1
            precision = hits / position
            precision_sum += precision
            points.append((hits / num_relevant, precision))
    average_precision = precision_sum / num_relevant if num_relevant else 0.0

    interp = []
    for level in RECALL_LEVELS:
        best = 0.0
        for recall, precision in points:
            if recall >= level and precision > best:
                best = precision
        interp.append(best)

    cumulative = []
    running = 0
    for flag in rel_flags:
        running += flag
        cumulative.append(running)

    def hits_at(k: int) -> int:
        if not cumulative:
            return 0
        return cumulative[min(k, len(cumulative)) - 1] if k >= 1 else 0

    cutoffs = {k: hits_at(k) / k for k in CUTOFF_LEVELS}
    r_precision = (
        hits_at(num_relevant) / num_relevant if num_relevant else 0.0
    )

    return QueryEval(
        qid=run.qid,
        num_relevant=num_relevant,
        num_retrieved=len(run.entries),
        num_relevant_retrieved=hits,
        average_precision=average_precision,
        interp_precision=tuple(interp),
        cutoff_precision=cutoffs,
        r_precision=r_precision,
    )


def evaluate_run(runs: Iterable[RankedRun], qrels: Qrels) -> EvalReport:
    """Evaluate one run per query and aggregate.

    A qid missing from the qrels is treated as having no relevant documents
    and flagged.  Duplicate qids are an error.
    """
    per_query: list[QueryEval] = []
    seen: set[str] = set()
    flagged: list[str] = []
    for run in runs:
        if run.qid in seen:
            raise ValueError("duplicate qid %r in runs" % run.qid)
        seen.add(run.qid)
        relevant = qrels.get(run.qid, set())
        evaluation = evaluate_query(run, relevant)
        if evaluation.num_relevant == 0:
            flagged.append(run.qid)
        per_query.append(evaluation)

    included = [q for q in per_query if q.num_relevant > 0]
    count = len(included)

    def mean(values: Iterable[float]) -> float:
        return sum(values) / count if count else 0.0

    mean_interp = tuple(
        mean(q.interp_precision[i] for q in included) for i in range(len(RECALL_LEVELS))
    )
    mean_cutoffs = {
        k: mean(q.cutoff_precision[k] for q in included) for k in CUTOFF_LEVELS
    }
    return EvalReport(
        per_query=per_query,
        mean_average_precision=mean(q.average_precision for q in included),
        mean_interp_precision=mean_interp,
        mean_cutoff_precision=mean_cutoffs,
        mean_r_precision=mean(q.r_precision for q in included),
        total_relevant=sum(q.num_relevant for q in per_query),
        total_retrieved=sum(q.num_retrieved for q in per_query),
        total_relevant_retrieved=sum(q.num_relevant_retrieved for q in per_query),
        num_evaluated=count,
        flagged=flagged,
    )

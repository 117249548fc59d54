"""Command-line driver for the full experiment workflow.

Subcommands: ``index``, ``search``, ``eval``, ``compare`` and ``stoplist``
(with ``build``, ``combine``, ``inspect``).  Technique codes follow the
``<MODEL>`` / ``<MODEL>_<LIST>`` convention (for example ``BM25_CBS``) and
are derived automatically from the model and the stoplist recorded in the
index.

This module owns every file format that crosses the process boundary:
TIPSTER SGML corpora (optionally gzipped, UTF-8 or CP1256), TREC topic
files, TREC run files (``qid Q0 docno rank score tag``, scores printed with
six decimals), qrels, stoplist files, and the plain-text and tab-separated
evaluation reports.

Exit codes: 0 success, 1 usage error, 2 data or parse error.
"""

import argparse
import gzip
import logging
import os
import re
import sys

from . import stoplists
from .errors import ParseError
from .index import Index, build_index, parse_trec_documents
from .ranking import (
    BM25Params,
    DirichletParams,
    Query,
    RankedRun,
    RunEntry,
    SCORERS,
    TFIDFParams,
)
from .sigtest import friedman, wilcoxon_signed_rank
from .stoplists import Stoplist, build_corpus_stoplist, combine, load_stoplist
from .treceval import (
    CUTOFF_LEVELS,
    RECALL_LEVELS,
    EvalReport,
    evaluate_run,
    parse_qrels,
)

MODELS = ("TFIDF", "BM25", "KL")
ENCODINGS = {"utf8": "utf-8", "cp1256": "cp1256"}
SIGNIFICANCE_LEVEL = 0.05


class UsageError(Exception):
    """Bad invocation discovered after argument parsing."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; our contract reserves 2 for
    # data errors, so remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


# -- config files ---------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    """Parse a ``key=value`` experiment manifest; ``#`` starts a comment."""
    config: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if "=" not in s:
                raise ParseError(
                    "%s line %d: expected key=value" % (path, lineno)
                )
            key, value = s.split("=", 1)
            config[key.strip()] = value.strip()
    return config


def _to_bool(value: str) -> bool:
    if value.lower() in ("1", "true", "yes", "on"):
        return True
    if value.lower() in ("0", "false", "no", "off"):
        return False
    raise UsageError("expected a boolean, got %r" % value)


def _merged(args, key: str, convert, default):
    """Resolve an option: explicit flag wins, then config file, then default."""
    value = getattr(args, key)
    if value is not None:
        return value
    config = getattr(args, "_config", None) or {}
    if key in config:
        return convert(config[key])
    return default


# -- shared file helpers ----------------------------------------------------


def _read_text_file(path: str, encoding: str) -> str:
    if str(path).endswith(".gz"):
        with gzip.open(path, "rb") as f:
            data = f.read()
    else:
        with open(path, "rb") as f:
            data = f.read()
    return data.decode(encoding)


def _expand_paths(paths: list[str]) -> list[str]:
    out: list[str] = []
    for p in paths:
        if os.path.isdir(p):
            for root, dirs, files in os.walk(p):
                dirs.sort()
                out.extend(os.path.join(root, name) for name in sorted(files))
        else:
            out.append(p)
    return out


def _require_paths(*paths: str) -> None:
    # fail before any work starts, naming the missing path
    for p in paths:
        if not os.path.exists(p):
            raise ParseError("path does not exist: %s" % p)


def _resolve_stoplist(selection: str | None) -> Stoplist | None:
    if selection is None or selection == "none":
        return None
    if selection in ("GS", "CBS", "CS"):
        return stoplists.bundled(selection)
    _require_paths(selection)
    name = os.path.splitext(os.path.basename(selection))[0]
    return load_stoplist(selection, name=name, provenance="custom")


def write_stoplist(stoplist: Stoplist, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("# stoplist: %s\n" % stoplist.name)
        f.write("# provenance: %s\n" % stoplist.provenance)
        f.write("# words: %d\n" % len(stoplist))
        for word in sorted(stoplist.words):
            f.write(word + "\n")


# -- topic files ------------------------------------------------------------

# Field bodies run to the next tag; TREC topic fields contain no markup,
# whether or not the writer closed them with </num>-style tags.
_TOP_RE = re.compile(r"<top>(.*?)</top>", re.S | re.I)
_NUM_RE = re.compile(r"<num>\s*(?:Number\s*:)?\s*(.*?)\s*(?=<|$)", re.S | re.I)
_TITLE_RE = re.compile(r"<title>\s*(?:Topic\s*:)?\s*(.*?)\s*(?=<|$)", re.S | re.I)
_DESC_RE = re.compile(r"<desc>\s*(?:Description\s*:)?\s*(.*?)\s*(?=<|$)", re.S | re.I)


def parse_topics(text: str) -> list[tuple[str, str]]:
    """Parse TREC topics; the query text is title plus description."""
    blocks = _TOP_RE.findall(text)
    if text.count("<top>") != len(blocks):
        raise ParseError("unterminated <top> block in topics file")
    topics: list[tuple[str, str]] = []
    for i, block in enumerate(blocks, start=1):
        m = _NUM_RE.search(block)
        if m is None or not m.group(1).split():
            raise ParseError("topic block %d has no <num>" % i)
        qid = m.group(1).split()[0]
        title = _TITLE_RE.search(block)
        desc = _DESC_RE.search(block)
        parts = []
        if title:
            parts.append(title.group(1))
        if desc:
            parts.append(desc.group(1))
        topics.append((qid, " ".join(p for p in parts if p)))
    return topics


# -- run files ---------------------------------------------------------------


def write_run(run: RankedRun, out) -> None:
    for entry in run.entries:
        out.write(
            "%s Q0 %s %d %.6f %s\n"
            % (run.qid, entry.docno, entry.rank, entry.score, run.tag)
        )


def read_run_file(source) -> list[RankedRun]:
    """Parse a TREC run file into per-query runs, original order preserved."""
    runs: dict[str, RankedRun] = {}
    docnos_seen: dict[str, set[str]] = {}
    if hasattr(source, "read"):
        lines = source
    else:
        lines = open(source, "r", encoding="utf-8")
    try:
        for lineno, line in enumerate(lines, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 6:
                raise ParseError(
                    "run line %d: expected 6 fields, got %d" % (lineno, len(fields))
                )
            qid, _, docno, rank_s, score_s, tag = fields
            try:
                rank = int(rank_s)
                score = float(score_s)
            except ValueError:
                raise ParseError(
                    "run line %d: bad rank or score" % lineno
                ) from None
            if qid not in runs:
                runs[qid] = RankedRun(qid=qid, entries=[], tag=tag)
                docnos_seen[qid] = set()
            if docno in docnos_seen[qid]:
                raise ParseError(
                    "run line %d: duplicate docno %r for query %s"
                    % (lineno, docno, qid)
                )
            docnos_seen[qid].add(docno)
            runs[qid].entries.append(RunEntry(docno, score, rank))
    finally:
        if lines is not source:
            lines.close()
    for run in runs.values():
        run.entries.sort(key=lambda e: e.rank)
    return list(runs.values())


# -- evaluation reports -------------------------------------------------------

_TSV_COLUMNS = (
    ["tag", "qid", "num_relevant", "num_retrieved", "num_relevant_retrieved",
     "ap", "r_precision"]
    + ["p_%d" % k for k in CUTOFF_LEVELS]
    + ["ip_%.1f" % x for x in RECALL_LEVELS]
)


def write_report_text(report: EvalReport, tag: str, out) -> None:
    w = out.write
    w("run tag:                       %s\n" % tag)
    w("queries in run:                %d\n" % len(report.per_query))
    w("queries evaluated (R > 0):     %d\n" % report.num_evaluated)
    w("queries flagged (R = 0):       %d%s\n" % (
        len(report.flagged),
        "  [%s]" % ", ".join(report.flagged) if report.flagged else "",
    ))
    w("total relevant:                %d\n" % report.total_relevant)
    w("total relevant retrieved:      %d\n" % report.total_relevant_retrieved)
    w("total retrieved:               %d\n" % report.total_retrieved)
    w("\nper-query metrics\n")
    w("%-12s %6s %7s %7s %9s %9s\n" % ("qid", "rel", "ret", "relret", "AP", "R-prec"))
    for q in report.per_query:
        w("%-12s %6d %7d %7d %9.4f %9.4f\n" % (
            q.qid, q.num_relevant, q.num_retrieved, q.num_relevant_retrieved,
            q.average_precision, q.r_precision,
        ))
    w("\nmeans over evaluated queries\n")
    w("mean average precision:        %.4f\n" % report.mean_average_precision)
    w("mean R-precision:              %.4f\n" % report.mean_r_precision)
    w("\nprecision at document cutoffs\n")
    w(" ".join("%8s" % ("P@%d" % k) for k in CUTOFF_LEVELS) + "\n")
    w(" ".join("%8.4f" % report.mean_cutoff_precision[k] for k in CUTOFF_LEVELS) + "\n")
    w("\ninterpolated precision at 11 recall levels\n")
    w(" ".join("%8.1f" % x for x in RECALL_LEVELS) + "\n")
    w(" ".join("%8.4f" % p for p in report.mean_interp_precision) + "\n")


def write_report_tsv(report: EvalReport, tag: str, out) -> None:
    out.write("\t".join(_TSV_COLUMNS) + "\n")

    def fmt(x: float) -> str:
        return "%.17g" % x

    for q in report.per_query:
        row = (
            [tag, q.qid, str(q.num_relevant), str(q.num_retrieved),
             str(q.num_relevant_retrieved), fmt(q.average_precision),
             fmt(q.r_precision)]
            + [fmt(q.cutoff_precision[k]) for k in CUTOFF_LEVELS]
            + [fmt(p) for p in q.interp_precision]
        )
        out.write("\t".join(row) + "\n")
    summary = (
        [tag, "all", str(report.total_relevant), str(report.total_retrieved),
         str(report.total_relevant_retrieved),
         fmt(report.mean_average_precision), fmt(report.mean_r_precision)]
        + [fmt(report.mean_cutoff_precision[k]) for k in CUTOFF_LEVELS]
        + [fmt(p) for p in report.mean_interp_precision]
    )
    out.write("\t".join(summary) + "\n")


def read_report_tsv(path: str) -> tuple[str, dict[str, dict[str, float]]]:
    """Read a per-query report back; returns (tag, qid -> {ap, num_relevant})."""
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().rstrip("\n").split("\t")
        if header[: len(_TSV_COLUMNS)] != list(_TSV_COLUMNS):
            raise ParseError("%s: not a recognized report file" % path)
        tag = None
        rows: dict[str, dict[str, float]] = {}
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != len(_TSV_COLUMNS):
                raise ParseError("%s line %d: wrong field count" % (path, lineno))
            if tag is None:
                tag = fields[0]
            if fields[1] == "all":
                continue
            rows[fields[1]] = {
                "ap": float(fields[5]),
                "num_relevant": int(fields[2]),
            }
    if tag is None:
        raise ParseError("%s: report contains no rows" % path)
    return tag, rows


# -- subcommands --------------------------------------------------------------


def cmd_index(args) -> int:
    corpus = _merged(args, "corpus", lambda v: v.split(","), None)
    if not corpus:
        raise UsageError("no corpus given (flag --corpus or config corpus=)")
    out_path = _merged(args, "out", str, None)
    if not out_path:
        raise UsageError("no output path given (flag --out or config out=)")
    encoding = ENCODINGS[_merged(args, "encoding", _check_encoding, "utf8")]
    selection = _merged(args, "stoplist", str, "none")
    workers = _merged(args, "workers", int, 1)
    keep_marks = _merged(args, "keep_marks", _to_bool, False)

    _require_paths(*corpus)
    stoplist = _resolve_stoplist(selection)

    def documents():
        for path in _expand_paths(corpus):
            yield from parse_trec_documents(_read_text_file(path, encoding))

    index = build_index(
        documents(), stoplist=stoplist, strip_marks=not keep_marks, workers=workers
    )
    index.save(out_path)
    print("documents:           %d" % index.N)
    print("tokens:              %d" % index.total_tokens)
    print("vocabulary:          %d" % index.vocabulary_size)
    print("average doc length:  %.2f" % index.avgdl)
    print("stopwords removed:   %d" % index.stopwords_removed)
    print("stoplist:            %s" % (stoplist.name if stoplist else "none"))
    print("index file:          %s" % out_path)
    return 0


def _check_encoding(value: str) -> str:
    if value not in ENCODINGS:
        raise UsageError("encoding must be one of %s" % (sorted(ENCODINGS),))
    return value


def _check_model(value: str) -> str:
    if value not in MODELS:
        raise UsageError("model must be one of %s" % (MODELS,))
    return value


def cmd_search(args) -> int:
    index_path = _merged(args, "index", str, None)
    topics_path = _merged(args, "topics", str, None)
    if not index_path or not topics_path:
        raise UsageError("search needs --index and --topics")
    model = _merged(args, "model", _check_model, "TFIDF")
    top_k = _merged(args, "top_k", int, 1000)
    encoding = ENCODINGS[_merged(args, "encoding", _check_encoding, "utf8")]

    _require_paths(index_path, topics_path)
    index = Index.load(index_path)
    topics = parse_topics(_read_text_file(topics_path, encoding))

    if model == "BM25":
        params = BM25Params(
            k1=_merged(args, "k1", float, 1.2),
            b=_merged(args, "b", float, 0.75),
            k3=_merged(args, "k3", float, 7.0),
        )
    elif model == "TFIDF":
        params = TFIDFParams(
            k1=_merged(args, "k1", float, 1.0),
            b=_merged(args, "b", float, 0.3),
        )
    else:
        params = DirichletParams(mu=_merged(args, "mu", float, 2000.0))

    tag = model if index.stoplist is None else "%s_%s" % (model, index.stoplist.name)
    scorer = SCORERS[model]

    out_path = _merged(args, "out", str, None)
    out = open(out_path, "w", encoding="utf-8") if out_path else sys.stdout
    try:
        for qid, text in topics:
            query = Query.from_text(
                qid, text, stoplist=index.stoplist, strip_marks=index.strip_marks
            )
            run = scorer(index, query, params, top_k=top_k, tag=tag)
            if not run.entries:
                print(
                    "warning: query %s produced no results "
                    "(all terms filtered or unindexed)" % qid,
                    file=sys.stderr,
                )
            write_run(run, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_eval(args) -> int:
    runs = read_run_file(args.run)
    qrels = parse_qrels(args.qrels)
    report = evaluate_run(runs, qrels)
    tag = runs[0].tag if runs else "(empty run)"
    write_report_text(report, tag, sys.stdout)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            write_report_tsv(report, tag, f)
    return 0


def cmd_compare(args) -> int:
    tables = [read_report_tsv(path) for path in args.reports]
    tags = [tag for tag, _ in tables]
    if len(set(tags)) != len(tags):
        raise ParseError("duplicate technique tags among reports: %s" % tags)
    reference = set(tables[0][1])
    for tag, rows in tables[1:]:
        if set(rows) != reference:
            missing = sorted(reference - set(rows))
            extra = sorted(set(rows) - reference)
            raise ParseError(
                "report %s covers a different qid set (missing %s, extra %s)"
                % (tag, missing or "-", extra or "-")
            )
    if not reference:
        raise ParseError("reports contain no queries")
    qids = sorted(reference)
    matrix = [[rows[q]["ap"] for _, rows in tables] for q in qids]

    baseline = args.baseline
    if baseline not in tags:
        raise UsageError(
            "baseline %r is not among the report tags %s" % (baseline, tags)
        )

    def mean_precision(rows: dict[str, dict[str, float]]) -> float:
        values = [r["ap"] for r in rows.values() if r["num_relevant"] > 0]
        return sum(values) / len(values) if values else 0.0

    result = friedman(matrix, labels=tags)
    order = sorted(range(len(tags)), key=lambda j: result.mean_ranks[j])

    print("Friedman test over %d techniques, %d queries" % (len(tags), len(qids)))
    print("%-14s %14s %11s" % ("technique", "mean precision", "mean rank"))
    for j in order:
        print(
            "%-14s %14.4f %11.2f"
            % (tags[j], mean_precision(tables[j][1]), result.mean_ranks[j])
        )
    print(
        "chi2 = %.3f  df = %d  p = %.4g%s"
        % (
            result.chi2,
            result.df,
            result.p_value,
            "  (significant at %.2f)" % SIGNIFICANCE_LEVEL
            if result.p_value < SIGNIFICANCE_LEVEL
            else "",
        )
    )

    base_rows = tables[tags.index(baseline)][1]
    base_scores = [base_rows[q]["ap"] for q in qids]
    print()
    print(
        "Wilcoxon signed-rank vs baseline %s (QP > BP means the technique "
        "beat the baseline; * = p < %.2f)" % (baseline, SIGNIFICANCE_LEVEL)
    )
    print(
        "%-14s %14s %7s %7s %7s %10s"
        % ("technique", "mean precision", "QP>BP", "QP<BP", "QP=BP", "p-value")
    )
    for j in order:
        if tags[j] == baseline:
            continue
        scores = [tables[j][1][q]["ap"] for q in qids]
        w = wilcoxon_signed_rank(scores, base_scores)
        print(
            "%-14s %14.4f %7d %7d %7d %10.4g%s"
            % (
                tags[j],
                mean_precision(tables[j][1]),
                w.better,
                w.worse,
                w.tied,
                w.p_value,
                " *" if w.p_value < SIGNIFICANCE_LEVEL else "",
            )
        )
    return 0


def cmd_stoplist_build(args) -> int:
    index = Index.load(args.index)
    exclusions: set[str] = set()
    if args.exclude:
        exclusions = set(
            load_stoplist(args.exclude, name="exclusions", provenance="custom").words
        )
    stoplist = build_corpus_stoplist(
        index.ctf, args.cutoff, exclusions, name=args.name
    )
    if not stoplist.words:
        print(
            "warning: cutoff %d exceeds every collection frequency; "
            "the list is empty" % args.cutoff,
            file=sys.stderr,
        )
    write_stoplist(stoplist, args.out)
    print("stoplist %s: %d words -> %s" % (stoplist.name, len(stoplist), args.out))
    return 0


def cmd_stoplist_combine(args) -> int:
    a = _resolve_stoplist(args.a)
    b = _resolve_stoplist(args.b)
    merged = combine(a, b, name=args.name)
    write_stoplist(merged, args.out)
    print("stoplist %s: %d words -> %s" % (merged.name, len(merged), args.out))
    return 0


def cmd_stoplist_inspect(args) -> int:
    stoplist = _resolve_stoplist(args.list)
    print("list %s: %d words (provenance: %s)"
          % (stoplist.name, len(stoplist), stoplist.provenance))
    if args.other:
        other = _resolve_stoplist(args.other)
        print("list %s: %d words (provenance: %s)"
              % (other.name, len(other), other.provenance))
        print("overlap: %d" % len(stoplist.words & other.words))
        print("union:   %d" % len(stoplist.words | other.words))
    return 0


# -- parser -------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="stoplab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index from TIPSTER SGML files")
    p.add_argument("--corpus", nargs="+", help="corpus files or directories (.gz ok)")
    p.add_argument("--out", help="index file to write")
    p.add_argument("--encoding", choices=sorted(ENCODINGS))
    p.add_argument("--stoplist", help="none, GS, CBS, CS, or a stoplist file")
    p.add_argument("--workers", type=int, help="parallel tokenization workers")
    p.add_argument("--keep-marks", dest="keep_marks", action="store_const",
                   const=True, help="keep diacritics and tatweel")
    p.add_argument("--config", help="key=value manifest; flags win")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run topics against an index")
    p.add_argument("--index", help="index file")
    p.add_argument("--topics", help="TREC topics file")
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--k1", type=float, help="BM25/TFIDF k1")
    p.add_argument("--b", type=float, help="BM25/TFIDF b")
    p.add_argument("--k3", type=float, help="BM25 k3")
    p.add_argument("--mu", type=float, help="Dirichlet prior mass")
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--out", help="run file (default: stdout)")
    p.add_argument("--encoding", choices=sorted(ENCODINGS))
    p.add_argument("--config", help="key=value manifest; flags win")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", help="evaluate a run file against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--out", help="per-query TSV report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="significance tests over eval reports")
    p.add_argument("reports", nargs="+", help="per-query TSV reports")
    p.add_argument("--baseline", default="TFIDF")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stoplist", help="build, combine or inspect stoplists")
    ssub = p.add_subparsers(dest="subcommand", required=True)

    q = ssub.add_parser("build", help="corpus-based list from index statistics")
    q.add_argument("--index", required=True)
    q.add_argument("--cutoff", type=int, required=True,
                   help="keep terms with collection frequency > cutoff")
    q.add_argument("--exclude", help="file of content words to remove")
    q.add_argument("--out", required=True)
    q.add_argument("--name", default="CBS")
    q.set_defaults(func=cmd_stoplist_build)

    q = ssub.add_parser("combine", help="union of two stoplists")
    q.add_argument("--a", required=True, help="GS, CBS, CS, or a file")
    q.add_argument("--b", required=True, help="GS, CBS, CS, or a file")
    q.add_argument("--out", required=True)
    q.add_argument("--name", default=None)
    q.set_defaults(func=cmd_stoplist_combine)

    q = ssub.add_parser("inspect", help="size and overlap of stoplists")
    q.add_argument("--list", required=True, help="GS, CBS, CS, or a file")
    q.add_argument("--other", help="second list for overlap statistics")
    q.set_defaults(func=cmd_stoplist_inspect)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "config", None):
            args._config = read_config(args.config)
        else:
            args._config = {}
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except UnicodeDecodeError as exc:
        print("error: cannot decode input: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()

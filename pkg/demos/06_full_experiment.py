"""A complete stoplist-sensitivity experiment at toy scale, driven through
the command-line entry points: index four ways, search under three models,
evaluate, and compare with significance tests.

Run:  python demos/06_full_experiment.py
"""

import random
import tempfile
from pathlib import Path

from stoplab.cli import main
from stoplab.stoplists import corpus_based, general

rng = random.Random(99)
tmp = Path(tempfile.mkdtemp(prefix="stoplab_demo_"))
print("working directory: %s" % tmp)

# -- synthesize a small corpus whose stopwords come from the bundled lists
stops = sorted(general().words)[:30] + sorted(corpus_based().words)[:20]
content = ["topic%02d" % i for i in range(40)]
corpus = tmp / "corpus.sgml"
with open(corpus, "w", encoding="utf-8") as f:
    for i in range(300):
        words = [
            rng.choice(stops) if rng.random() < 0.45 else rng.choice(content)
            for _ in range(rng.randint(20, 60))
        ]
        f.write("<DOC>\n<DOCNO>T%03d</DOCNO>\n<TEXT>\n%s\n</TEXT>\n</DOC>\n"
                % (i, " ".join(words)))

topics = tmp / "topics.txt"
with open(topics, "w", encoding="utf-8") as f:
    for qid in range(1, 9):
        f.write("<top>\n<num> Number: %d </num>\n<title> %s\n"
                "<desc> Description: %s %s\n</top>\n"
                % (qid, rng.choice(content), rng.choice(content),
                   rng.choice(stops)))

qrels = tmp / "qrels.txt"
with open(qrels, "w", encoding="utf-8") as f:
    for qid in range(1, 9):
        for d in rng.sample(range(300), 12):
            f.write("%d 0 T%03d 1\n" % (qid, d))

# -- index once per stoplist strategy
for code in ("none", "GS", "CBS", "CS"):
    print("\n$ stoplab index --stoplist %s" % code)
    main(["index", "--corpus", str(corpus), "--out", str(tmp / (code + ".idx")),
          "--stoplist", code])

# -- twelve technique combinations, evaluated
reports = []
for model in ("TFIDF", "BM25", "KL"):
    for code in ("none", "GS", "CBS", "CS"):
        tag = model if code == "none" else "%s_%s" % (model, code)
        run_file = tmp / (tag + ".run")
        main(["search", "--index", str(tmp / (code + ".idx")),
              "--topics", str(topics), "--model", model, "--out", str(run_file)])
        tsv = tmp / (tag + ".tsv")
        main(["eval", "--run", str(run_file), "--qrels", str(qrels),
              "--out", str(tsv)])
        reports.append(str(tsv))
print("\nran %d technique combinations" % len(reports))

# -- the two comparison tables
print("\n$ stoplab compare ... --baseline TFIDF\n")
main(["compare"] + reports + ["--baseline", "TFIDF"])

print("\n(synthetic relevance, so the precision numbers are noise; the point")
print("is the workflow and the table shapes)")

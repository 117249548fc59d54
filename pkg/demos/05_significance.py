"""Friedman and Wilcoxon tests over per-query average precision tables.

Run:  python demos/05_significance.py
"""

import random

from stoplab import friedman, friedman_chi2_from_mean_ranks, wilcoxon_signed_rank

rng = random.Random(7)

# 30 queries, 3 techniques; technique C gets a small systematic edge
n = 30
base = [rng.random() * 0.5 for _ in range(n)]
table = {
    "A": [x + rng.gauss(0, 0.02) for x in base],
    "B": [x + rng.gauss(0, 0.02) for x in base],
    "C": [x + 0.05 + rng.gauss(0, 0.02) for x in base],
}
labels = sorted(table)
matrix = [[table[t][i] for t in labels] for i in range(n)]

print("Friedman two-way ANOVA by ranks (%d queries, %d techniques)"
      % (n, len(labels)))
print("-" * 60)
result = friedman(matrix, labels=labels)
for label, rank in zip(result.labels, result.mean_ranks):
    print("  %-4s mean rank %.2f" % (label, rank))
print("chi2 = %.3f  df = %d  p = %.4g" % (result.chi2, result.df, result.p_value))
print()

print("Wilcoxon signed-rank, pairwise against technique A")
print("-" * 60)
print("%-6s %8s %8s %8s %10s" % ("pair", "better", "worse", "tied", "p"))
for other in ("B", "C"):
    w = wilcoxon_signed_rank(table[other], table["A"])
    print("%-6s %8d %8d %8d %10.4g" % ("%s-A" % other, w.better, w.worse, w.tied,
                                       w.p_value))
print()
print("with 20 or fewer nonzero differences the p-value is exact (all sign")
print("patterns of the observed ranks are enumerated); larger samples use")
print("the tie-corrected normal approximation with continuity correction.")
print()

print("reconstructing a statistic from published mean ranks")
print("-" * 60)
ranks = [4.91, 4.95, 5.76, 6.04, 6.23, 6.29, 6.42, 7.09, 7.11, 7.30, 7.73, 8.45]
chi2 = friedman_chi2_from_mean_ranks(ranks, n=75)
print("twelve techniques over 75 queries, rounded mean ranks ->")
print("chi2 = %.2f (the matching published figure is 70.471; two-decimal" % chi2)
print("rounding of the ranks accounts for the difference)")

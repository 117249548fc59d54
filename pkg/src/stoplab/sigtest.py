"""Nonparametric significance tests for paired retrieval results.

Friedman two-way analysis of variance by ranks for k techniques measured
on the same n queries, and the Wilcoxon matched-pairs signed-rank test for
pairwise comparisons, both with the tie handling described in Siegel &
Castellan, "Nonparametric Statistics for the Behavioral Sciences" (2nd ed.,
1988).  Alongside the Wilcoxon p-value the (better, worse, tied) sign
counts are reported, since they summarize per-query wins at a glance.

The Wilcoxon p-value is computed exactly for up to 20 nonzero differences
by enumerating all sign assignments of the observed ranks; beyond that a
normal approximation with tie-corrected variance and continuity correction
is used.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaincc, ndtr
from scipy.stats import rankdata

EXACT_LIMIT = 20


def chi_square_upper_tail(x: float, df: int) -> float:
    """Survival function of the chi-square distribution.

    Computed through the regularized upper incomplete gamma function.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if df < 1 or int(df) != df:
        raise ValueError("df must be a positive integer")
    return float(gammaincc(df / 2.0, x / 2.0))


@dataclass
class FriedmanResult:
    chi2: float
    df: int
    p_value: float
    mean_ranks: list[float]
    labels: list[str]


def friedman(matrix, labels: Sequence[str] | None = None) -> FriedmanResult:
    """Friedman test over an n-subjects by k-treatments score matrix.

    Values are ranked ascending within each row, ties receiving average
    ranks.  The statistic uses the Siegel-Castellan tie correction; with
    every row fully tied the statistic is 0 and p is 1.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    n, k = m.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 subjects and 2 treatments")
    if labels is None:
        labels = [str(j) for j in range(k)]
    elif len(labels) != k:
        raise ValueError("need one label per treatment")

    ranks = np.apply_along_axis(rankdata, 1, m)
    column_sums = ranks.sum(axis=0)
    chi2 = (12.0 * float(np.sum(column_sums**2))) / (n * k * (k + 1)) - 3.0 * n * (
        k + 1
    )

    tie_mass = 0.0
    for row in m:
        _, counts = np.unique(row, return_counts=True)
        counts = counts.astype(float)
        tie_mass += float(np.sum(counts**3 - counts))
    correction = 1.0 - tie_mass / (n * k * (k * k - 1))
    if correction <= 0.0:
        chi2 = 0.0
        p = 1.0
    else:
        chi2 = max(chi2 / correction, 0.0)
        p = chi_square_upper_tail(chi2, k - 1)
    return FriedmanResult(
        chi2=chi2,
        df=k - 1,
        p_value=p,
        mean_ranks=[float(s) / n for s in column_sums],
        labels=list(labels),
    )


def friedman_chi2_from_mean_ranks(mean_ranks: Sequence[float], n: int) -> float:
    """Reconstruct the Friedman statistic from published per-treatment mean
    ranks.

    Uses squared deviations from the grand mean rank (k+1)/2, which
    tolerates rounded mean ranks whose sum has drifted away from k(k+1)/2;
    the algebraically equal rank-sum form amplifies that rounding instead.
    """
    k = len(mean_ranks)
    if k < 2:
        raise ValueError("need at least 2 treatments")
    if n < 1:
        raise ValueError("need at least 1 subject")
    center = (k + 1) / 2.0
    deviation = sum((r - center) ** 2 for r in mean_ranks)
    return 12.0 * n * deviation / (k * (k + 1))


@dataclass
class WilcoxonResult:
    n_used: int          # pairs with nonzero difference
    w_plus: float
    w_minus: float
    statistic: float     # min(w_plus, w_minus)
    p_value: float       # two-sided
    better: int          # differences > 0
    worse: int           # differences < 0
    tied: int            # differences == 0 (dropped from the ranking)


def _exact_two_sided_p(ranks: np.ndarray, w_plus: float) -> float:
    # Ranks are multiples of 1/2 (average ranks), so doubling makes them
    # integers and the null distribution of 2*W+ can be tabulated exactly.
    doubled = [int(round(2 * r)) for r in ranks]
    total = sum(doubled)
    ways = [0] * (total + 1)
    ways[0] = 1
    for r in doubled:
        for s in range(total - r, -1, -1):
            if ways[s]:
                ways[s + r] += ways[s]
    w2 = int(round(2 * w_plus))
    lo = min(w2, total - w2)
    hi = total - lo
    count = sum(ways[: lo + 1]) + sum(ways[hi:])
    return min(1.0, count / (2 ** len(doubled)))


def _approx_two_sided_p(ranks: np.ndarray, statistic: float) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0
    _, counts = np.unique(ranks, return_counts=True)
    counts = counts.astype(float)
    variance -= float(np.sum(counts**3 - counts)) / 48.0
    z = (statistic - mean + 0.5) / math.sqrt(variance)
    return min(1.0, 2.0 * float(ndtr(z)))


def wilcoxon_signed_rank(a, b, method: str = "auto") -> WilcoxonResult:
    """Wilcoxon matched-pairs signed-rank test, two-sided.

    Zero differences are dropped from the ranking (counted as ties);
    absolute differences receive average ranks.  ``method`` is "auto"
    (exact up to 20 nonzero pairs, else normal approximation), "exact",
    or "approx".
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 1:
        raise ValueError("need two equal-length one-dimensional samples")
    if method not in ("auto", "exact", "approx"):
        raise ValueError("method must be auto, exact or approx")
    d = x - y
    better = int(np.sum(d > 0))
    worse = int(np.sum(d < 0))
    tied = int(np.sum(d == 0))
    nonzero = d[d != 0]
    n_used = len(nonzero)
    if n_used == 0:
        return WilcoxonResult(0, 0.0, 0.0, 0.0, 1.0, better, worse, tied)
    ranks = rankdata(np.abs(nonzero))
    w_plus = float(ranks[nonzero > 0].sum())
    w_minus = float(ranks[nonzero < 0].sum())
    statistic = min(w_plus, w_minus)
    if method == "exact" or (method == "auto" and n_used <= EXACT_LIMIT):
        p = _exact_two_sided_p(ranks, w_plus)
    else:
        p = _approx_two_sided_p(ranks, statistic)
    return WilcoxonResult(n_used, w_plus, w_minus, statistic, p, better, worse, tied)

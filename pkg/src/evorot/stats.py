"""Nonparametric and t-test battery applied to rotation tables.

Statistics are computed in-package (mid-rank handling, tie correction,
Welch degrees of freedom, exact binomial) so edge cases are pinned down;
only the chi-square and Student-t tail probabilities come from scipy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy.stats import chi2 as _chi2
from scipy.stats import t as _student_t


class KruskalResult(NamedTuple):
    statistic: float
    df: int
    pvalue: float


class TTestResult(NamedTuple):
    statistic: float
    df: float
    pvalue: float


def midranks(values: Sequence[float]) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="mergesort")
    ranks = np.empty(len(arr))
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1
        i = j + 1
    return ranks


def _as_groups(groups) -> list[np.ndarray]:
    if isinstance(groups, Mapping):
        groups = list(groups.values())
    return [np.asarray(g, dtype=float) for g in groups]


def kruskal_wallis(groups) -> KruskalResult:
    """Equality-of-populations rank test across labeled groups.

    H uses mid-ranks and the standard tie correction; the p-value comes
    from the chi-square upper tail with (number of groups - 1) degrees of
    freedom. All observations identical is a defined degenerate case:
    H = 0, p = 1.
    """
    gs = _as_groups(groups)
    if len(gs) < 2:
        raise ValueError("need at least two groups")
    if any(len(g) == 0 for g in gs):
        raise ValueError("every group needs at least one observation")
    n = sum(len(g) for g in gs)
    if n < 3:
        raise ValueError("need at least three observations in total")
    df = len(gs) - 1

    pooled = np.concatenate(gs)
    ranks = midranks(pooled)
    h = 0.0
    start = 0
    for g in gs:
        r_sum = ranks[start : start + len(g)].sum()
        h += r_sum * r_sum / len(g)
        start += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)

    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(((counts**3) - counts).sum())
    correction = 1.0 - tie_term / (n**3 - n)
    if correction == 0.0:  # every observation equal
        return KruskalResult(0.0, df, 1.0)
    h /= correction
    return KruskalResult(float(h), df, float(_chi2.sf(h, df)))


def two_sample_t(x: Sequence[float], y: Sequence[float]) -> TTestResult:
    """Welch two-sample t-test, two-sided."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or len(y) < 2:
        raise ValueError("each sample needs at least two observations")
    vx = x.var(ddof=1) / len(x)
    vy = y.var(ddof=1) / len(y)
    diff = x.mean() - y.mean()
    if vx + vy == 0.0:
        # both samples constant: equal means are indistinguishable
        if diff == 0.0:
            return TTestResult(0.0, float(len(x) + len(y) - 2), 1.0)
        t = math.copysign(math.inf, diff)
        return TTestResult(t, float(len(x) + len(y) - 2), 0.0)
    t = diff / math.sqrt(vx + vy)
    df = (vx + vy) ** 2 / (vx**2 / (len(x) - 1) + vy**2 / (len(y) - 1))
    p = 2.0 * float(_student_t.sf(abs(t), df))
    return TTestResult(float(t), float(df), p)


def one_sample_t(xs: Sequence[float], popmean: float = 0.0) -> TTestResult:
    """One-sample t-test of the mean against popmean, two-sided."""
    x = np.asarray(xs, dtype=float)
    if len(x) < 2:
        raise ValueError("need at least two observations")
    sd = x.std(ddof=1)
    diff = x.mean() - popmean
    df = len(x) - 1
    if sd == 0.0:
        if diff == 0.0:
            return TTestResult(0.0, float(df), 1.0)
        return TTestResult(math.copysign(math.inf, diff), float(df), 0.0)
    t = diff / (sd / math.sqrt(len(x)))
    return TTestResult(float(t), float(df), 2.0 * float(_student_t.sf(abs(t), df)))


def sign_test(successes: int, n: int) -> float:
    """Two-sided exact binomial p-value against success probability 1/2.

    Computed in exact rational arithmetic before converting to float, so
    values like 2^-51 survive. Symmetric: sign_test(k, n) == sign_test(n-k, n).
    """
    if not 0 <= successes <= n:
        raise ValueError(f"successes must be in [0, {n}]")
    if n == 0:
        return 1.0
    m = min(successes, n - successes)
    if 2 * m == n:
        return 1.0
    tail = sum(math.comb(n, i) for i in range(m + 1))
    p = 2 * Fraction(tail, 2**n)
    return float(min(p, Fraction(1)))


def spearman_rank(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation with mid-rank ties."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y):
        raise ValueError("samples must have equal length")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    rx = midranks(x)
    ry = midranks(y)
    sx = rx.std()
    sy = ry.std()
    if sx == 0.0 or sy == 0.0:
        return float("nan")
    return float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))

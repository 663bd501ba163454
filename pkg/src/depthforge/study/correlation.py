"""Rank correlation coefficients: Spearman's rho and Kendall's tau-b.

Spearman is the Pearson correlation of average ranks.  Kendall uses the
tie-corrected tau-b with discordant pairs counted by merge sort in O(n log n):
after sorting by (a, b), inversions of the b sequence are exactly the strictly
discordant pairs, and tau_b = (n0 - ta - tb + tab - 2*inv) /
sqrt((n0 - ta)(n0 - tb)) with the usual tie-pair counts.
"""

from __future__ import annotations

import math

import numpy as np

from .synthetic import average_ranks


def _as_vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if v.size < 2:
        raise ValueError(f"{name} needs at least two entries")
    return v


def spearman_rho(a, b) -> float:
    """Pearson correlation of average ranks; errors on zero rank variance."""
    av = _as_vector(a, "a")
    bv = _as_vector(b, "b")
    if av.size != bv.size:
        raise ValueError("inputs must have equal length")
    ra = average_ranks(av)
    rb = average_ranks(bv)
    ra -= ra.mean()
    rb -= rb.mean()
    va = float(ra @ ra)
    vb = float(rb @ rb)
    if va == 0.0 or vb == 0.0:
        raise ValueError("zero rank variance")
    return float(ra @ rb) / math.sqrt(va * vb)


def _merge_count_inversions(x: np.ndarray) -> int:
    """Strict inversions (i < j with x[i] > x[j]) by bottom-up merge sort."""
    x = list(x)
    n = len(x)
    buf = [0.0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if x[j] < x[i]:
                    buf[k] = x[j]
                    inv += mid - i
                    j += 1
                else:
                    buf[k] = x[i]
                    i += 1
                k += 1
            buf[k : k + mid - i] = x[i:mid]
            k += mid - i
            buf[k : k + hi - j] = x[j:hi]
            x[lo:hi] = buf[lo:hi]
        width *= 2
    return inv


def _tie_pairs(sorted_x: np.ndarray) -> int:
    boundaries = np.flatnonzero(np.diff(sorted_x) != 0) + 1
    counts = np.diff(np.concatenate(([0], boundaries, [sorted_x.size])))
    return int((counts * (counts - 1) // 2).sum())


def _joint_tie_pairs(a_sorted: np.ndarray, b_sorted: np.ndarray) -> int:
    change = (np.diff(a_sorted) != 0) | (np.diff(b_sorted) != 0)
    boundaries = np.flatnonzero(change) + 1
    counts = np.diff(np.concatenate(([0], boundaries, [a_sorted.size])))
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau(a, b) -> float:
    """Tie-corrected tau-b; errors when either input is all ties."""
    av = _as_vector(a, "a")
    bv = _as_vector(b, "b")
    if av.size != bv.size:
        raise ValueError("inputs must have equal length")
    n = av.size
    n0 = n * (n - 1) // 2
    order = np.lexsort((bv, av))
    a_s = av[order]
    b_s = bv[order]
    tie_a = _tie_pairs(a_s)
    tie_b = _tie_pairs(np.sort(bv))
    tie_ab = _joint_tie_pairs(a_s, b_s)
    den_a = n0 - tie_a
    den_b = n0 - tie_b
    if den_a == 0 or den_b == 0:
        raise ValueError("kendall tau undefined for an all-tied vector")
    discordant = _merge_count_inversions(b_s)
    concordant_minus_discordant = n0 - tie_a - tie_b + tie_ab - 2 * discordant
    return concordant_minus_discordant / math.sqrt(den_a * den_b)

"""Independent brute-force oracles for the test suite.

Deliberately naive: counting loops, full sorts, O(n^2) pair enumeration, and
angle sweeps.  Nothing here shares code with the library paths under test.
"""

from __future__ import annotations

import math

import numpy as np


def halfspace_count_oracle(values, query) -> float:
    """Two-pass counting, ties on both sides."""
    le = sum(1 for v in values if v <= query)
    ge = sum(1 for v in values if v >= query)
    return min(le, ge) / len(values)


def sort_median_oracle(values) -> float:
    """Median via full sort; midpoint of central pair for even length."""
    s = sorted(values)
    n = len(s)
    if n % 2:
        return s[n // 2]
    return (s[n // 2 - 1] + s[n // 2]) / 2.0


def projection_depth_oracle(values, query) -> float:
    med = sort_median_oracle(values)
    mad = sort_median_oracle([abs(v - med) for v in values])
    dev = abs(query - med)
    if mad == 0.0:
        return 1.0 if dev == 0.0 else 0.0
    return 1.0 / (1.0 + dev / mad)


def asym_projection_depth_oracle(values, query) -> float:
    med = sort_median_oracle(values)
    dev = query - med
    if dev <= 0.0:
        return 1.0
    pos = [v - med for v in values if v - med > 0.0]
    if not pos:
        return 0.0
    return 1.0 / (1.0 + dev / sort_median_oracle(pos))


def kendall_tau_pairs_oracle(a, b) -> float:
    """Tau-b by explicit enumeration of all pairs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.size
    concordant = discordant = tie_a = tie_b = 0
    for i in range(n):
        for j in range(i + 1, n):
            da = a[i] - a[j]
            db = b[i] - b[j]
            if da == 0 and db == 0:
                continue
            if da == 0:
                tie_a += 1
            elif db == 0:
                tie_b += 1
            elif (da > 0) == (db > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    ta = sum(1 for i in range(n) for j in range(i + 1, n) if a[i] == a[j])
    tb = sum(1 for i in range(n) for j in range(i + 1, n) if b[i] == b[j])
    den_a = n0 - ta
    den_b = n0 - tb
    if den_a == 0 or den_b == 0:
        raise ValueError("undefined for constant input")
    return (concordant - discordant) / math.sqrt(den_a * den_b)


def spearman_rank_oracle(a, b) -> float:
    """Pearson of average ranks, ranks assigned by explicit tie groups."""

    def ranks(x):
        x = list(x)
        order = sorted(range(len(x)), key=lambda i: x[i])
        out = [0.0] * len(x)
        i = 0
        while i < len(x):
            j = i
            while j < len(x) and x[order[j]] == x[order[i]]:
                j += 1
            avg = (i + j - 1) / 2.0 + 1.0
            for t in range(i, j):
                out[order[t]] = avg
            i = j
        return np.array(out)

    ra = ranks(a)
    rb = ranks(b)
    ra -= ra.mean()
    rb -= rb.mean()
    va = float(ra @ ra)
    vb = float(rb @ rb)
    if va == 0 or vb == 0:
        raise ValueError("undefined for constant input")
    return float(ra @ rb) / math.sqrt(va * vb)


def exact_halfspace_depth_2d(z, points, boundary_tol=1e-9) -> float:
    """Exact bivariate halfspace depth by critical-angle enumeration.

    The univariate count as the direction rotates changes only at angles
    orthogonal to some x_i - z, so evaluating every such breakpoint plus the
    midpoints of consecutive breakpoints visits every piece of the count
    function.  Points within boundary_tol (relative) of the separating line
    are counted on both sides, matching the tie convention.
    """
    z = np.asarray(z, dtype=float)
    pts = np.asarray(points, dtype=float)
    diff = pts - z
    radii = np.hypot(diff[:, 0], diff[:, 1])
    nonzero = radii > 0
    at_z = int((~nonzero).sum())
    n = pts.shape[0]
    if at_z == n:
        return 1.0
    angles = np.arctan2(diff[nonzero, 1], diff[nonzero, 0])
    critical = np.concatenate([angles + np.pi / 2, angles - np.pi / 2])
    critical = np.mod(critical, 2 * np.pi)
    critical = np.unique(critical)
    mids = np.mod(
        (critical + np.roll(critical, -1)) / 2.0
        + np.where(np.roll(critical, -1) < critical, np.pi, 0.0),
        2 * np.pi,
    )
    cand = np.concatenate([critical, mids])
    dirs = np.stack([np.cos(cand), np.sin(cand)], axis=1)
    proj = diff[nonzero] @ dirs.T
    scale = np.abs(proj).max() if proj.size else 1.0
    tol = boundary_tol * max(scale, 1.0)
    le = (proj <= tol).sum(axis=0) + at_z
    ge = (proj >= -tol).sum(axis=0) + at_z
    return int(np.minimum(le, ge).min()) / n



"""Univariate depth kernels and the Mahalanobis baseline.

The three projected-sample depths share the conventions of the batch kernels
in _core (these scalar forms and the batch spans agree bit for bit):

* median: midpoint of the two central order statistics for even n;
* MAD = med(|y - med|); if MAD = 0 the depth degenerates to 1 at the median
  and 0 elsewhere (the limit of the formula);
* MAD+ = median of the strictly positive deviations above the median; with no
  mass above the median the depth is 1 at or below the median and 0 above.

Median extraction uses selection (np.partition / quickselect), not a full
sort, keeping the per-projection cost linear in n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ._core import backend
from .projection import DimensionMismatch
from .workpool import run_spans, span_bounds

NOTIONS = ("halfspace", "projection", "asym_projection")

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class ProjectedSample:
    """Projection scores of the dataset (values) and of the query point."""

    values: np.ndarray
    query: float

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "query", float(self.query))
        if values.size < 1:
            raise ValueError("empty projection")
        if not (np.isfinite(values).all() and np.isfinite(self.query)):
            raise ValueError("projected sample contains non-finite entries")


@dataclass(frozen=True)
class LocationScatter:
    """Location vector and symmetric positive-definite scatter matrix."""

    location: np.ndarray
    scatter: np.ndarray

    def __post_init__(self):
        loc = np.ascontiguousarray(self.location, dtype=np.float64).reshape(-1)
        sc = np.ascontiguousarray(self.scatter, dtype=np.float64)
        object.__setattr__(self, "location", loc)
        object.__setattr__(self, "scatter", sc)
        if sc.ndim != 2 or sc.shape[0] != sc.shape[1] or sc.shape[0] != loc.size:
            raise ValueError("scatter must be square and match the location")
        if not np.allclose(sc, sc.T, atol=SYMMETRY_TOL, rtol=0.0):
            raise ValueError("scatter not symmetric")
        try:
            np.linalg.cholesky(sc)
        except np.linalg.LinAlgError:
            raise ValueError("scatter not positive definite") from None


def _median(values: np.ndarray) -> float:
    n = values.size
    h = n // 2
    if n % 2:
        return float(np.partition(values, h)[h])
    part = np.partition(values, (h - 1, h))
    return float((part[h - 1] + part[h]) / 2.0)


def halfspace_depth_1d(s: ProjectedSample) -> float:
    """min(#{values <= query}, #{values >= query}) / n, ties on both sides."""
    cle = int(np.count_nonzero(s.values <= s.query))
    cge = int(np.count_nonzero(s.values >= s.query))
    return min(cle, cge) / s.values.size


def projection_depth_1d(s: ProjectedSample) -> float:
    """(1 + |query - med| / MAD)^-1 with the conventions above."""
    med = _median(s.values)
    mad = _median(np.abs(s.values - med))
    dev = abs(s.query - med)
    if mad == 0.0:
        return 1.0 if dev == 0.0 else 0.0
    return 1.0 / (1.0 + dev / mad)


def asym_projection_depth_1d(s: ProjectedSample) -> float:
    """(1 + (query - med)+ / MAD+)^-1; 1 whenever the query is at or below med."""
    med = _median(s.values)
    dev = s.query - med
    if dev <= 0.0:
        return 1.0
    deviations = s.values - med
    pos = deviations[deviations > 0.0]
    if pos.size == 0:
        return 0.0
    return 1.0 / (1.0 + dev / _median(pos))


def mahalanobis_depth(z, est: LocationScatter) -> float:
    """(1 + (z - mu)' Sigma^-1 (z - mu))^-1 via a Cholesky solve."""
    z = np.ascontiguousarray(z, dtype=np.float64).reshape(-1)
    if z.size != est.location.size:
        raise DimensionMismatch(
            f"query dimension {z.size} does not match location dimension "
            f"{est.location.size}"
        )
    diff = z - est.location
    try:
        factor = cho_factor(est.scatter, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("scatter not positive definite") from None
    q = float(diff @ cho_solve(factor, diff))
    return 1.0 / (1.0 + q)


def mahalanobis_depth_batch(queries, est: LocationScatter) -> np.ndarray:
    """Mahalanobis depth of each query row, one Cholesky solve for all."""
    q = np.atleast_2d(np.ascontiguousarray(queries, dtype=np.float64))
    if q.shape[1] != est.location.size:
        raise DimensionMismatch(
            f"query dimension {q.shape[1]} does not match location dimension "
            f"{est.location.size}"
        )
    diff = q - est.location
    try:
        factor = cho_factor(est.scatter, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("scatter not positive definite") from None
    forms = np.einsum("ij,ij->i", diff, cho_solve(factor, diff.T).T)
    return 1.0 / (1.0 + forms)


def estimate_mle(data) -> LocationScatter:
    """Column mean plus the maximum-likelihood scatter (1/n normalization)."""
    x = data.x if hasattr(data, "x") else np.asarray(data, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] <= 1:
        raise ValueError("need at least two observations to estimate scatter")
    mu = x.mean(axis=0)
    centered = x - mu
    sigma = centered.T @ centered / x.shape[0]
    return LocationScatter(location=mu, scatter=sigma)


_SPAN_KERNELS = {
    "halfspace": "halfspace_span",
    "projection": "projection_span",
    "asym_projection": "asym_projection_span",
}


def depth_of_projections(
    notion: str,
    px: np.ndarray,
    pz: np.ndarray,
    out: np.ndarray | None = None,
    *,
    workers: int = 1,
    block_size: int = 256,
) -> np.ndarray:
    """Univariate depths of pz[j] within px[j, :] for every direction j.

    Data-parallel over directions; results are independent of worker count.
    """
    if notion not in _SPAN_KERNELS:
        raise ValueError(f"unknown depth notion {notion!r}")
    if px.shape[1] < 1:
        raise ValueError("empty projection")
    kernel = getattr(backend, _SPAN_KERNELS[notion])
    if out is None:
        out = np.empty(px.shape[0])
    spans = span_bounds(px.shape[0], block_size, workers)
    run_spans(spans, lambda a, b: kernel(px, pz, out, a, b), workers)
    return out

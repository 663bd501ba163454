"""Center-outward ordering quality against the true density ordering.

Queries are sampled from the dataset itself; each depth notion ranks them, and
the ranking is compared with the known elliptical density ordering via
Spearman's rho and Kendall's tau-b.  The Mahalanobis baseline plugs in the
maximum-likelihood location/scatter estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..optimizer import RrsConfig, depth_batch
from ..projection import Dataset
from ..univariate import estimate_mle, mahalanobis_depth_batch
from .correlation import kendall_tau, spearman_rho
from .synthetic import generate, quadratic_forms

RRS_NOTIONS = ("halfspace", "projection", "asym_projection")


@dataclass(frozen=True)
class RankStudyResult:
    """Correlations of each depth ordering with the density ordering."""

    dim: int
    rows: tuple[dict, ...]
    depths: dict


def rank_study(
    data_spec,
    notions,
    query_count: int,
    cfg: RrsConfig,
    *,
    include_mahalanobis: bool = True,
) -> RankStudyResult:
    notions = list(notions)
    for notion in notions:
        if notion not in RRS_NOTIONS:
            raise ValueError(f"unknown depth notion {notion!r}")
    data = Dataset(generate(data_spec))
    if query_count > data.n:
        raise ValueError("query_count exceeds the dataset size")
    rng = np.random.Generator(
        np.random.Philox(key=(data_spec.seed ^ 0xD1B54A32D192ED03) % (1 << 64))
    )
    idx = np.sort(rng.choice(data.n, size=query_count, replace=False))
    queries = data.x[idx]

    # Density surrogate: the elliptical density is strictly decreasing in the
    # quadratic form, so its negative is rank-equivalent to the true pdf.
    pdf = -quadratic_forms(data_spec, queries)

    depths: dict[str, np.ndarray] = {}
    for notion in notions:
        cfg_n = replace(cfg, notion=notion)
        depths[notion] = np.array(
            [res.depth for res in depth_batch(queries, data, cfg_n)]
        )
    if include_mahalanobis:
        depths["mahalanobis"] = mahalanobis_depth_batch(queries, estimate_mle(data))

    rows = []
    for name, values in depths.items():
        rows.append(
            {
                "d": data.dim,
                "pair": f"pdf_x_{name}",
                "spearman": spearman_rho(pdf, values),
                "kendall": kendall_tau(pdf, values),
            }
        )
    if "projection" in depths and "asym_projection" in depths:
        rows.append(
            {
                "d": data.dim,
                "pair": "projection_x_asym_projection",
                "spearman": spearman_rho(depths["projection"], depths["asym_projection"]),
                "kendall": kendall_tau(depths["projection"], depths["asym_projection"]),
            }
        )
    return RankStudyResult(dim=data.dim, rows=tuple(rows), depths=depths)

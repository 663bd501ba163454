"""Convergence of the refined search against high-budget reference depths.

A query's reference depth is the minimum over several independent reference
runs at a budget strictly larger than anything on the grid.  Grid cells then
report per-point squared error against that reference; a point has converged
in a cell when its squared error is at most the tolerance (1e-4 unless stated
otherwise).

Reference run j uses seed base_seed + j, so a grid cell at the reference
settings with the base seed reproduces reference run 0 exactly (zero error
when a single reference repeat is used).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..optimizer import RrsConfig, depth_batch
from ..projection import Dataset, ParallelConfig
from .synthetic import generate


@dataclass(frozen=True)
class ReferenceSpec:
    """High-budget reference: directions, refinements, shrink, repeats."""

    k: int
    r: int
    alpha: float = 0.9
    repeats: int = 3

    def __post_init__(self):
        if self.k < self.r or self.r < 1 or self.repeats < 1:
            raise ValueError("invalid reference budget")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("shrink factor must lie in (0, 1)")


@dataclass(frozen=True)
class StudyGrid:
    alphas: tuple[float, ...]
    refinement_counts: tuple[int, ...]
    direction_counts: tuple[int, ...]
    dims: tuple[int, ...]
    query_count: int
    reference: ReferenceSpec

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "refinement_counts", tuple(self.refinement_counts))
        object.__setattr__(self, "direction_counts", tuple(self.direction_counts))
        object.__setattr__(self, "dims", tuple(self.dims))
        for name in ("alphas", "refinement_counts", "direction_counts", "dims"):
            if not getattr(self, name):
                raise ValueError(f"grid axis {name} is empty")
        if self.query_count < 1:
            raise ValueError("query_count must be positive")
        if self.reference.k <= max(self.direction_counts):
            raise ValueError("reference budget must strictly exceed grid budgets")


def _pick_queries(data: Dataset, count: int, seed: int) -> np.ndarray:
    if count > data.n:
        raise ValueError("query_count exceeds the dataset size")
    rng = np.random.Generator(np.random.Philox(key=(seed ^ 0x9E3779B97F4A7C15) % (1 << 64)))
    idx = rng.choice(data.n, size=count, replace=False)
    return data.x[np.sort(idx)]


def _cfg(notion: str, k: int, r: int, alpha: float, seed: int, workers: int) -> RrsConfig:
    return RrsConfig(
        total_directions=k,
        refinements=r,
        shrink=alpha,
        notion=notion,
        seed=seed,
        parallel=ParallelConfig(workers=workers),
    )


def reference_depths(
    queries: np.ndarray,
    data: Dataset,
    notion: str,
    ref: ReferenceSpec,
    seed: int,
    workers: int,
) -> np.ndarray:
    """Per-query minimum over `repeats` independent reference runs."""
    best = np.full(len(queries), np.inf)
    for rep in range(ref.repeats):
        cfg = _cfg(notion, ref.k, ref.r, ref.alpha, seed + rep, workers)
        depths = np.array([r.depth for r in depth_batch(queries, data, cfg)])
        best = np.minimum(best, depths)
    return best


@dataclass(frozen=True)
class ConvergenceResult:
    """Long-form per-point squared errors plus per-cell means."""

    rows: tuple[dict, ...]
    cell_means: tuple[dict, ...]
    references: np.ndarray


def convergence_study(
    grid: StudyGrid,
    notion: str,
    data: Dataset,
    *,
    seed: int = 0,
    workers: int | None = None,
) -> ConvergenceResult:
    """Squared error against the reference for every grid cell and point."""
    if workers is None:
        workers = ParallelConfig().workers
    queries = _pick_queries(data, grid.query_count, seed)
    refs = reference_depths(queries, data, notion, grid.reference, seed, workers)

    rows: list[dict] = []
    means: list[dict] = []
    d = data.dim
    for alpha in grid.alphas:
        for r in grid.refinement_counts:
            for k in grid.direction_counts:
                cfg = _cfg(notion, k, r, alpha, seed, workers)
                depths = np.array(
                    [res.depth for res in depth_batch(queries, data, cfg)]
                )
                errs = (depths - refs) ** 2
                for pid, err in enumerate(errs):
                    rows.append(
                        {
                            "alpha": alpha,
                            "r": r,
                            "k": k,
                            "d": d,
                            "point_id": pid,
                            "mse": float(err),
                        }
                    )
                means.append(
                    {
                        "alpha": alpha,
                        "r": r,
                        "k": k,
                        "d": d,
                        "mean_mse": float(errs.mean()),
                    }
                )
    return ConvergenceResult(
        rows=tuple(rows), cell_means=tuple(means), references=refs
    )


@dataclass(frozen=True)
class FrontierResult:
    rows: tuple[dict, ...]


def convergence_frontier(
    grid: StudyGrid,
    notion: str,
    base_spec,
    tol: float = 1e-4,
    *,
    seed: int = 0,
    workers: int | None = None,
) -> FrontierResult:
    """Minimal refinements for convergence per (dimension, direction count).

    For each cell: the smallest grid r at which every point's squared error is
    at most tol, plus the mean over points of each point's own minimal r.
    Cells where some point never converges are recorded, not errors.
    """
    if len(grid.alphas) != 1:
        raise ValueError("the frontier sweeps (d, k, r) at a single alpha")
    alpha = grid.alphas[0]
    if workers is None:
        workers = ParallelConfig().workers

    rows: list[dict] = []
    for d in grid.dims:
        spec_d = replace(base_spec, dim=d)
        data = Dataset(generate(spec_d))
        queries = _pick_queries(data, grid.query_count, seed)
        refs = reference_depths(queries, data, notion, grid.reference, seed, workers)
        for k in grid.direction_counts:
            errs = np.empty((len(grid.refinement_counts), len(queries)))
            for ri, r in enumerate(sorted(grid.refinement_counts)):
                cfg = _cfg(notion, k, r, alpha, seed, workers)
                depths = np.array(
                    [res.depth for res in depth_batch(queries, data, cfg)]
                )
                errs[ri] = (depths - refs) ** 2
            r_values = np.array(sorted(grid.refinement_counts))
            converged = errs <= tol
            all_idx = np.flatnonzero(converged.all(axis=1))
            min_r_all = int(r_values[all_idx[0]]) if all_idx.size else None
            point_first = [
                int(r_values[np.flatnonzero(converged[:, q])[0]])
                if converged[:, q].any()
                else None
                for q in range(len(queries))
            ]
            reached = [v for v in point_first if v is not None]
            rows.append(
                {
                    "d": d,
                    "k": k,
                    "min_r": min_r_all,
                    "all_converged": min_r_all is not None,
                    "mean_point_min_r": float(np.mean(reached)) if reached else None,
                    "converged_points": len(reached),
                    "query_count": len(queries),
                }
            )
    return FrontierResult(rows=tuple(rows))

"""Depth minimization over the unit sphere by refined random search.

Each refinement draws m = ceil(k/r) directions inside a spherical cap around
the current pole, projects the dataset and the query onto all of them, takes
the refinement's minimal univariate depth, moves the pole to its direction if
it improves the incumbent (strict inequality; ties keep the incumbent), and
shrinks the cap half-angle by the factor alpha.  The first refinement searches
the hemisphere around e1 (half-angle pi/2), which suffices because the
univariate depth of an antipodal projection is unchanged.

Refinements are inherently sequential; generation, projection, and univariate
evaluation inside one refinement are data-parallel over directions, and batch
queries run concurrently on per-query substreams.  Results are bit-identical
for a given (inputs, config, seed) at any worker count.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import directions
from .projection import (
    Dataset,
    DimensionMismatch,
    ParallelConfig,
    _project_into,
    _project_point_into,
)
from .univariate import NOTIONS, depth_of_projections
from .workpool import get_executor

HALF_PI = math.pi / 2.0

POLE_UPDATE_MODES = ("per_refinement", "per_direction")


@dataclass(frozen=True)
class RrsConfig:
    """Search budget and execution limits for refined random search."""

    total_directions: int = 100_000
    refinements: int = 40
    shrink: float = 0.9
    notion: str = "projection"
    seed: int = 0
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    pole_update: str = "per_refinement"

    def __post_init__(self):
        if self.refinements < 1 or self.total_directions < self.refinements:
            raise ValueError("need total_directions >= refinements >= 1")
        if not (0.0 < self.shrink < 1.0):
            raise ValueError("shrink factor must lie in (0, 1)")
        if self.notion not in NOTIONS:
            raise ValueError(f"unknown depth notion {self.notion!r}")
        if self.pole_update not in POLE_UPDATE_MODES:
            raise ValueError(f"unknown pole update mode {self.pole_update!r}")

    @property
    def directions_per_refinement(self) -> int:
        return -(-self.total_directions // self.refinements)


@dataclass(frozen=True)
class RefinementRecord:
    """One refinement: running best depth, cap half-angle used, pole after update."""

    best_depth: float
    epsilon: float
    pole: np.ndarray


@dataclass(frozen=True)
class DepthResult:
    depth: float
    argmin_direction: np.ndarray
    trace: tuple[RefinementRecord, ...]
    directions_used: int


class PhaseTimer:
    """Accumulates wall time per phase (generation/projection/univariate)."""

    def __init__(self):
        self.seconds = {"generation": 0.0, "projection": 0.0, "univariate": 0.0}
        self._lock = threading.Lock()

    def add(self, phase: str, dt: float) -> None:
        with self._lock:
            self.seconds[phase] += dt


def evaluate_directions(
    z: np.ndarray,
    data: Dataset,
    dirs,
    notion: str,
    cfg: ParallelConfig,
    *,
    naive: bool = False,
    timer: PhaseTimer | None = None,
    _buffers=None,
) -> np.ndarray:
    """Univariate depths of z against data over an injected direction batch.

    The body of one refinement: project X and z onto all directions, then
    evaluate the chosen univariate notion per direction.
    """
    u = getattr(dirs, "directions", dirs)
    m = u.shape[0]
    if _buffers is None:
        px = np.empty((m, data.n))
        pz = np.empty(m)
        out = np.empty(m)
    else:
        px, pz, out = _buffers

    t0 = time.perf_counter()
    if naive:
        from ._core import backend

        backend.proj_naive(data.x, u, px)
    else:
        _project_into(data.xt, u, px, cfg)
    _project_point_into(z, u, pz, cfg)
    t1 = time.perf_counter()

    workers = 1 if naive else cfg.workers
    depth_of_projections(
        notion, px, pz, out, workers=workers, block_size=cfg.block_size
    )
    t2 = time.perf_counter()

    if timer is not None:
        timer.add("projection", t1 - t0)
        timer.add("univariate", t2 - t1)
    return out


def refined_random_search(
    z,
    data: Dataset,
    cfg: RrsConfig,
    *,
    query_index: int = 0,
    timer: PhaseTimer | None = None,
    naive_projection: bool = False,
) -> DepthResult:
    """Minimize the univariate depth of z over directions, per the cap-shrink
    schedule; returns the minimal depth, its direction, and the trace."""
    z = np.ascontiguousarray(z, dtype=np.float64).reshape(-1)
    if z.size != data.dim:
        raise DimensionMismatch(
            f"query dimension {z.size} does not match data dimension {data.dim}"
        )
    d = data.dim
    m = cfg.directions_per_refinement

    pole = np.zeros(d)
    pole[0] = 1.0
    d_min = 1.0
    argmin = pole.copy()
    trace: list[RefinementRecord] = []

    px = np.empty((m, data.n))
    pz = np.empty(m)
    depths = np.empty(m)

    for l in range(cfg.refinements):
        eps = HALF_PI * cfg.shrink**l

        t0 = time.perf_counter()
        batch = directions.generate_batch(
            directions.CapSpec(pole=directions.Pole(pole), epsilon=eps),
            m,
            cfg.seed,
            refinement=l,
            query=query_index,
        )
        t1 = time.perf_counter()
        if timer is not None:
            timer.add("generation", t1 - t0)

        evaluate_directions(
            z,
            data,
            batch,
            cfg.notion,
            cfg.parallel,
            naive=naive_projection,
            timer=timer,
            _buffers=(px, pz, depths),
        )

        if cfg.pole_update == "per_refinement":
            j = int(np.argmin(depths))
            if depths[j] < d_min:
                d_min = float(depths[j])
                pole = batch.directions[j].copy()
                argmin = pole
        else:
            # Immediate updates: the pole ends at the last strictly improving
            # direction of the scan, not necessarily the refinement argmin.
            running = np.minimum.accumulate(depths)
            prev_best = np.empty_like(depths)
            prev_best[0] = d_min
            np.minimum(d_min, running[:-1], out=prev_best[1:])
            improving = np.flatnonzero(depths < prev_best)
            if improving.size:
                j = int(improving[-1])
                d_min = float(min(d_min, running[-1]))
                pole = batch.directions[j].copy()
                argmin = pole
        trace.append(RefinementRecord(best_depth=d_min, epsilon=eps, pole=pole))

    return DepthResult(
        depth=d_min,
        argmin_direction=argmin,
        trace=tuple(trace),
        directions_used=m * cfg.refinements,
    )


def simple_random_search(z, data: Dataset, k: int, notion: str, seed: int,
                         parallel: ParallelConfig | None = None) -> DepthResult:
    """Depth over k hemisphere-uniform directions: refined search with r = 1."""
    cfg = RrsConfig(
        total_directions=k,
        refinements=1,
        shrink=0.5,
        notion=notion,
        seed=seed,
        parallel=parallel if parallel is not None else ParallelConfig(),
    )
    return refined_random_search(z, data, cfg)


def pole_update_rule(
    current: tuple[float, np.ndarray], candidate: tuple[float, np.ndarray]
) -> tuple[float, np.ndarray]:
    """Strict-improvement update; equal depth keeps the incumbent pole."""
    d_min, pole = current
    d_new, u_new = candidate
    if d_new < d_min:
        return d_new, u_new
    return d_min, pole


def depth_batch(queries, data: Dataset, cfg: RrsConfig) -> list[DepthResult]:
    """Refined search per query on substreams keyed by the query position.

    Queries run concurrently (kernels drop to one worker each); element i is
    bit-identical to refined_random_search(queries[i], ..., query_index=i).
    """
    qs = [np.ascontiguousarray(q, dtype=np.float64).reshape(-1) for q in queries]
    for i, q in enumerate(qs):
        if q.size != data.dim:
            raise DimensionMismatch(
                f"query {i} has dimension {q.size}, expected {data.dim}"
            )
    workers = cfg.parallel.workers
    if workers <= 1 or len(qs) <= 1:
        return [
            refined_random_search(q, data, cfg, query_index=i)
            for i, q in enumerate(qs)
        ]
    inner = replace(cfg, parallel=replace(cfg.parallel, workers=1))
    _ = data.xt  # materialize the transpose before the threads race to build it
    pool = get_executor(workers)
    futures = [
        pool.submit(refined_random_search, q, data, inner, query_index=i)
        for i, q in enumerate(qs)
    ]
    return [f.result() for f in futures]

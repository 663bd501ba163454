"""Phase-breakdown and runtime-grid measurements of the depth pipeline.

Timing protocol: monotonic clock, one discarded warm-up run, at least five
measured repeats per cell.  The reported numbers come from the median run
(selected by total time), so a profile's phases and total are mutually
consistent: the phase fractions of one real execution always sum to at most 1,
the remainder being orchestration overhead.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..optimizer import PhaseTimer, RrsConfig, refined_random_search
from ..perfmodel import TimingProfile, Workload
from ..projection import Dataset, ParallelConfig
from .synthetic import ToeplitzGaussianSpec, gen_toeplitz_gaussian

PHASES = ("generation", "projection", "univariate")


def _bench_case(workload: Workload, seed: int) -> tuple[Dataset, np.ndarray]:
    spec = ToeplitzGaussianSpec(dim=workload.d, n=workload.n, seed=seed)
    data = Dataset(gen_toeplitz_gaussian(spec))
    rng = np.random.Generator(np.random.Philox(key=(seed + 1) % (1 << 64)))
    query = data.x[int(rng.integers(data.n))]
    return data, query


def breakdown_bench(
    workloads,
    notion: str,
    path: str = "sequential",
    *,
    seed: int = 0,
    repeats: int = 5,
    warmup: int = 1,
) -> list[TimingProfile]:
    """Per-phase wall times for each workload on the chosen execution path."""
    if path not in ("sequential", "parallel"):
        raise ValueError(f"unknown path {path!r}")
    if repeats < 1:
        raise ValueError("need at least one repeat")
    profiles = []
    for idx, workload in enumerate(workloads):
        data, query = _bench_case(workload, seed + idx)
        workers = 1 if path == "sequential" else workload.g
        cfg = RrsConfig(
            total_directions=workload.k,
            refinements=workload.r,
            shrink=0.9,
            notion=notion,
            seed=seed + idx,
            parallel=ParallelConfig(workers=workers, d_chunk=workload.d_chunk),
        )
        runs = []
        for rep in range(warmup + repeats):
            timer = PhaseTimer()
            t0 = time.perf_counter()
            refined_random_search(
                query,
                data,
                cfg,
                timer=timer,
                naive_projection=(path == "sequential"),
            )
            total = time.perf_counter() - t0
            if rep >= warmup:
                runs.append((total, dict(timer.seconds)))
        runs.sort(key=lambda item: item[0])
        total, phases = runs[(len(runs) - 1) // 2]
        profiles.append(
            TimingProfile(
                workload=workload,
                generation=phases["generation"],
                projection=phases["projection"],
                univariate=phases["univariate"],
                total=total,
                path=path,
            )
        )
    return profiles


def profile_rows(profiles) -> list[dict]:
    """Long-form rows (one per phase) for CSV emission."""
    rows = []
    for p in profiles:
        w = p.workload
        for phase in PHASES:
            seconds = getattr(p, phase)
            rows.append(
                {
                    "n": w.n,
                    "d": w.d,
                    "k": w.k,
                    "r": w.r,
                    "m": w.m,
                    "g": w.g,
                    "lambda": w.lam,
                    "d_chunk": w.d_chunk,
                    "depth_work": w.depth_units,
                    "path": p.path,
                    "phase": phase,
                    "seconds": seconds,
                    "fraction": seconds / p.total if p.total > 0 else 0.0,
                    "total": p.total,
                }
            )
    return rows


def profiles_from_rows(rows) -> list[TimingProfile]:
    """Rebuild TimingProfiles from long-form rows (inverse of profile_rows).

    Rows are grouped positionally (a profile's three phase rows are emitted
    consecutively), so repeated identical profiles survive the round trip.
    """

    def row_key(row):
        return (
            int(row["n"]), int(row["d"]), int(row["k"]), int(row["r"]),
            int(row["g"]), float(row["lambda"]), int(row["d_chunk"]),
            float(row["depth_work"]), row["path"], float(row["total"]),
        )

    def flush(key, phases):
        missing = [p for p in PHASES if p not in phases]
        if missing:
            raise ValueError(f"profile is missing phase rows: {missing}")
        n, d, k, r, g, lam, d_chunk, depth_work, path, total = key
        workload = Workload(
            n=n, d=d, k=k, r=r, depth_work=depth_work, g=g, lam=lam,
            d_chunk=d_chunk,
        )
        return TimingProfile(
            workload=workload,
            generation=phases["generation"],
            projection=phases["projection"],
            univariate=phases["univariate"],
            total=total,
            path=path,
        )

    profiles = []
    current_key = None
    current_phases: dict[str, float] = {}
    for row in rows:
        key = row_key(row)
        if current_key is None:
            current_key = key
        elif key != current_key or row["phase"] in current_phases:
            profiles.append(flush(current_key, current_phases))
            current_key = key
            current_phases = {}
        current_phases[row["phase"]] = float(row["seconds"])
    if current_key is not None:
        profiles.append(flush(current_key, current_phases))
    return profiles


@dataclass(frozen=True)
class RuntimeGridResult:
    rows: tuple[dict, ...]


def runtime_grid(
    dims,
    directions,
    n: int,
    r: int,
    notion: str,
    *,
    seed: int = 0,
    repeats: int = 5,
    warmup: int = 1,
    workers: int | None = None,
) -> RuntimeGridResult:
    """Median wall time per (dimension, direction-count) cell."""
    if repeats < 1:
        raise ValueError("need at least one repeat")
    cfg_workers = workers if workers is not None else ParallelConfig().workers
    rows = []
    for d in dims:
        workload0 = Workload(n=n, d=d, k=max(directions), r=r)
        data, query = _bench_case(workload0, seed + d)
        for k in directions:
            cfg = RrsConfig(
                total_directions=k,
                refinements=r,
                shrink=0.9,
                notion=notion,
                seed=seed,
                parallel=ParallelConfig(workers=cfg_workers),
            )
            times = []
            for rep in range(warmup + repeats):
                t0 = time.perf_counter()
                refined_random_search(query, data, cfg)
                dt = time.perf_counter() - t0
                if rep >= warmup:
                    times.append(dt)
            rows.append(
                {
                    "d": d,
                    "k": k,
                    "n": n,
                    "r": r,
                    "notion": notion,
                    "seconds": float(np.median(times)),
                }
            )
    return RuntimeGridResult(rows=tuple(rows))

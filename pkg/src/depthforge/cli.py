"""Command-line interface.

Commands: depth, gen, bench breakdown, bench grid, study converge,
study frontier, study rank, fit-model.  Flag precedence is CLI flag, then
environment (DEPTHFORGE_WORKERS, DEPTHFORGE_SEED), then config file, then
built-in defaults.  stdout carries data (JSON or file manifests); stderr
carries diagnostics.  Exit codes: 2 bad flags, 3 malformed data, 4 dimension
mismatch, 5 unwritable output directory, 6 rank-deficient fit design.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from ._core import backend_name
from .optimizer import RrsConfig, depth_batch
from .perfmodel import (
    RankDeficientDesign,
    Workload,
    fit_constants,
    speedup_plateau,
)
from .projection import Dataset, DimensionMismatch, ParallelConfig
from .study import (
    ExponentialSpec,
    ReferenceSpec,
    StudentTSpec,
    StudyGrid,
    ToeplitzGaussianSpec,
    breakdown_bench,
    convergence_frontier,
    convergence_study,
    generate,
    profile_rows,
    profiles_from_rows,
    rank_study,
    runtime_grid,
)
from .univariate import estimate_mle, mahalanobis_depth_batch
from .workpool import default_workers

EXIT_BAD_FLAGS = 2
EXIT_BAD_DATA = 3
EXIT_DIM_MISMATCH = 4
EXIT_UNWRITABLE = 5
EXIT_RANK_DEFICIENT = 6

NOTION_FLAGS = {
    "halfspace": "halfspace",
    "projection": "projection",
    "asymprojection": "asym_projection",
    "mahalanobis": "mahalanobis",
}


def _env_seed() -> int:
    raw = os.environ.get("DEPTHFORGE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def _parallel(args) -> ParallelConfig:
    workers = args.workers if args.workers is not None else default_workers()
    d_chunk = getattr(args, "d_chunk", None) or 256
    return ParallelConfig(workers=workers, d_chunk=d_chunk)


def _dist_spec(dist: str, d: int, n: int, seed: int, nu: float | None):
    if dist == "gaussian":
        return ToeplitzGaussianSpec(dim=d, n=n, seed=seed)
    if dist == "student":
        if nu is None:
            raise ValueError("--nu is required for the student distribution")
        return StudentTSpec(dim=d, n=n, nu=nu, seed=seed)
    if dist == "exponential":
        return ExponentialSpec(dim=d, n=n, seed=seed)
    raise ValueError(f"unknown distribution {dist!r}")


def _ensure_out_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"output directory not writable: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_UNWRITABLE) from None
    return out


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# depth
# ---------------------------------------------------------------------------


def cmd_depth(args) -> int:
    notion = NOTION_FLAGS[args.notion]
    data = Dataset(io.read_matrix(args.data))
    if args.query_inline is not None:
        try:
            queries = np.array([[float(v) for v in args.query_inline.split(",")]])
        except ValueError:
            print("malformed --query-inline vector", file=sys.stderr)
            return EXIT_BAD_DATA
    else:
        queries = np.atleast_2d(io.read_matrix(args.query))
    if queries.shape[1] != data.dim:
        raise DimensionMismatch(
            f"query dimension {queries.shape[1]} does not match data dimension "
            f"{data.dim}"
        )

    payload = {
        "backend": backend_name(),
        "notion": args.notion,
        "data": str(args.data),
        "query_count": int(queries.shape[0]),
    }
    if notion == "mahalanobis":
        est = estimate_mle(data)
        depths = mahalanobis_depth_batch(queries, est)
        payload["results"] = [{"depth": float(v)} for v in depths]
    else:
        cfg = RrsConfig(
            total_directions=args.k,
            refinements=args.r,
            shrink=args.alpha,
            notion=notion,
            seed=args.seed,
            parallel=_parallel(args),
        )
        payload.update({"k": args.k, "r": args.r, "alpha": args.alpha,
                        "seed": args.seed})
        results = depth_batch(queries, data, cfg)
        out = []
        for res in results:
            entry = {
                "depth": res.depth,
                "argmin_direction": [float(v) for v in res.argmin_direction],
                "directions_used": res.directions_used,
            }
            if args.trace:
                entry["trace"] = [
                    {
                        "best_depth": rec.best_depth,
                        "epsilon": rec.epsilon,
                        "pole": [float(v) for v in rec.pole],
                    }
                    for rec in res.trace
                ]
            out.append(entry)
        payload["results"] = out
    _print_json(payload)
    return 0


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = _dist_spec(args.dist, args.d, args.n, args.seed, args.nu)
    matrix = generate(spec)
    io.write_matrix(args.out, matrix)
    _print_json({"out": str(args.out), "n": args.n, "d": args.d,
                 "dist": args.dist, "seed": args.seed})
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def cmd_bench_breakdown(args) -> int:
    out = _ensure_out_dir(args.out)
    notion = NOTION_FLAGS[args.notion]
    if notion == "mahalanobis":
        raise ValueError("breakdown benchmarks cover the projected notions only")
    workers = args.workers if args.workers is not None else default_workers()
    workloads = [
        Workload(n=args.n, d=d, k=k, r=args.r, g=workers, lam=args.lam,
                 d_chunk=args.d_chunk)
        for d in args.dims
        for k in args.directions
    ]
    profiles = breakdown_bench(
        workloads, notion, args.path, seed=args.seed, repeats=args.repeats
    )
    rows = profile_rows(profiles)
    csv_path = out / "breakdown.csv"
    io.write_rows_csv(csv_path, rows)
    summary = {
        "csv": str(csv_path),
        "path": args.path,
        "notion": args.notion,
        "cells": len(profiles),
        "repeats": args.repeats,
        "backend": backend_name(),
    }
    io.write_json(out / "breakdown_summary.json", summary)
    _print_json(summary)
    return 0


def cmd_bench_grid(args) -> int:
    out = _ensure_out_dir(args.out)
    notion = NOTION_FLAGS[args.notion]
    if notion == "mahalanobis":
        raise ValueError("grid benchmarks cover the projected notions only")
    result = runtime_grid(
        args.dims,
        args.directions,
        args.n,
        args.r,
        notion,
        seed=args.seed,
        repeats=args.repeats,
        workers=args.workers,
    )
    csv_path = out / "grid.csv"
    io.write_rows_csv(csv_path, result.rows)
    summary = {
        "csv": str(csv_path),
        "notion": args.notion,
        "cells": len(result.rows),
        "repeats": args.repeats,
        "backend": backend_name(),
    }
    io.write_json(out / "grid_summary.json", summary)
    _print_json(summary)
    return 0


# ---------------------------------------------------------------------------
# study
# ---------------------------------------------------------------------------

_DESK_CONVERGE = {
    "alphas": "0.6,0.9",
    "refinements": "25",
    "directions": "5000,20000,50000",
    "d": "10",
    "n": "5000",
    "queries": "20",
    "ref_k": "100000",
    "ref_r": "50",
    "ref_alpha": "0.9",
    "ref_repeats": "3",
    "notion": "projection",
    "dist": "gaussian",
}

_FULL_CONVERGE = {
    "alphas": "0.6,0.7,0.8,0.9",
    "refinements": "25,30,35",
    "directions": "200,1000,5000,20000,50000,90000",
    "d": "50",
    "n": "50000",
    "queries": "50",
    "ref_k": "3000000",
    "ref_r": "100",
    "ref_alpha": "0.9",
    "ref_repeats": "3",
    "notion": "projection",
    "dist": "gaussian",
}

_DESK_FRONTIER = {
    "alphas": "0.9",
    "refinements": "2,5,10,20,40",
    "directions": "2000,10000,30000",
    "dims": "5,10,25",
    "n": "2000",
    "queries": "10",
    "ref_k": "100000",
    "ref_r": "60",
    "ref_alpha": "0.9",
    "ref_repeats": "3",
    "tol": "1e-4",
    "notion": "projection",
    "dist": "gaussian",
}

_FULL_FRONTIER = {
    "alphas": "0.9",
    "refinements": "10,25,50,75,100,135,175",
    "directions": "200,1000,5000,20000,50000,100000",
    "dims": "5,25,50,100,175",
    "n": "10000",
    "queries": "50",
    "ref_k": "300000",
    "ref_r": "175",
    "ref_alpha": "0.9",
    "ref_repeats": "3",
    "tol": "1e-4",
    "notion": "projection",
    "dist": "gaussian",
}

_DESK_RANK = {
    "d": "5",
    "n": "10000",
    "queries": "500",
    "k": "20000",
    "r": "40",
    "alpha": "0.9",
    "dist": "gaussian",
    "notions": "projection,asym_projection",
}

_FULL_RANK = {
    "d": "50",
    "n": "100000",
    "queries": "5000",
    "k": "100000",
    "r": "40",
    "alpha": "0.9",
    "dist": "gaussian",
    "notions": "projection,asym_projection",
}


def _study_settings(args, desk: dict, full: dict) -> dict:
    settings = dict(full if args.full else desk)
    if args.config:
        settings.update(io.parse_config(args.config))
    return settings


def cmd_study_converge(args) -> int:
    out = _ensure_out_dir(args.out)
    s = _study_settings(args, _DESK_CONVERGE, _FULL_CONVERGE)
    try:
        grid = StudyGrid(
            alphas=io.parse_list(s["alphas"], float),
            refinement_counts=io.parse_list(s["refinements"], int),
            direction_counts=io.parse_list(s["directions"], int),
            dims=(int(s["d"]),),
            query_count=int(s["queries"]),
            reference=ReferenceSpec(
                k=int(s["ref_k"]),
                r=int(s["ref_r"]),
                alpha=float(s["ref_alpha"]),
                repeats=int(s["ref_repeats"]),
            ),
        )
    except (KeyError, ValueError) as exc:
        print(f"invalid convergence grid: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    spec = _dist_spec(s["dist"], int(s["d"]), int(s["n"]), args.seed, None)
    data = Dataset(generate(spec))
    result = convergence_study(
        grid, s["notion"], data, seed=args.seed, workers=args.workers
    )
    io.write_rows_csv(out / "converge.csv", result.rows)
    io.write_rows_csv(out / "converge_means.csv", result.cell_means)
    summary = {
        "csv": str(out / "converge.csv"),
        "means_csv": str(out / "converge_means.csv"),
        "cells": len(result.cell_means),
        "queries": grid.query_count,
        "notion": s["notion"],
    }
    io.write_json(out / "converge_summary.json", summary)
    _print_json(summary)
    return 0


def cmd_study_frontier(args) -> int:
    out = _ensure_out_dir(args.out)
    s = _study_settings(args, _DESK_FRONTIER, _FULL_FRONTIER)
    try:
        grid = StudyGrid(
            alphas=io.parse_list(s["alphas"], float),
            refinement_counts=io.parse_list(s["refinements"], int),
            direction_counts=io.parse_list(s["directions"], int),
            dims=io.parse_list(s["dims"], int),
            query_count=int(s["queries"]),
            reference=ReferenceSpec(
                k=int(s["ref_k"]),
                r=int(s["ref_r"]),
                alpha=float(s["ref_alpha"]),
                repeats=int(s["ref_repeats"]),
            ),
        )
    except (KeyError, ValueError) as exc:
        print(f"invalid frontier grid: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    tol = args.tol if args.tol is not None else float(s.get("tol", "1e-4"))
    base_spec = _dist_spec(
        s["dist"], grid.dims[0], int(s["n"]), args.seed, None
    )
    result = convergence_frontier(
        grid, s["notion"], base_spec, tol, seed=args.seed, workers=args.workers
    )
    io.write_rows_csv(
        out / "frontier.csv",
        result.rows,
        fieldnames=[
            "d", "k", "min_r", "all_converged", "mean_point_min_r",
            "converged_points", "query_count",
        ],
    )
    summary = {
        "csv": str(out / "frontier.csv"),
        "tol": tol,
        "cells": len(result.rows),
        "notion": s["notion"],
    }
    io.write_json(out / "frontier_summary.json", summary)
    _print_json(summary)
    return 0


def cmd_study_rank(args) -> int:
    out = _ensure_out_dir(args.out)
    s = _study_settings(args, _DESK_RANK, _FULL_RANK)
    d = args.d if args.d is not None else int(s["d"])
    dist = args.dist if args.dist is not None else s["dist"]
    spec = _dist_spec(dist, d, int(s["n"]), args.seed, args.nu)
    cfg = RrsConfig(
        total_directions=int(s["k"]),
        refinements=int(s["r"]),
        shrink=float(s["alpha"]),
        notion="projection",
        seed=args.seed,
        parallel=_parallel(args),
    )
    notions = io.parse_list(s["notions"], str)
    result = rank_study(spec, notions, int(s["queries"]), cfg)
    io.write_rows_csv(out / "rank.csv", result.rows)
    summary = {
        "csv": str(out / "rank.csv"),
        "d": d,
        "dist": dist,
        "queries": int(s["queries"]),
        "pairs": len(result.rows),
    }
    io.write_json(out / "rank_summary.json", summary)
    _print_json(summary)
    return 0


# ---------------------------------------------------------------------------
# fit-model
# ---------------------------------------------------------------------------

_REQUIRED_PROFILE_COLUMNS = (
    "n", "d", "k", "r", "g", "lambda", "d_chunk", "depth_work",
    "path", "phase", "seconds", "total",
)


def cmd_fit_model(args) -> int:
    rows = io.read_rows_csv(args.profiles)
    if not rows:
        print(f"{args.profiles}: no profile rows", file=sys.stderr)
        return EXIT_BAD_DATA
    missing = [c for c in _REQUIRED_PROFILE_COLUMNS if c not in rows[0]]
    if missing:
        print(
            f"{args.profiles}: missing profile columns: {', '.join(missing)}",
            file=sys.stderr,
        )
        return EXIT_BAD_DATA
    profiles = profiles_from_rows(rows)
    report = fit_constants(profiles)
    payload = json.loads(report.to_json())
    if args.predict:
        constants = report.constants
        payload["predict"] = {
            "g": args.g,
            "lambda": args.lam,
            "d": args.d,
            "d_chunk": args.d_chunk,
            "plateau": speedup_plateau(
                constants, args.d, args.d_chunk, args.g, args.lam
            ),
        }
    _print_json(payload)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _csv_ints(text: str) -> list[int]:
    return io.parse_list(text, int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depthforge",
        description="Projection-based data depth via refined random search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_depth = sub.add_parser("depth", help="compute depth of query point(s)")
    p_depth.add_argument("--data", required=True)
    group = p_depth.add_mutually_exclusive_group(required=True)
    group.add_argument("--query")
    group.add_argument("--query-inline")
    p_depth.add_argument("--notion", choices=sorted(NOTION_FLAGS), required=True)
    p_depth.add_argument("--k", type=int, default=20_000)
    p_depth.add_argument("--r", type=int, default=40)
    p_depth.add_argument("--alpha", type=float, default=0.9)
    p_depth.add_argument("--seed", type=int, default=_env_seed())
    p_depth.add_argument("--workers", type=int, default=None)
    p_depth.add_argument("--d-chunk", dest="d_chunk", type=int, default=None)
    p_depth.add_argument("--trace", action="store_true")
    p_depth.set_defaults(func=cmd_depth)

    p_gen = sub.add_parser("gen", help="write a synthetic dataset")
    p_gen.add_argument("--dist", choices=["gaussian", "student", "exponential"],
                       default="gaussian")
    p_gen.add_argument("--d", type=int, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--nu", type=float, default=None)
    p_gen.add_argument("--seed", type=int, default=_env_seed())
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="timing benchmarks")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)

    p_bd = bench_sub.add_parser("breakdown", help="per-phase time breakdown")
    p_bd.add_argument("--path", choices=["sequential", "parallel"],
                      default="sequential")
    p_bd.add_argument("--dims", type=_csv_ints, default=[150])
    p_bd.add_argument("--directions", type=_csv_ints, default=[1000])
    p_bd.add_argument("--n", type=int, default=1000)
    p_bd.add_argument("--r", type=int, default=1)
    p_bd.add_argument("--notion",
                      choices=["halfspace", "projection", "asymprojection"],
                      default="projection")
    p_bd.add_argument("--repeats", type=int, default=5)
    p_bd.add_argument("--seed", type=int, default=_env_seed())
    p_bd.add_argument("--workers", type=int, default=None)
    p_bd.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p_bd.add_argument("--d-chunk", dest="d_chunk", type=int, default=256)
    p_bd.add_argument("--out", required=True)
    p_bd.set_defaults(func=cmd_bench_breakdown)

    p_bg = bench_sub.add_parser("grid", help="runtime over a (d, k) grid")
    p_bg.add_argument("--dims", type=_csv_ints, default=[5, 10])
    p_bg.add_argument("--directions", type=_csv_ints, default=[1000, 2000])
    p_bg.add_argument("--n", type=int, default=10_000)
    p_bg.add_argument("--r", type=int, default=1)
    p_bg.add_argument("--notion",
                      choices=["halfspace", "projection", "asymprojection"],
                      default="projection")
    p_bg.add_argument("--repeats", type=int, default=5)
    p_bg.add_argument("--seed", type=int, default=_env_seed())
    p_bg.add_argument("--workers", type=int, default=None)
    p_bg.add_argument("--out", required=True)
    p_bg.set_defaults(func=cmd_bench_grid)

    p_study = sub.add_parser("study", help="convergence and ranking studies")
    study_sub = p_study.add_subparsers(dest="study_command", required=True)

    p_sc = study_sub.add_parser("converge", help="MSE convergence grid")
    p_sc.add_argument("--config", default=None)
    p_sc.add_argument("--full", action="store_true")
    p_sc.add_argument("--seed", type=int, default=_env_seed())
    p_sc.add_argument("--workers", type=int, default=None)
    p_sc.add_argument("--out", required=True)
    p_sc.set_defaults(func=cmd_study_converge)

    p_sf = study_sub.add_parser("frontier", help="convergence frontier over (d, k)")
    p_sf.add_argument("--config", default=None)
    p_sf.add_argument("--full", action="store_true")
    p_sf.add_argument("--tol", type=float, default=None)
    p_sf.add_argument("--seed", type=int, default=_env_seed())
    p_sf.add_argument("--workers", type=int, default=None)
    p_sf.add_argument("--out", required=True)
    p_sf.set_defaults(func=cmd_study_frontier)

    p_sr = study_sub.add_parser("rank", help="rank correlation vs true density")
    p_sr.add_argument("--config", default=None)
    p_sr.add_argument("--full", action="store_true")
    p_sr.add_argument("--dist", choices=["gaussian", "student"], default=None)
    p_sr.add_argument("--d", type=int, default=None)
    p_sr.add_argument("--nu", type=float, default=None)
    p_sr.add_argument("--seed", type=int, default=_env_seed())
    p_sr.add_argument("--workers", type=int, default=None)
    p_sr.add_argument("--d-chunk", dest="d_chunk", type=int, default=None)
    p_sr.add_argument("--out", required=True)
    p_sr.set_defaults(func=cmd_study_rank)

    p_fit = sub.add_parser("fit-model", help="fit cost constants from profiles")
    p_fit.add_argument("--profiles", required=True)
    p_fit.add_argument("--predict", action="store_true")
    p_fit.add_argument("--g", type=int, default=1)
    p_fit.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p_fit.add_argument("--d", type=int, default=1)
    p_fit.add_argument("--d-chunk", dest="d_chunk", type=int, default=256)
    p_fit.set_defaults(func=cmd_fit_model)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except io.MatrixFormatError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BAD_DATA
    except DimensionMismatch as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DIM_MISMATCH
    except RankDeficientDesign as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RANK_DEFICIENT
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BAD_FLAGS


if __name__ == "__main__":
    sys.exit(main())

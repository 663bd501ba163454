#!/usr/bin/env python3
"""Compare the compiled kernel core against the pure-numpy fallback.

Times the deterministic projection kernel, the three univariate depth
kernels, and an end-to-end refined search on both backends, and verifies that
outputs agree bit for bit. Run from the repository root:

    python benchmarks/compare_backends.py [--quick]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from depthforge._core import get_backend


def best_of(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller shapes, faster run")
    args = parser.parse_args()

    try:
        compiled = get_backend("compiled")
    except ImportError:
        print("compiled core is not built; nothing to compare")
        return 1
    fallback = get_backend("python")

    if args.quick:
        m, n, d = 2000, 2000, 50
    else:
        m, n, d = 10_000, 10_000, 150

    rng = np.random.default_rng(0)
    x = rng.standard_normal((n, d))
    xt = np.ascontiguousarray(x.T)
    u = rng.standard_normal((m, d))
    u /= np.linalg.norm(u, axis=1)[:, None]
    pz = rng.standard_normal(m)

    rows = []

    pc = np.empty((m, n))
    pf = np.empty((m, n))
    t_c = best_of(lambda: compiled.proj_rect(xt, u, pc, 0, m, 0, n, 256))
    t_f = best_of(lambda: fallback.proj_rect(xt, u, pf, 0, m, 0, n, 256), repeats=1)
    assert pc.tobytes() == pf.tobytes(), "projection outputs diverge"
    gflops = 2.0 * m * n * d / 1e9
    rows.append(("projection", t_c, t_f, f"{gflops / t_c:.1f} Gflop/s compiled"))

    for kernel in ("halfspace_span", "projection_span", "asym_projection_span"):
        oc = np.empty(m)
        of = np.empty(m)
        t_c = best_of(lambda k=kernel: getattr(compiled, k)(pc, pz, oc, 0, m))
        t_f = best_of(
            lambda k=kernel: getattr(fallback, k)(pc, pz, of, 0, m), repeats=1
        )
        assert oc.tobytes() == of.tobytes(), f"{kernel} outputs diverge"
        rows.append((kernel.replace("_span", ""), t_c, t_f, ""))

    import depthforge.projection as projection_module
    import depthforge.univariate as univariate_module
    from depthforge import Dataset, RrsConfig, refined_random_search

    data = Dataset(x[: min(n, 2000)])
    cfg = RrsConfig(total_directions=4000, refinements=8, shrink=0.9,
                    notion="projection", seed=1)
    z = data.x[0]

    results = {}
    times = {}
    original = projection_module.backend
    try:
        for name, module in (("compiled", compiled), ("python", fallback)):
            projection_module.backend = module
            univariate_module.backend = module
            results[name] = refined_random_search(z, data, cfg).depth  # warm
            t0 = time.perf_counter()
            results[name] = refined_random_search(z, data, cfg).depth
            times[name] = time.perf_counter() - t0
    finally:
        projection_module.backend = original
        univariate_module.backend = original
    assert results["compiled"] == results["python"], "end-to-end depths diverge"
    rows.append(("refined_search", times["compiled"], times["python"], ""))

    print(f"shapes: m={m}, n={n}, d={d}; all outputs bit-identical\n")
    print(f"{'kernel':<16} {'compiled':>10} {'python':>10} {'speedup':>8}  note")
    for name, tc, tf, note in rows:
        print(f"{name:<16} {tc:>9.3f}s {tf:>9.3f}s {tf / tc:>7.1f}x  {note}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

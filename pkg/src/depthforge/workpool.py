"""Deterministic span scheduling for data-parallel kernels.

Work is a contiguous task range.  Tasks are grouped into blocks of
``block_size``; each worker receives one contiguous run of blocks.  Because the
kernels write disjoint output regions and their arithmetic is independent of
decomposition, results never depend on worker count, block size, or scheduling
order.  Executors are cached per worker count; kernels release the GIL.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor

_executors: dict[int, ThreadPoolExecutor] = {}
_lock = threading.Lock()


def default_workers() -> int:
    """Worker count: DEPTHFORGE_WORKERS when set and valid, else cpu count."""
    env = os.environ.get("DEPTHFORGE_WORKERS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            value = 0
        if value >= 1:
            return value
    return os.cpu_count() or 1


def get_executor(workers: int) -> ThreadPoolExecutor:
    with _lock:
        pool = _executors.get(workers)
        if pool is None:
            pool = ThreadPoolExecutor(max_workers=workers)
            _executors[workers] = pool
        return pool


def span_bounds(total: int, block_size: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, total) into <= `workers` contiguous spans of whole blocks."""
    if total <= 0:
        return []
    nblocks = -(-total // block_size)
    nspans = min(workers, nblocks)
    per_span = -(-nblocks // nspans)
    spans = []
    start = 0
    while start < total:
        stop = min(start + per_span * block_size, total)
        spans.append((start, stop))
        start = stop
    return spans


def run_spans(spans, fn, workers: int) -> None:
    """Apply fn(start, stop) to every span, threading only when it can help."""
    if len(spans) <= 1 or workers <= 1:
        for start, stop in spans:
            fn(start, stop)
        return
    pool = get_executor(workers)
    futures = [pool.submit(fn, start, stop) for start, stop in spans]
    for fut in futures:
        fut.result()

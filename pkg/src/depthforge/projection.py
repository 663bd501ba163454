"""Data-parallel projection of a dataset onto a batch of directions.

Computes the m x n score matrix P with P[j, i] = <x_i, u_j>, decomposed over an
(m x n) task grid.  Every scalar accumulates its inner product in ascending
coordinate order (coordinates split into d_chunk chunks that never reorder the
additions), so the parallel path reproduces the naive triple loop bit for bit
at any worker count, block size, or chunk length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._core import backend
from .workpool import default_workers, run_spans, span_bounds

DEFAULT_D_CHUNK = 256
DEFAULT_BLOCK_SIZE = 256


class DimensionMismatch(ValueError):
    """Operands disagree on the space dimension or shape."""


@dataclass(frozen=True)
class ParallelConfig:
    """Execution limits: worker count, tasks per block, coordinate chunk length."""

    workers: int = field(default_factory=default_workers)
    block_size: int = DEFAULT_BLOCK_SIZE
    d_chunk: int = DEFAULT_D_CHUNK

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if self.d_chunk < 1:
            raise ValueError("d_chunk must be >= 1")


class Dataset:
    """An n x d row-major matrix of observations (64-bit floats, all finite)."""

    def __init__(self, rows):
        x = np.ascontiguousarray(rows, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise ValueError("dataset must be a non-empty 2-D matrix")
        if not np.isfinite(x).all():
            raise ValueError("dataset contains non-finite entries")
        self.x = x
        self._xt = None

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @property
    def xt(self) -> np.ndarray:
        """Transposed copy (d x n, contiguous), cached for the projection kernels."""
        if self._xt is None:
            self._xt = np.ascontiguousarray(self.x.T)
        return self._xt

    def __repr__(self):
        return f"Dataset(n={self.n}, dim={self.dim})"


@dataclass(frozen=True)
class ProjectionMatrix:
    """m x n matrix of projection scores; row j projects all points onto u_j."""

    scores: np.ndarray

    @property
    def m(self) -> int:
        return self.scores.shape[0]

    @property
    def n(self) -> int:
        return self.scores.shape[1]


def _direction_matrix(dirs) -> np.ndarray:
    u = getattr(dirs, "directions", dirs)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.ndim != 2:
        raise DimensionMismatch("directions must form a 2-D matrix")
    return u


def _check_dims(d_data: int, d_dirs: int) -> None:
    if d_data != d_dirs:
        raise DimensionMismatch(
            f"direction dimension {d_dirs} does not match data dimension {d_data}"
        )


def project_naive(data: Dataset, dirs) -> ProjectionMatrix:
    """Reference projection: straightforward triple loop, single worker."""
    u = _direction_matrix(dirs)
    _check_dims(data.dim, u.shape[1])
    out = np.empty((u.shape[0], data.n))
    backend.proj_naive(data.x, u, out)
    return ProjectionMatrix(out)


def _project_into(
    xt: np.ndarray, u: np.ndarray, out: np.ndarray, cfg: ParallelConfig
) -> None:
    """Fill out[j, i] = <x_i, u_j> over the task grid, deterministic for any cfg."""
    m, n = out.shape

    def span(start: int, stop: int) -> None:
        ja, ra = divmod(start, n)
        jb, rb = divmod(stop, n)
        if ja == jb:
            backend.proj_rect(xt, u, out, ja, ja + 1, ra, rb, cfg.d_chunk)
            return
        if ra > 0:
            backend.proj_rect(xt, u, out, ja, ja + 1, ra, n, cfg.d_chunk)
            ja += 1
        if jb > ja:
            backend.proj_rect(xt, u, out, ja, jb, 0, n, cfg.d_chunk)
        if rb > 0:
            backend.proj_rect(xt, u, out, jb, jb + 1, 0, rb, cfg.d_chunk)

    spans = span_bounds(m * n, cfg.block_size, cfg.workers)
    run_spans(spans, span, cfg.workers)


def project_parallel(data: Dataset, dirs, cfg: ParallelConfig | None = None) -> ProjectionMatrix:
    """Projection over the task grid; bit-identical to project_naive."""
    u = _direction_matrix(dirs)
    _check_dims(data.dim, u.shape[1])
    if cfg is None:
        cfg = ParallelConfig()
    out = np.empty((u.shape[0], data.n))
    _project_into(data.xt, u, out, cfg)
    return ProjectionMatrix(out)


def _project_point_into(
    z: np.ndarray, u: np.ndarray, out: np.ndarray, cfg: ParallelConfig
) -> None:
    m = u.shape[0]
    spans = span_bounds(m, cfg.block_size, cfg.workers)
    run_spans(spans, lambda a, b: backend.proj_point_span(z, u, out, a, b), cfg.workers)


def project_point(z, dirs, cfg: ParallelConfig | None = None) -> np.ndarray:
    """Vector of <z, u_j> for all directions; same determinism contract."""
    u = _direction_matrix(dirs)
    z = np.ascontiguousarray(z, dtype=np.float64).reshape(-1)
    _check_dims(z.size, u.shape[1])
    if cfg is None:
        cfg = ParallelConfig()
    out = np.empty(u.shape[0])
    _project_point_into(z, u, out, cfg)
    return out

"""Direction sampling on the unit sphere and inside spherical caps.

Full-sphere draws normalize i.i.d. standard normals.  Cap draws around a pole
p with half-angle eps pick the polar angle theta uniformly on [0, eps] (angle-
uniform, not area-uniform: theta itself is uniform, which concentrates draws
toward the pole relative to surface-uniform cap sampling), fill the orthogonal
components with a uniform (d-1)-sphere draw, and map the e1 axis onto the
pole.

The pole map is the Householder reflection u' = u - 2(v.u)v across
v = (e1 - p)/||e1 - p||: it swaps e1 and p and preserves all inner products.
Writing lambda = (p.u - u1)/(1 - p1), the reflection equals u + lambda*(e1 - p);
a shortcut that adds lambda to the first coordinate and subtracts it from the
others is NOT an isometry and distorts the cap, so it is deliberately not
used.  Near-degenerate poles: p ~ e1 skips the reflection, p ~ -e1 negates
the first coordinate instead.

All draws are addressed through counter-based substreams (see philox):
value v of direction j in refinement l of query q is a pure function of
(seed, v, j, l, q).  Worker count and generation order cannot affect output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import philox

UNIT_NORM_TOL = 1e-12
_DEGENERATE_POLE_TOL = 1e-12


@dataclass(frozen=True)
class Pole:
    """A unit vector around which a spherical cap is centered."""

    p: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "p", p)
        if abs(float(np.linalg.norm(p)) - 1.0) > UNIT_NORM_TOL:
            raise ValueError("pole must have unit norm")


@dataclass(frozen=True)
class CapSpec:
    """Spherical cap: pole plus half-angle epsilon in (0, pi/2]."""

    pole: Pole
    epsilon: float

    def __post_init__(self):
        if not (0.0 < self.epsilon <= math.pi / 2 + 1e-15):
            raise ValueError("cap half-angle must lie in (0, pi/2]")


@dataclass(frozen=True)
class DirectionBatch:
    """m x d matrix of unit directions plus the (seed, refinement) that built it."""

    directions: np.ndarray
    seed_info: tuple[int, int]

    @property
    def m(self) -> int:
        return self.directions.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]


@dataclass(frozen=True)
class SubStream:
    """Address of one direction's substream: (seed, refinement, query, index)."""

    seed: int
    refinement: int = 0
    query: int = 0
    index: int = 0

    def uniforms(self, count: int, offset: int = 0) -> np.ndarray:
        blocks = np.arange(offset, offset + count, dtype=np.uint64)
        idx = np.full(count, self.index, dtype=np.uint64)
        return philox.uniforms(self.seed, blocks, idx, self.refinement, self.query)

    def normals(self, count: int, offset: int = 0) -> np.ndarray:
        blocks = np.arange(offset, offset + count, dtype=np.uint64)
        idx = np.full(count, self.index, dtype=np.uint64)
        return philox.normals(self.seed, blocks, idx, self.refinement, self.query)


def _normal_rows(
    seed: int,
    refinement: int,
    query: int,
    m: int,
    dim: int,
    v_base: int,
    index_base: int = 0,
) -> np.ndarray:
    """(m, dim) standard normals; row j is addressed by direction index
    index_base + j and value addresses v_base..v_base+dim-1."""
    blocks = np.arange(v_base, v_base + dim, dtype=np.uint64)[None, :]
    idx = np.arange(index_base, index_base + m, dtype=np.uint64)[:, None]
    return philox.normals(seed, blocks, idx, refinement, query)


def _unit_rows(
    seed: int,
    refinement: int,
    query: int,
    m: int,
    dim: int,
    v_base: int,
    index_base: int = 0,
) -> np.ndarray:
    """Normalized normal rows; a zero draw (probability ~0) is redrawn from
    fresh value addresses until every row has positive norm."""
    g = _normal_rows(seed, refinement, query, m, dim, v_base, index_base)
    next_v = v_base + dim
    while True:
        norms = np.sqrt((g * g).sum(axis=1))
        bad = np.flatnonzero(norms == 0.0)
        if bad.size == 0:
            return g / norms[:, None]
        for j in bad:
            g[j] = _normal_rows(
                seed, refinement, query, 1, dim, next_v, index_base + int(j)
            )[0]
        next_v += dim


def random_sphere(d: int, stream: SubStream) -> np.ndarray:
    """Uniform direction on the (d-1)-sphere from normalized normals.

    For d = 1 the normalized scalar is exactly +1 or -1.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return _unit_rows(
        stream.seed, stream.refinement, stream.query, 1, d, 0, stream.index
    )[0]


def reflect_to_pole(rows: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """Map the e1 axis onto the pole by a Householder reflection, in place."""
    p1 = pole[0]
    if 1.0 - p1 < _DEGENERATE_POLE_TOL:
        return rows
    if 1.0 + p1 < _DEGENERATE_POLE_TOL:
        rows[:, 0] = -rows[:, 0]
        return rows
    v = -pole.copy()
    v[0] += 1.0
    v /= np.linalg.norm(v)
    # (rows * v).sum keeps a per-row reduction order independent of m.
    proj = (rows * v).sum(axis=1)
    rows -= 2.0 * proj[:, None] * v[None, :]
    return rows


def _cap_rows(
    cap: CapSpec, m: int, seed: int, refinement: int, query: int, index_base: int = 0
) -> np.ndarray:
    pole = cap.pole.p
    d = pole.size
    if d == 1:
        return np.tile(pole, (m, 1))
    blocks = np.zeros(m, dtype=np.uint64)
    idx = np.arange(index_base, index_base + m, dtype=np.uint64)
    theta = philox.uniforms(seed, blocks, idx, refinement, query) * cap.epsilon
    u1 = np.cos(theta)
    sub = _unit_rows(seed, refinement, query, m, d - 1, 1, index_base)
    rows = np.empty((m, d))
    rows[:, 0] = u1
    rows[:, 1:] = np.sqrt(1.0 - u1 * u1)[:, None] * sub
    return reflect_to_pole(rows, pole)


def random_sphere_pole(cap: CapSpec, stream: SubStream) -> np.ndarray:
    """One draw inside the cap; identical to the matching generate_batch row."""
    return _cap_rows(
        cap, 1, stream.seed, stream.refinement, stream.query, stream.index
    )[0]


def generate_batch(
    cap: CapSpec,
    m: int,
    seed: int,
    refinement: int,
    query: int = 0,
) -> DirectionBatch:
    """m directions in the cap; direction j comes from the substream addressed
    by (seed, refinement, j) so output is independent of worker count."""
    if m < 1:
        raise ValueError("batch size must be >= 1")
    rows = _cap_rows(cap, m, seed, refinement, query)
    return DirectionBatch(directions=rows, seed_info=(seed, refinement))

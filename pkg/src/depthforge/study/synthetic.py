"""Synthetic elliptical samples and the true-density reference ordering.

The Gaussian family uses the Toeplitz covariance sigma_ij = 2^-|i-j| centered
at the origin.  Student-t samples share the same scale matrix: x = L g / sqrt(W/nu)
with W ~ chi^2_nu.  The "multivariate exponential" is i.i.d. standard
exponential per coordinate (the construction is a documented convention).

For a known elliptical family the density is strictly decreasing in the
quadratic form (z - mu)' Sigma^-1 (z - mu), so the density ordering is the
ascending quadratic-form ordering; ties get average ranks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve


def toeplitz_sigma(d: int) -> np.ndarray:
    """Covariance with sigma_ij = 2^-|i-j|."""
    idx = np.arange(d)
    return 2.0 ** (-np.abs(idx[:, None] - idx[None, :]))


@dataclass(frozen=True)
class ToeplitzGaussianSpec:
    dim: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.n < 1:
            raise ValueError("dimension and sample size must be positive")

    @property
    def mu(self) -> np.ndarray:
        return np.zeros(self.dim)

    @property
    def sigma(self) -> np.ndarray:
        return toeplitz_sigma(self.dim)


@dataclass(frozen=True)
class StudentTSpec:
    dim: int
    n: int
    nu: float
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.n < 1:
            raise ValueError("dimension and sample size must be positive")
        if self.nu <= 0:
            raise ValueError("degrees of freedom must be positive")

    @property
    def mu(self) -> np.ndarray:
        return np.zeros(self.dim)

    @property
    def sigma(self) -> np.ndarray:
        return toeplitz_sigma(self.dim)


@dataclass(frozen=True)
class ExponentialSpec:
    dim: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.n < 1:
            raise ValueError("dimension and sample size must be positive")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed % (1 << 64)))


def gen_toeplitz_gaussian(spec: ToeplitzGaussianSpec) -> np.ndarray:
    """n draws from N(0, Sigma) via the Cholesky factor of Sigma."""
    chol = np.linalg.cholesky(spec.sigma)
    g = _rng(spec.seed).standard_normal((spec.n, spec.dim))
    return g @ chol.T


def gen_student_t(spec: StudentTSpec) -> np.ndarray:
    """Elliptical multivariate t with nu degrees of freedom."""
    chol = np.linalg.cholesky(spec.sigma)
    rng = _rng(spec.seed)
    g = rng.standard_normal((spec.n, spec.dim))
    w = rng.chisquare(spec.nu, size=spec.n)
    return (g @ chol.T) * np.sqrt(spec.nu / w)[:, None]


def gen_exponential(d: int, n: int, seed: int) -> np.ndarray:
    """i.i.d. standard exponential coordinates."""
    if d < 1 or n < 1:
        raise ValueError("dimension and sample size must be positive")
    return _rng(seed).standard_exponential((n, d))


def generate(spec) -> np.ndarray:
    """Draw the sample a distribution spec describes."""
    if isinstance(spec, ToeplitzGaussianSpec):
        return gen_toeplitz_gaussian(spec)
    if isinstance(spec, StudentTSpec):
        return gen_student_t(spec)
    if isinstance(spec, ExponentialSpec):
        return gen_exponential(spec.dim, spec.n, spec.seed)
    raise TypeError(f"unknown distribution spec {type(spec).__name__}")


def quadratic_forms(spec, queries: np.ndarray) -> np.ndarray:
    """(z - mu)' Sigma^-1 (z - mu) per query, via a Cholesky solve."""
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    diff = queries - spec.mu
    try:
        factor = cho_factor(spec.sigma, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("scatter not positive definite") from None
    return np.einsum("ij,ij->i", diff, cho_solve(factor, diff.T).T)


def average_ranks(x: np.ndarray) -> np.ndarray:
    """Ranks 1..n of ascending order, ties averaged."""
    x = np.asarray(x)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size)
    sorted_x = x[order]
    boundaries = np.flatnonzero(np.diff(sorted_x) != 0) + 1
    starts = np.concatenate(([0], boundaries))
    stops = np.concatenate((boundaries, [x.size]))
    for a, b in zip(starts, stops):
        ranks[order[a:b]] = 0.5 * (a + b - 1) + 1.0
    return ranks


def true_density_rank(spec, queries: np.ndarray) -> np.ndarray:
    """Rank 1 = highest density (smallest quadratic form); ties averaged."""
    return average_ranks(quadratic_forms(spec, queries))

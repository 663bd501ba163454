"""Characteristic-time model of the depth pipeline and its speedup.

Sequential cost:
    T_C = C_c + r * (C_rv*m*d + C_p*m*n*d + C_d*D)
Parallel cost on g cores at frequency ratio lam:
    T_G = C_c + r*lam * (C_rv*ceil(m*d/g)
                         + C_p*ceil(d/d_chunk)*ceil(m*n/g)
                         + C_d*ceil(D/g))
Speedup S_p = T_C / T_G.  With the constant and generation terms negligible,
D ~ m*n, and m*n an exact multiple of g, the speedup plateaus at
    (g/lam) * (C_p*d + C_d) / (C_p*ceil(d/d_chunk) + C_d),
independent of the workload size.

Constants are fitted from measured phase times: each phase is a one-parameter
nonnegative least squares against its own regressor (path-specific), and the
constant cost is the clipped mean of total-minus-phases.  lam is an input
(measured separately or defaulted to 1), not a fitted quantity, since it only
appears multiplied by the parallel constants.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


class RankDeficientDesign(ValueError):
    """Fit design matrix has dependent columns; carries the regressor name."""

    def __init__(self, regressor: str, message: str | None = None):
        self.regressor = regressor
        super().__init__(message or f"rank-deficient design: regressor {regressor!r}")


@dataclass(frozen=True)
class CostConstants:
    """Per-unit costs: constant, random value, projected scalar, depth unit."""

    c_const: float = 0.0
    c_rv: float = 0.0
    c_proj: float = 0.0
    c_depth: float = 0.0

    def __post_init__(self):
        for name in ("c_const", "c_rv", "c_proj", "c_depth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class Workload:
    """Problem size descriptors plus the parallel-execution parameters."""

    n: int
    d: int
    k: int
    r: int = 1
    depth_work: float | None = None
    g: int = 1
    lam: float = 1.0
    d_chunk: int = 256

    def __post_init__(self):
        if min(self.n, self.d, self.k, self.r, self.g, self.d_chunk) < 1:
            raise ValueError("workload sizes must be positive")
        if self.lam <= 0:
            raise ValueError("frequency ratio must be positive")

    @property
    def m(self) -> int:
        return -(-self.k // self.r)

    @property
    def depth_units(self) -> float:
        """Univariate work D; defaults to m*n (one scan per direction)."""
        return float(self.m * self.n) if self.depth_work is None else self.depth_work


@dataclass(frozen=True)
class TimingProfile:
    """Measured per-phase seconds for one workload on one path."""

    workload: Workload
    generation: float
    projection: float
    univariate: float
    total: float
    path: str = "sequential"

    def __post_init__(self):
        if min(self.generation, self.projection, self.univariate) < 0:
            raise ValueError("phase times must be nonnegative")
        if self.total < max(self.generation, self.projection, self.univariate):
            raise ValueError("total must be at least the largest phase")
        if self.path not in ("sequential", "parallel"):
            raise ValueError(f"unknown path {self.path!r}")


def t_sequential(c: CostConstants, w: Workload) -> float:
    return c.c_const + w.r * (
        c.c_rv * w.m * w.d + c.c_proj * w.m * w.n * w.d + c.c_depth * w.depth_units
    )


def _ceil_div(a: float, b: float) -> float:
    return math.ceil(a / b)


def t_parallel(c: CostConstants, w: Workload) -> float:
    return c.c_const + w.r * w.lam * (
        c.c_rv * _ceil_div(w.m * w.d, w.g)
        + c.c_proj * _ceil_div(w.d, w.d_chunk) * _ceil_div(w.m * w.n, w.g)
        + c.c_depth * _ceil_div(w.depth_units, w.g)
    )


def speedup(c: CostConstants, w: Workload) -> float:
    tg = t_parallel(c, w)
    if tg <= 0.0:
        raise ValueError("parallel characteristic time is zero")
    return t_sequential(c, w) / tg


def speedup_plateau(
    c: CostConstants, d: int, d_chunk: int, g: int, lam: float
) -> float:
    """Large-workload speedup limit; requires some projection or depth cost."""
    denom = c.c_proj * _ceil_div(d, d_chunk) + c.c_depth
    if denom <= 0.0:
        raise ValueError("plateau undefined: projection and depth costs are zero")
    return (g / lam) * (c.c_proj * d + c.c_depth) / denom


_PHASES = ("generation", "projection", "univariate")
_REGRESSOR_NAMES = ("constant", "generation", "projection", "univariate")


def _phase_regressor(p: TimingProfile, phase: str) -> float:
    w = p.workload
    if p.path == "sequential":
        if phase == "generation":
            return w.r * w.m * w.d
        if phase == "projection":
            return w.r * w.m * w.n * w.d
        return w.r * w.depth_units
    scale = w.r * w.lam
    if phase == "generation":
        return scale * _ceil_div(w.m * w.d, w.g)
    if phase == "projection":
        return scale * _ceil_div(w.d, w.d_chunk) * _ceil_div(w.m * w.n, w.g)
    return scale * _ceil_div(w.depth_units, w.g)


def _design_matrix(profiles: list[TimingProfile]) -> np.ndarray:
    rows = [
        [1.0] + [_phase_regressor(p, phase) for phase in _PHASES] for p in profiles
    ]
    return np.asarray(rows)


def _check_design(profiles: list[TimingProfile], path: str) -> None:
    subset = [p for p in profiles if p.path == path]
    if not subset:
        return
    if len(subset) < 4:
        raise RankDeficientDesign(
            "profiles", f"need >= 4 {path} profiles, got {len(subset)}"
        )
    design = _design_matrix(subset)
    if np.linalg.matrix_rank(design) >= design.shape[1]:
        return
    # Name the first column that adds no rank.
    rank = 0
    for col in range(design.shape[1]):
        new_rank = int(np.linalg.matrix_rank(design[:, : col + 1]))
        if new_rank == rank:
            raise RankDeficientDesign(_REGRESSOR_NAMES[col])
        rank = new_rank
    raise RankDeficientDesign(_REGRESSOR_NAMES[-1])


@dataclass(frozen=True)
class FitReport:
    constants: CostConstants
    r_squared: float
    residuals: tuple[float, ...]
    max_rel_residual: float
    profile_count: int

    def to_json(self) -> str:
        payload = {
            "constants": {
                "c_const": self.constants.c_const,
                "c_rv": self.constants.c_rv,
                "c_proj": self.constants.c_proj,
                "c_depth": self.constants.c_depth,
            },
            "r_squared": self.r_squared,
            "residuals": list(self.residuals),
            "max_rel_residual": self.max_rel_residual,
            "profile_count": self.profile_count,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def fit_constants(profiles) -> FitReport:
    """Nonnegative per-phase least squares over measured profiles."""
    profiles = list(profiles)
    if not profiles:
        raise ValueError("no profiles to fit")
    for path in ("sequential", "parallel"):
        _check_design(profiles, path)

    constants = {}
    fitted = []
    observed = []
    for phase in _PHASES:
        x = np.array([_phase_regressor(p, phase) for p in profiles])
        y = np.array([getattr(p, phase) for p in profiles])
        xx = float(x @ x)
        coef = max(0.0, float(x @ y) / xx) if xx > 0 else 0.0
        constants[phase] = coef
        fitted.append(coef * x)
        observed.append(y)

    totals = np.array([p.total for p in profiles])
    phase_sum = np.array(
        [p.generation + p.projection + p.univariate for p in profiles]
    )
    c_const = max(0.0, float(np.mean(totals - phase_sum)))

    cc = CostConstants(
        c_const=c_const,
        c_rv=constants["generation"],
        c_proj=constants["projection"],
        c_depth=constants["univariate"],
    )

    pred = np.concatenate(fitted)
    obs = np.concatenate(observed)
    residuals = obs - pred
    ss_res = float(residuals @ residuals)
    centered = obs - obs.mean()
    ss_tot = float(centered @ centered)
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    positive = obs > 0
    max_rel = (
        float(np.max(np.abs(residuals[positive]) / obs[positive]))
        if positive.any()
        else 0.0
    )
    return FitReport(
        constants=cc,
        r_squared=r_squared,
        residuals=tuple(float(v) for v in residuals),
        max_rel_residual=max_rel,
        profile_count=len(profiles),
    )

"""Study harness: synthetic data, convergence grids, benchmarks, rank studies."""

from .benchmarks import (
    RuntimeGridResult,
    breakdown_bench,
    profile_rows,
    profiles_from_rows,
    runtime_grid,
)
from .convergence import (
    ConvergenceResult,
    FrontierResult,
    ReferenceSpec,
    StudyGrid,
    convergence_frontier,
    convergence_study,
    reference_depths,
)
from .correlation import kendall_tau, spearman_rho
from .rank import RankStudyResult, rank_study
from .synthetic import (
    ExponentialSpec,
    StudentTSpec,
    ToeplitzGaussianSpec,
    average_ranks,
    gen_exponential,
    gen_student_t,
    gen_toeplitz_gaussian,
    generate,
    quadratic_forms,
    toeplitz_sigma,
    true_density_rank,
)

__all__ = [
    "ConvergenceResult",
    "ExponentialSpec",
    "FrontierResult",
    "RankStudyResult",
    "ReferenceSpec",
    "RuntimeGridResult",
    "StudentTSpec",
    "StudyGrid",
    "ToeplitzGaussianSpec",
    "average_ranks",
    "breakdown_bench",
    "convergence_frontier",
    "convergence_study",
    "gen_exponential",
    "gen_student_t",
    "gen_toeplitz_gaussian",
    "generate",
    "kendall_tau",
    "profile_rows",
    "profiles_from_rows",
    "quadratic_forms",
    "rank_study",
    "reference_depths",
    "runtime_grid",
    "spearman_rho",
    "toeplitz_sigma",
    "true_density_rank",
]

"""depthforge: projection-based data depth via refined random search.

Computes halfspace, projection, and asymmetric projection depth of query
points by minimizing exact univariate depths over random directions, with a
deterministic data-parallel core (compiled, with a pure-numpy fallback), a
characteristic-time performance model, and a study harness for convergence,
timing, and rank-correlation experiments.
"""

from ._core import backend_name
from .directions import CapSpec, DirectionBatch, Pole, SubStream, generate_batch, random_sphere, random_sphere_pole
from .optimizer import (
    DepthResult,
    RefinementRecord,
    RrsConfig,
    depth_batch,
    evaluate_directions,
    pole_update_rule,
    refined_random_search,
    simple_random_search,
)
from .perfmodel import (
    CostConstants,
    FitReport,
    RankDeficientDesign,
    TimingProfile,
    Workload,
    fit_constants,
    speedup,
    speedup_plateau,
    t_parallel,
    t_sequential,
)
from .projection import (
    Dataset,
    DimensionMismatch,
    ParallelConfig,
    ProjectionMatrix,
    project_naive,
    project_parallel,
    project_point,
)
from .univariate import (
    LocationScatter,
    ProjectedSample,
    asym_projection_depth_1d,
    depth_of_projections,
    estimate_mle,
    halfspace_depth_1d,
    mahalanobis_depth,
    mahalanobis_depth_batch,
    projection_depth_1d,
)

__version__ = "0.1.0"

__all__ = [
    "CapSpec",
    "CostConstants",
    "Dataset",
    "DepthResult",
    "DimensionMismatch",
    "DirectionBatch",
    "FitReport",
    "LocationScatter",
    "ParallelConfig",
    "Pole",
    "ProjectedSample",
    "ProjectionMatrix",
    "RankDeficientDesign",
    "RefinementRecord",
    "RrsConfig",
    "SubStream",
    "TimingProfile",
    "Workload",
    "asym_projection_depth_1d",
    "backend_name",
    "depth_batch",
    "depth_of_projections",
    "estimate_mle",
    "evaluate_directions",
    "fit_constants",
    "generate_batch",
    "halfspace_depth_1d",
    "mahalanobis_depth",
    "mahalanobis_depth_batch",
    "pole_update_rule",
    "project_naive",
    "project_parallel",
    "project_point",
    "projection_depth_1d",
    "random_sphere",
    "random_sphere_pole",
    "refined_random_search",
    "simple_random_search",
    "speedup",
    "speedup_plateau",
    "t_parallel",
    "t_sequential",
]

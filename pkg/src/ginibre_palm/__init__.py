"""Ginibre-type planar ensembles, their conditionings, and the statistics
that tell conditionings apart."""

from ._jit import disable_jit, enable_jit, jit_enabled
from .core import (
    Configuration,
    PalmAnchor,
    Partition,
    RadialConfiguration,
    count_in_disk,
    theta,
)
from .errors import (
    AnchorCollisionError,
    BudgetExceededError,
    ConvergenceFailureError,
    DimensionMismatchError,
    PalmDegeneracyError,
    RejectionBudgetError,
)
from .kernel import (
    KernelSpec,
    correlation_det,
    cramer_coeff,
    cramer_coeff_components,
    evaluate,
    palm_diff_bound_check,
    palm_kernel_det,
    palm_kernel_schur,
    partition_ratio_exact,
    z_of,
    z_ratio,
)
from .quadrature import QuadratureSpec, reproducing_residual
from .rn_density import (
    TailDiagnostics,
    expectation_consistency,
    rn_density,
    tail_log_product,
    truncated_log_product,
)
from .sampler import (
    RngStream,
    make_rng,
    sample_ginibre_n,
    sample_palm_ginibre_n,
    sample_radial_dpp,
    sample_radial_ginibre,
    sample_radial_palm,
)
from .statistics import (
    EstimatorResult,
    F_T,
    RadialProfile,
    ell_detector,
    estimate,
    f_T,
    i_n_p,
    i_n_p_direct,
    tail_statistic_F,
    tail_statistic_G,
    variance_linear_statistic,
)
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "disable_jit",
    "enable_jit",
    "jit_enabled",
    "Configuration",
    "PalmAnchor",
    "Partition",
    "RadialConfiguration",
    "count_in_disk",
    "theta",
    "AnchorCollisionError",
    "BudgetExceededError",
    "ConvergenceFailureError",
    "DimensionMismatchError",
    "PalmDegeneracyError",
    "RejectionBudgetError",
    "KernelSpec",
    "correlation_det",
    "cramer_coeff",
    "cramer_coeff_components",
    "evaluate",
    "palm_diff_bound_check",
    "palm_kernel_det",
    "palm_kernel_schur",
    "partition_ratio_exact",
    "z_of",
    "z_ratio",
    "QuadratureSpec",
    "reproducing_residual",
    "TailDiagnostics",
    "expectation_consistency",
    "rn_density",
    "tail_log_product",
    "truncated_log_product",
    "RngStream",
    "make_rng",
    "sample_ginibre_n",
    "sample_palm_ginibre_n",
    "sample_radial_dpp",
    "sample_radial_ginibre",
    "sample_radial_palm",
    "EstimatorResult",
    "F_T",
    "RadialProfile",
    "ell_detector",
    "estimate",
    "f_T",
    "i_n_p",
    "i_n_p_direct",
    "tail_statistic_F",
    "tail_statistic_G",
    "variance_linear_statistic",
    "run_verify",
]

"""Intermittency of superpositions of Levy-driven Ornstein-Uhlenbeck type processes.

Submodules
----------
marginals
    Self-decomposable marginal families and their cumulants.
analytics
    Exact and asymptotic cumulants of partial sums, covariance, ``L*``.
simulate
    Exact-in-law AR(1) simulation of finite superpositions.
estimate
    k-statistics, scaling fits and normality diagnostics.
cli
    JSON-configured experiment runner.
"""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402
from .marginals import (  # noqa: E402
    DomainError,
    Gamma,
    InverseGaussian,
    NormalInverseGaussian,
    TemperedStable,
    VarianceGamma,
    make_family,
)
from .analytics import (  # noqa: E402
    QuadratureError,
    SupouSpec,
    asymptotic_constant_D,
    covariance_R,
    exact_cumulant,
    partial_sum_variance_exact,
    slowly_varying_Lstar,
)
from .simulate import RngStream, replicate, simulate_superposition  # noqa: E402
from .estimate import fit_scaling, intermittency_check, k_statistics, normality_diagnostics  # noqa: E402

__all__ = [
    "BACKEND",
    "DomainError",
    "Gamma",
    "InverseGaussian",
    "NormalInverseGaussian",
    "TemperedStable",
    "VarianceGamma",
    "make_family",
    "QuadratureError",
    "SupouSpec",
    "asymptotic_constant_D",
    "covariance_R",
    "exact_cumulant",
    "partial_sum_variance_exact",
    "slowly_varying_Lstar",
    "RngStream",
    "replicate",
    "simulate_superposition",
    "fit_scaling",
    "intermittency_check",
    "k_statistics",
    "normality_diagnostics",
]

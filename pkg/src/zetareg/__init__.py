"""Numerical toolkit for a regulated integral criterion on the Riemann zeta
function: zeta evaluation, zero location, excised domains, weighted area
integrals and asymptotics of zero ordinates."""

__version__ = "0.1.0"

from .asymptotics import (
    ApproxParams,
    ComparisonRow,
    GammaApproximator,
    compare_table,
    fit_constants,
    gamma_approx,
    gamma_main_term,
    inverse_rvm,
)
from .domain import (
    AreaAccount,
    DiskKind,
    ExcisionDisk,
    Mode,
    RegulatedDomain,
    build_domain,
    contains,
    excised_area,
    total_excised_bound,
)
from .errors import (
    DomainError,
    EmptyDomain,
    FitPoor,
    NoConvergence,
    Nonconvergence,
    OnCriticalLine,
    OverlapWithWallWarning,
    PoleOfGamma,
    PoleProximity,
    PrefactorSingularity,
    QuadratureFailure,
    RankDeficient,
    StepTooCoarseWarning,
    ZeroValue,
    ZetaRegError,
)
from .integrator import (
    FitKind,
    IntegralResult,
    ProbeResult,
    WeightParams,
    divergence_probe,
    integrand,
    integrate_w,
    line_weight_integral,
    lower_bound_m_R,
    phi_projection,
    wr_sweep,
)
from .zeros import (
    Base,
    InjectionSpec,
    TestFunction,
    ZeroRecord,
    count_zeros_rvm,
    inject_zeros,
    scan_zeros,
    verify_count,
)
from .zeta_engine import (
    EvalConfig,
    Method,
    ZetaValue,
    chi_factor,
    eta_eval,
    euler_product_eval,
    hardy_theta,
    hardy_z,
    mellin_eval,
    zeta_eval,
)
from ._validation import ComplexPoint

__all__ = [
    "ApproxParams",
    "AreaAccount",
    "Base",
    "ComparisonRow",
    "ComplexPoint",
    "DiskKind",
    "DomainError",
    "EmptyDomain",
    "EvalConfig",
    "ExcisionDisk",
    "FitKind",
    "FitPoor",
    "GammaApproximator",
    "InjectionSpec",
    "IntegralResult",
    "Method",
    "Mode",
    "NoConvergence",
    "Nonconvergence",
    "OnCriticalLine",
    "OverlapWithWallWarning",
    "PoleOfGamma",
    "PoleProximity",
    "PrefactorSingularity",
    "ProbeResult",
    "QuadratureFailure",
    "RankDeficient",
    "RegulatedDomain",
    "StepTooCoarseWarning",
    "TestFunction",
    "WeightParams",
    "ZeroRecord",
    "ZeroValue",
    "ZetaRegError",
    "ZetaValue",
    "build_domain",
    "chi_factor",
    "compare_table",
    "contains",
    "count_zeros_rvm",
    "divergence_probe",
    "eta_eval",
    "euler_product_eval",
    "excised_area",
    "fit_constants",
    "gamma_approx",
    "gamma_main_term",
    "hardy_theta",
    "hardy_z",
    "inject_zeros",
    "integrand",
    "integrate_w",
    "inverse_rvm",
    "line_weight_integral",
    "lower_bound_m_R",
    "mellin_eval",
    "phi_projection",
    "scan_zeros",
    "total_excised_bound",
    "verify_count",
    "wr_sweep",
    "zeta_eval",
]

"""Khinchin families of power series: cumulants, normalized moments, and
numerical Gaussianity diagnostics."""

from .bell import (
    complete_bell,
    incomplete_bell,
    normal_moment,
    normalized_moments_from_quotients,
    quotients_from_normalized_moments,
)
from .criteria import (
    QuotientDiagnostics,
    ZeroFreeReport,
    asymptotic_constant_check,
    bounded_moments_report,
    classify_sequence,
    default_grid,
    diagnose,
    euler_bound_harness,
    zero_free_check,
)
from .errors import (
    BudgetExceededError,
    DomainError,
    GridError,
    KhinchinError,
    ModelSpecError,
    QuadratureError,
    TailTooHeavyError,
    UnsupportedModelError,
)
from .family import (
    DistributionSlice,
    MomentReport,
    characteristic_normalized,
    direct_moments,
    distribution,
    ks_distance_to_normal,
    mean_variance,
)
from .fulcrum import (
    CumulantVector,
    QuotientVector,
    canonical_bound_constant,
    cumulants_analytic,
    cumulants_from_distribution,
    fulcrum_derivative_analytic,
    has_analytic_route,
    quotients,
)
from .models import (
    build_canonical,
    build_canonical_list,
    build_density,
    build_exp,
    build_exp_iter,
    build_exp_of,
    build_explicit,
    build_geometric,
    build_macmahon,
    build_partitions,
    build_poly,
    clan_asymptotic_ratio,
    clan_ratio_curve,
    density_set_members,
    order_estimate,
    parse_model,
)
from .series import SeriesModel, eval_complex_on_circle, eval_derivative, eval_series

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""Quantitative approximation bounds and half-line inverse-spectral tools.

The package groups six related pieces of machinery: oscillating Holder
bump constructions and their approximation floors, counting bounds for
sign vectors and exponential-sum zeros, Taylor truncation of entire
families, a forward Sturm-Liouville solver on the half-line, WKB level
asymptotics, and a Gelfand-Levitan determinant reconstruction.
"""

from .bump import (
    BumpSpec,
    HolderClass,
    MembershipReport,
    analytic_floor_constant,
    eval_f_eps,
    eval_g,
    f_eps_sup_norm,
    lower_bound_constant,
    norm_constant_m,
    verify_holder_membership,
)
from .counting import (
    ExpSum,
    PolySystem,
    count_exp_sum_zeros,
    enumerate_sign_vectors_1d,
    exp_sum_distance_floor,
    find_unattained_sequence,
    khovanskii_cell_bound,
    khovanskii_complement_bound,
    khovanskii_floor,
    sample_sign_vectors,
    warren_component_bound,
    warren_thresholds,
)
from .spectral import (
    IdentityReport,
    JostResult,
    Potential,
    RationalDecay,
    ShootingConfig,
    Spectrum,
    SquareWell,
    Tabulated,
    characteristic_identity_check,
    count_eigenvalues,
    jost_function,
    potential_from_dict,
    solve_spectrum,
    square_well_phase_margin,
    square_well_spectrum,
)
from .wkb import (
    WkbLevels,
    action_phi,
    compare_wkb_exact,
    theta_plus,
    turning_points,
    wkb_count,
    wkb_levels,
)
from .reconstruct import (
    GLParameters,
    PrimitiveErrorReport,
    WEval,
    logdet_profile,
    primitive_error,
    psi_log_derivative,
    reconstruct_q,
    w_matrix,
    w_x_derivatives,
)
from .truncation import (
    CoefficientOracle,
    EntireFamilyParams,
    coeff_bound,
    empirical_coeff_check,
    floor_lower_bound,
    multinomial_count,
    tail_bound,
    truncation_degree,
)

__version__ = "0.1.0"

__all__ = [
    "BumpSpec",
    "HolderClass",
    "MembershipReport",
    "analytic_floor_constant",
    "eval_f_eps",
    "eval_g",
    "f_eps_sup_norm",
    "lower_bound_constant",
    "norm_constant_m",
    "verify_holder_membership",
    "ExpSum",
    "PolySystem",
    "count_exp_sum_zeros",
    "enumerate_sign_vectors_1d",
    "exp_sum_distance_floor",
    "find_unattained_sequence",
    "khovanskii_cell_bound",
    "khovanskii_complement_bound",
    "khovanskii_floor",
    "sample_sign_vectors",
    "warren_component_bound",
    "warren_thresholds",
    "IdentityReport",
    "JostResult",
    "Potential",
    "RationalDecay",
    "ShootingConfig",
    "Spectrum",
    "SquareWell",
    "Tabulated",
    "characteristic_identity_check",
    "count_eigenvalues",
    "jost_function",
    "potential_from_dict",
    "solve_spectrum",
    "square_well_phase_margin",
    "square_well_spectrum",
    "WkbLevels",
    "action_phi",
    "compare_wkb_exact",
    "theta_plus",
    "turning_points",
    "wkb_count",
    "wkb_levels",
    "GLParameters",
    "PrimitiveErrorReport",
    "WEval",
    "logdet_profile",
    "primitive_error",
    "psi_log_derivative",
    "reconstruct_q",
    "w_matrix",
    "w_x_derivatives",
    "CoefficientOracle",
    "EntireFamilyParams",
    "coeff_bound",
    "empirical_coeff_check",
    "floor_lower_bound",
    "multinomial_count",
    "tail_bound",
    "truncation_degree",
    "__version__",
]

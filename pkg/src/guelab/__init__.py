"""guelab: exact finite-n GUE characteristic-polynomial averages, their
singular Hankel determinants, and the closed-form large-n asymptotics
they converge to, all at extended precision."""

from .precision import DEFAULT_CTX, PrecisionContext
from .weights import MomentTable, WeightSpec, moment_table, symmetric_moment_oracle, weight_eval
from .hankel import (
    LogDeterminant,
    char_poly_average_log,
    hankel_log_determinant,
    selberg_log,
)
from .orthopoly import (
    RecurrenceData,
    eval_basis,
    kappa_logproduct,
    recurrence_from_moments,
    subleading_coefficients,
)
from .asymptotics import (
    AsymptoticPrediction,
    CoefficientAsymptotics,
    coeff_asym,
    diff_identity_rhs,
    equilibrium_psi,
    equilibrium_tail,
    g_boundary,
    g_value,
    johansson_log,
    phase_t,
    phases,
    szego_boundary,
    szego_infinity,
    szego_value,
    theorem1_log,
)
from .mc_gue import McEstimate, mc_average_log, sample_spectrum
from .specfun import (
    SpecialConstant,
    digamma,
    log_C,
    log_barnes_G,
    log_gamma,
    zeta_prime_minus1,
)

__all__ = [
    "DEFAULT_CTX",
    "PrecisionContext",
    "WeightSpec",
    "MomentTable",
    "moment_table",
    "symmetric_moment_oracle",
    "weight_eval",
    "LogDeterminant",
    "hankel_log_determinant",
    "selberg_log",
    "char_poly_average_log",
    "RecurrenceData",
    "recurrence_from_moments",
    "subleading_coefficients",
    "kappa_logproduct",
    "eval_basis",
    "AsymptoticPrediction",
    "CoefficientAsymptotics",
    "coeff_asym",
    "diff_identity_rhs",
    "equilibrium_psi",
    "equilibrium_tail",
    "g_value",
    "g_boundary",
    "johansson_log",
    "phase_t",
    "phases",
    "szego_value",
    "szego_boundary",
    "szego_infinity",
    "theorem1_log",
    "McEstimate",
    "mc_average_log",
    "sample_spectrum",
    "SpecialConstant",
    "log_gamma",
    "digamma",
    "log_C",
    "log_barnes_G",
    "zeta_prime_minus1",
]

__version__ = "0.1.0"

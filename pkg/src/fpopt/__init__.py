"""Fastest-decaying Fokker-Planck coefficient pairs for a prescribed Gaussian.

Given an equilibrium covariance, the package constructs the non-symmetric
drift/diffusion pair whose propagator norm decays at the best possible rate
(the largest eigenvalue of the inverse covariance) with a certified
multiplicative constant arbitrarily close to 1, and analyses arbitrary
admissible pairs and piecewise-constant-in-time schedules through exact
matrix-exponential propagator norms.
"""

from .errors import (
    DegenerateSchedule,
    EigenFailure,
    FpoptError,
    InvalidConstant,
    InvalidInterval,
    InvalidMatrix,
    MixedEquilibria,
    NotAntisymmetric,
    NotApplicable2D,
    NotPSD,
    NotPositiveStable,
    NotSymmetric,
    RateTooLarge,
    TraceBudgetExceeded,
)
from .kernel import (
    RANK_TOL,
    SYM_TOL,
    expm,
    general_eigenvalues,
    kalman_rank,
    solve_continuous_lyapunov,
    spectral_abscissa_gap,
    spectral_norm,
    sym_eigen,
)
from .equilibrium import (
    ADMISSIBILITY_TOL,
    CoefficientPair,
    Covariance,
    ValidationReport,
    baseline_envelope,
    make_pair,
    same_equilibrium,
    spectral_gap,
    validate_pair,
)
from .construction import (
    EquidistributingBasis,
    GrowthRow,
    LyapunovWeights,
    OptimalCertificate,
    arithmetic_weights,
    construct_optimal,
    equidistribute_basis,
    frobenius_bound,
    growth_study,
    shifted_weights,
    skew_coupling,
)
from .propagator import (
    NormCurve,
    Schedule,
    ScheduleRanking,
    best_constant_2d,
    compare_schedules,
    initial_decay_rate,
    max_initial_decay,
    norm_curve,
    propagator,
    sharp_constant,
    tangency_time,
)

__version__ = "0.1.0"

__all__ = [
    "ADMISSIBILITY_TOL",
    "CoefficientPair",
    "Covariance",
    "DegenerateSchedule",
    "EigenFailure",
    "EquidistributingBasis",
    "FpoptError",
    "GrowthRow",
    "InvalidConstant",
    "InvalidInterval",
    "InvalidMatrix",
    "LyapunovWeights",
    "MixedEquilibria",
    "NormCurve",
    "NotAntisymmetric",
    "NotApplicable2D",
    "NotPSD",
    "NotPositiveStable",
    "NotSymmetric",
    "OptimalCertificate",
    "RANK_TOL",
    "RateTooLarge",
    "SYM_TOL",
    "Schedule",
    "ScheduleRanking",
    "TraceBudgetExceeded",
    "ValidationReport",
    "arithmetic_weights",
    "baseline_envelope",
    "best_constant_2d",
    "compare_schedules",
    "construct_optimal",
    "equidistribute_basis",
    "expm",
    "frobenius_bound",
    "general_eigenvalues",
    "growth_study",
    "initial_decay_rate",
    "kalman_rank",
    "make_pair",
    "max_initial_decay",
    "norm_curve",
    "propagator",
    "same_equilibrium",
    "sharp_constant",
    "shifted_weights",
    "skew_coupling",
    "solve_continuous_lyapunov",
    "spectral_abscissa_gap",
    "spectral_gap",
    "spectral_norm",
    "sym_eigen",
    "tangency_time",
    "validate_pair",
]

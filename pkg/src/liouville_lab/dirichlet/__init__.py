from .poly import DirichletPolynomial, evaluate, evaluate_grid, evaluate_many
from .meanvalue import (
    ExceptionalSet,
    QuadratureParams,
    halasz_montgomery_ratio,
    large_values_measure,
    mean_value_ratio,
    plancherel_check,
    plancherel_lhs,
    saffari_vaughan_ratio,
    twisted_sum_profile,
)
from .decomposition import (
    PrimeBlockDecomposition,
    build_decomposition,
    omega_in,
    restricted_factorization_error,
    turan_variance,
)
from .trials import hm_trials, mean_value_trials, plancherel_trials, trial_rng

__all__ = [
    "DirichletPolynomial",
    "evaluate",
    "evaluate_grid",
    "evaluate_many",
    "ExceptionalSet",
    "QuadratureParams",
    "halasz_montgomery_ratio",
    "large_values_measure",
    "mean_value_ratio",
    "plancherel_check",
    "plancherel_lhs",
    "saffari_vaughan_ratio",
    "twisted_sum_profile",
    "PrimeBlockDecomposition",
    "build_decomposition",
    "omega_in",
    "restricted_factorization_error",
    "turan_variance",
    "hm_trials",
    "mean_value_trials",
    "plancherel_trials",
    "trial_rng",
]

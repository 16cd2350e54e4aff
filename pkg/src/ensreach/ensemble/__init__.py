"""Sampled ensembles: data types, flows, condition checks and spectral data."""

from .conditions import (
    CheckResult,
    char_poly_coeffs,
    check_N1,
    check_N2,
    check_S1,
    check_S2,
    kalman_matrix,
    run_all,
)
from .simulate import (
    apply_polynomial,
    diagonal_pwc_response,
    error_profile,
    expm1_ratio,
    simulate_continuous_pwc,
    simulate_discrete,
    sup_error,
)
from .spectral import classify_arc, eigendecompose_continuous, lipschitz_estimate
from .types import (
    EigenDecomposition,
    EnsembleSystem,
    InputSequence,
    ParameterGrid,
    PiecewiseConstantInput,
    StateFamily,
    TargetFamily,
)

__all__ = [
    "CheckResult", "EigenDecomposition", "EnsembleSystem", "InputSequence",
    "ParameterGrid", "PiecewiseConstantInput", "StateFamily", "TargetFamily",
    "apply_polynomial",
    "diagonal_pwc_response", "char_poly_coeffs", "check_N1", "check_N2", "check_S1",
    "check_S2", "classify_arc", "eigendecompose_continuous", "error_profile",
    "expm1_ratio", "kalman_matrix", "lipschitz_estimate", "run_all",
    "simulate_continuous_pwc", "simulate_discrete", "sup_error",
]

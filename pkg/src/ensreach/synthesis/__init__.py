"""Input synthesis for ensembles: Methods S1, S2, continuous S2 and Hermite splitting."""

from .common import approximate_on_arc, input_from_poly, poly_from_input, pwc_from_poly
from .continuous import exp_factor_tau, exp_sets_separated, method_s2_continuous
from .discrete import assemble_s1_poly, method_s1, method_s2
from .hermite import HermiteDecomposition, HermiteStructure, hermite_decompose, hermite_indices
from .report import BudgetEntry, SynthesisReport

__all__ = [
    "BudgetEntry", "HermiteDecomposition", "HermiteStructure", "SynthesisReport",
    "approximate_on_arc", "assemble_s1_poly", "exp_factor_tau", "exp_sets_separated",
    "hermite_decompose", "hermite_indices", "input_from_poly", "method_s1", "method_s2",
    "method_s2_continuous", "poly_from_input", "pwc_from_poly",
]

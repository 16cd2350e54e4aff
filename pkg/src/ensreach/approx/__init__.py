"""Polynomial approximation on intervals, circles and compact sets."""

from .bernstein import (bernstein_apply, bernstein_bound, bernstein_degree, bernstein_nodes,
                        bernstein_to_monomial)
from .fejer import (circle_grid, extend_arc_to_circle, fejer_bound, fejer_degree, fejer_poly,
                    fourier_coeffs)
from .fit import FitResult, fit_polynomial
from .indicator import IndicatorResult, indicator_polys, min_separation
from .polynomial import ComplexPolynomial, LaurentPolynomial
from .runge import (RationalSum, RungeBudget, RungeResult, SegmentSet, ShiftedSum,
                    choose_centers, grid_segments, pole_shift, polynomialize, rational_approx,
                    runge_approx, runge_certified, taylor_coeffs_pole)

__all__ = [
    "ComplexPolynomial", "LaurentPolynomial", "FitResult", "fit_polynomial",
    "bernstein_apply", "bernstein_bound", "bernstein_degree", "bernstein_nodes",
    "bernstein_to_monomial", "circle_grid", "extend_arc_to_circle", "fejer_bound",
    "fejer_degree", "fejer_poly", "fourier_coeffs", "IndicatorResult", "indicator_polys",
    "min_separation", "RationalSum", "RungeBudget", "RungeResult", "SegmentSet", "ShiftedSum",
    "choose_centers", "grid_segments", "pole_shift", "polynomialize", "rational_approx",
    "runge_approx", "runge_certified", "taylor_coeffs_pole",
]

"""Helpers shared by the synthesis methods."""

import numpy as np

from ..approx import (
    ComplexPolynomial,
    bernstein_degree,
    bernstein_nodes,
    bernstein_to_monomial,
    circle_grid,
    extend_arc_to_circle,
    fejer_degree,
    fejer_poly,
    fit_polynomial,
    fourier_coeffs,
    runge_approx,
)
from ..ensemble import InputSequence, PiecewiseConstantInput, classify_arc, lipschitz_estimate
from ..errors import ArcClassificationError, ConditionError, DegreeCapError, ToleranceError

MODES = ("adaptive", "certified")
COMPOSE_CAP = 5000


def require(result):
    """Raise :class:`ConditionError` unless a check passed."""
    if not result.passed:
        raise ConditionError(result.name, f"margin {result.margin:.3g}")
    return result


def input_from_poly(poly):
    """Discrete input realising ``p(A) b``: ``u_t`` is the coefficient of ``z^{T-1-t}``."""
    return InputSequence(np.asarray(poly.coeffs, dtype=complex)[::-1].copy())


def poly_from_input(u):
    return ComplexPolynomial(np.asarray(u.values)[::-1])


def pwc_from_poly(poly, tau):
    """Piecewise constant input with ``sum_l u_{N-1-l} z^l = p(z)``."""
    return PiecewiseConstantInput(tau, np.asarray(poly.coeffs, dtype=complex)[::-1].copy())


def validation_pair(sys, f, validation):
    if validation is None:
        return sys, f
    sys_v, f_v = validation
    f_v.check(sys_v)
    return sys_v, f_v


def _certified_interval(z, y, tol):
    x = z.real
    order = np.argsort(x)
    x, y = x[order], y[order]
    a, b = x[0], x[-1]
    L, M = lipschitz_estimate(x, y)
    n = bernstein_degree(M, L, b - a, tol)
    nodes = bernstein_nodes(a, b, n)
    # node values from the piecewise-linear interpolant of the samples
    f_nodes = np.interp(nodes, x, y.real) + 1j * np.interp(nodes, x, y.imag)
    return bernstein_to_monomial(f_nodes, n, (a, b))


def _certified_circle(z, y, tol):
    L, _ = lipschitz_estimate(z, y)
    # the chord closing the arc may be steeper than the data
    L = max(L, abs(y[-1] - y[0]) / abs(z[-1] - z[0]))
    n = fejer_degree(L, 2 * tol / 3)
    Q = 8 * n
    w = circle_grid(Q)
    F = fejer_poly(fourier_coeffs(extend_arc_to_circle(z, y, w), n), n)
    neg = F.negative_part()
    if neg.is_zero():
        return F.positive_part()
    # F^-(1/z) ~ F^-(q(z)); the error is at most sum_k k|c_k| times |1/z - q|
    lip = float(np.sum(np.arange(neg.coeffs.size) * np.abs(neg.coeffs)))
    q = runge_approx(lambda s: 1 / s, z, tol / (3 * max(lip, 1.0)), mode="certified",
                     omega_margin=0.9 * float(np.abs(z).min())).poly
    if neg.degree * q.degree > COMPOSE_CAP:
        raise DegreeCapError(f"composed Laurent part exceeds degree cap {COMPOSE_CAP}")
    return F.positive_part() + neg.compose(q)


def approximate_on_arc(z, y, tol, mode, z_val, y_val):
    """Polynomial ``p`` with ``|p(z) - y| <= tol`` measured on ``(z_val, y_val)``.

    Returns ``(poly, measured_error, provenance)``. Adaptive mode works on any
    ordered arc; certified mode needs a real interval (Bernstein) or an arc of
    the unit circle (Fejer).
    """
    z = np.asarray(z, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if mode == "adaptive":
        fit = fit_polynomial(z, y, tol, z_val, y_val)
        return fit.poly, fit.error, "adaptive"
    if mode != "certified":
        raise ValueError(f"unknown mode {mode!r}")
    if not np.any(y):
        return ComplexPolynomial([0]), 0.0, "certified"
    kind = classify_arc(z)
    if kind == "real_interval":
        p = _certified_interval(z, y, tol)
    elif kind == "circle_arc":
        p = _certified_circle(z, y, tol)
    else:
        raise ArcClassificationError(
            "certified mode needs a real interval or a unit-circle arc; use adaptive mode")
    err = float(np.max(np.abs(p(z_val) - y_val)))
    if err > tol:
        raise ToleranceError(
            f"certified {kind} approximation measured {err:.3g} > {tol:.3g} after monomial "
            "conversion; use adaptive mode")
    return p, err, "certified"

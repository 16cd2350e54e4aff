"""Fourier coefficients and Fejer means on the unit circle."""

import math

import numpy as np

from ..errors import DegreeCapError
from .polynomial import LaurentPolynomial

DEGREE_CAP = 10**6
OVERSAMPLING = 8


def circle_grid(Q):
    """``Q`` equispaced points ``e^{2 pi i j / Q}`` on the unit circle."""
    return np.exp(2j * np.pi * np.arange(Q) / Q)


def fourier_coeffs(f_samples, n):
    """Coefficients ``g(k)``, ``|k| < n``, from samples on :func:`circle_grid`.

    The trapezoidal rule on the periodic grid is the discrete Fourier
    transform; it is exact for trigonometric polynomials of degree < Q/2.
    Returns an array indexed by ``k + n - 1``.
    """
    f = np.asarray(f_samples, dtype=complex)
    Q = f.size
    if Q < OVERSAMPLING * n:
        raise ValueError(f"need at least {OVERSAMPLING * n} circle samples for band {n}")
    F = np.fft.fft(f) / Q
    k = np.arange(-(n - 1), n)
    return F[k % Q]


def fejer_poly(coeffs, n):
    """``F_{f,n}(z) = sum_{|k|<n} (n - |k|)/n * g(k) z^k``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    k = np.arange(-(n - 1), n)
    return LaurentPolynomial(coeffs * (n - np.abs(k)) / n, n)


def fejer_bound(L_f, n):
    """``2 sqrt(2) pi L_f ln(n) / n``."""
    n = np.asarray(n, dtype=float)
    return 2 * math.sqrt(2) * math.pi * L_f * np.log(n) / n


def fejer_degree(L_f, eps, degree_cap=DEGREE_CAP):
    """Smallest ``n >= 2`` with ``fejer_bound(L_f, n) <= eps``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    start, chunk = 2, 4096
    while start <= degree_cap:
        n = np.arange(start, min(start + chunk, degree_cap + 1))
        ok = np.flatnonzero(fejer_bound(L_f, n) <= eps)
        if ok.size:
            return int(n[ok[0]])
        start += chunk
        chunk *= 2
    raise DegreeCapError(f"Fejer degree for eps={eps:g} exceeds cap {degree_cap}; use adaptive mode")


def _arc_angles(arc_points):
    """Unwrapped angles along an ordered arc, starting in ``(-pi, pi]``."""
    return np.unwrap(np.angle(arc_points))


def extend_arc_to_circle(arc_points, arc_values, circle_points):
    """Continuous extension of data on a circle arc to the whole circle.

    On the arc the data is interpolated linearly in angle; elsewhere
    ``w1 + (w2 - w1)(z - z1)/(z2 - z1)`` joins the end values.
    """
    arc_points = np.asarray(arc_points, dtype=complex)
    arc_values = np.asarray(arc_values, dtype=complex)
    z = np.asarray(circle_points, dtype=complex)
    phi = _arc_angles(arc_points)
    if phi[-1] < phi[0]:
        phi, arc_points, arc_values = phi[::-1], arc_points[::-1], arc_values[::-1]
    span = phi[-1] - phi[0]
    rel = np.mod(np.angle(z) - phi[0], 2 * np.pi)
    if span >= 2 * np.pi - 1e-12:
        # the arc is the whole circle; nothing to extend
        return (np.interp(rel, phi - phi[0], arc_values.real, period=2 * np.pi)
                + 1j * np.interp(rel, phi - phi[0], arc_values.imag, period=2 * np.pi))
    on_arc = rel <= span
    out = np.empty(z.shape, dtype=complex)
    out[on_arc] = (np.interp(rel[on_arc], phi - phi[0], arc_values.real)
                   + 1j * np.interp(rel[on_arc], phi - phi[0], arc_values.imag))
    z1, z2 = arc_points[0], arc_points[-1]
    w1, w2 = arc_values[0], arc_values[-1]
    out[~on_arc] = w1 + (w2 - w1) * (z[~on_arc] - z1) / (z2 - z1)
    return out

"""Adaptive least-squares polynomial fits with an a-posteriori sup check.

The fit runs in a Krylov (Vandermonde-with-Arnoldi) basis on the centred and
scaled points, then converts to monomials in ``z``. The acceptance test is
always made on the converted monomial polynomial because that is what the
synthesis pipeline consumes.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DegreeCapError
from .polynomial import ComplexPolynomial

ESCALATION_CAP = 60


@dataclass
class FitResult:
    poly: ComplexPolynomial
    error: float
    degree: int
    mode: str = "adaptive"


def _arnoldi(w, max_degree):
    N = w.size
    Q = np.zeros((N, max_degree + 1), dtype=complex)
    H = np.zeros((max_degree + 1, max_degree), dtype=complex)
    Q[:, 0] = 1.0
    for k in range(max_degree):
        v = w * Q[:, k]
        for j in range(k + 1):
            H[j, k] = np.vdot(Q[:, j], v) / N
            v = v - H[j, k] * Q[:, j]
        H[k + 1, k] = np.linalg.norm(v) / np.sqrt(N)
        if abs(H[k + 1, k]) < 1e-13:
            return Q[:, : k + 1], H[: k + 1, :k]
        Q[:, k + 1] = v / H[k + 1, k]
    return Q, H


def _basis_monomials(H, d):
    """Monomial coefficients (in ``w``) of the first ``d + 1`` Arnoldi basis polynomials."""
    B = np.zeros((d + 1, d + 1), dtype=complex)
    B[0, 0] = 1.0
    for k in range(d):
        v = np.zeros(d + 1, dtype=complex)
        v[1:] = B[k, :-1]
        v -= H[: k + 1, k] @ B[: k + 1]
        B[k + 1] = v / H[k + 1, k]
    return B


def _frame(z):
    c = 0.5 * (z.real.min() + z.real.max()) + 0.5j * (z.imag.min() + z.imag.max())
    s = float(np.max(np.abs(z - c)))
    return c, (s if s > 0 else 1.0)


def fit_polynomial(z, y, tol, z_val=None, y_val=None, max_degree=ESCALATION_CAP, start_degree=0):
    """Least-squares fits of escalating degree until the validation sup error is ``<= tol``.

    ``z_val``/``y_val`` default to the fitting data.
    """
    z = np.asarray(z, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    if z_val is None:
        z_val, y_val = z, y
    z_val = np.asarray(z_val, dtype=complex).ravel()
    y_val = np.asarray(y_val, dtype=complex).ravel()
    if not np.any(y) and not np.any(y_val):
        return FitResult(ComplexPolynomial([0]), 0.0, 0)
    c, s = _frame(z)
    Q, H = _arnoldi((z - c) / s, max_degree)
    top = Q.shape[1] - 1
    best = None
    for d in range(min(start_degree, top), top + 1):
        coef_q = Q[:, : d + 1].conj().T @ y / z.size
        mono_w = coef_q @ _basis_monomials(H, d)
        poly = ComplexPolynomial(mono_w).affine_substitute(c, s)
        err = float(np.max(np.abs(poly(z_val) - y_val)))
        if best is None or err < best.error:
            best = FitResult(poly, err, poly.degree)
        if err <= tol:
            return FitResult(poly, err, poly.degree)
    raise DegreeCapError(
        f"adaptive fit reached degree {top} with error {best.error:.3g} > {tol:.3g}"
    )

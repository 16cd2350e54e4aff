"""Flows of sampled ensembles and their sup-norm distance to a target."""

import math

import numpy as np

from .types import InputSequence, PiecewiseConstantInput, StateFamily

# |tau*lambda| below this uses the Taylor branch of (e^x - 1)/x
SERIES_THRESHOLD = 1e-6


def simulate_discrete(sys, u):
    """Terminal state ``x_T`` of ``x_{t+1} = A x_t + B u_t`` from ``x_0 = 0``.

    Equivalently ``sum_k A^{T-1-k} B u_k`` at every grid sample.
    """
    if not isinstance(u, InputSequence):
        u = InputSequence(u)
    U = u.as_matrix()
    if U.shape[1] != sys.m:
        raise ValueError(f"input has dimension {U.shape[1]}, system has m={sys.m}")
    x = np.zeros((sys.M, sys.n), dtype=complex)
    for ut in U:
        x = np.einsum("mij,mj->mi", sys.A, x) + sys.B @ ut
    return StateFamily(x)


def apply_polynomial(A, b, coeffs):
    """Evaluate ``p(A_i) b_i`` for every sample by Horner's rule.

    ``coeffs`` are ascending monomial coefficients of ``p``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    y = np.zeros_like(b, dtype=complex)
    for c in coeffs[::-1]:
        y = np.einsum("mij,mj->mi", A, y) + c * b
    return y


def expm1_ratio(x):
    """``(e^x - 1)/x`` with its removable singularity at 0 filled in."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < SERIES_THRESHOLD
    xs = x[~small]
    out[~small] = np.expm1(xs) / xs
    # degree-6 Taylor series: sum x^j / (j+1)!
    xm = x[small]
    acc = np.zeros_like(xm)
    for j in range(6, -1, -1):
        acc = acc * xm + 1.0 / math.factorial(j + 1)
    out[small] = acc
    return out


def diagonal_pwc_response(lambdas, inp):
    """Diagonal-coordinate states ``tau * E(tau*lam) * p(e^{tau*lam})``.

    ``p(z) = sum_l u_{N-1-l} z^l`` so the most recent input multiplies ``z^0``.
    """
    lam = np.asarray(lambdas, dtype=complex)
    tau = inp.tau
    z = np.exp(tau * lam)
    p = np.zeros_like(z)
    # Horner in z with coefficients u_0 (highest power) .. u_{N-1} (constant)
    for ul in inp.values:
        p = p * z + ul
    return tau * expm1_ratio(tau * lam) * p


def simulate_continuous_pwc(eig, inp):
    """Closed-form terminal state of ``x' = A x + b u`` under a piecewise constant input.

    ``eig`` is an :class:`EigenDecomposition` of the ensemble; no time stepping
    is performed.
    """
    if not isinstance(inp, PiecewiseConstantInput):
        raise TypeError("expected a PiecewiseConstantInput")
    phi = diagonal_pwc_response(eig.lambdas, inp)
    return StateFamily(np.einsum("mij,mj->mi", eig.T, phi))


def error_profile(x, f):
    """Euclidean error ``||x(theta_i) - f(theta_i)||`` for every sample."""
    xa = x.x if isinstance(x, StateFamily) else np.asarray(x)
    fa = f.x if isinstance(f, StateFamily) else np.asarray(f)
    if xa.shape != fa.shape:
        raise ValueError(f"shape mismatch {xa.shape} vs {fa.shape}")
    d = np.abs(xa - fa)
    # rescale per row so tiny nonzero differences do not underflow to 0
    scale = d.max(axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    return scale * np.sqrt(np.sum((d / safe[:, None]) ** 2, axis=1))


def sup_error(x, f):
    """Max over grid samples of the Euclidean norm of ``x - f``."""
    return float(np.max(error_profile(x, f)))

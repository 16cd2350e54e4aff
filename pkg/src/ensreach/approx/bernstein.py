"""Bernstein polynomials on a real interval with the Gzyl-Palacios error bound."""

import math
import warnings
from fractions import Fraction

import numpy as np
from scipy.stats import binom

from ..errors import DegreeCapError
from .polynomial import ComplexPolynomial

DEGREE_CAP = 10**7
MONOMIAL_CAP = 200
CONDITIONING_WARN = 60


def bernstein_bound(M_f, L_f, length, n):
    """``sqrt(2) * (4 M_f + length L_f / 2) * sqrt(ln n / n)``, natural log."""
    n = np.asarray(n, dtype=float)
    return math.sqrt(2) * (4 * M_f + length * L_f / 2) * np.sqrt(np.log(n) / n)


def bernstein_degree(M_f, L_f, length, eps, degree_cap=DEGREE_CAP):
    """Smallest ``n >= 3`` whose Gzyl-Palacios bound is at most ``eps``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if M_f < 0 or L_f < 0 or not length > 0:
        raise ValueError("need M_f, L_f >= 0 and length > 0")
    start, chunk = 3, 4096
    while start <= degree_cap:
        n = np.arange(start, min(start + chunk, degree_cap + 1))
        ok = np.flatnonzero(bernstein_bound(M_f, L_f, length, n) <= eps)
        if ok.size:
            return int(n[ok[0]])
        start += chunk
        chunk *= 2
    raise DegreeCapError(
        f"Bernstein degree for eps={eps:g} exceeds cap {degree_cap}; use adaptive mode"
    )


def bernstein_nodes(a, b, n):
    return a + (b - a) * np.arange(n + 1) / n


def bernstein_apply(f_samples, n, x, interval=(0.0, 1.0)):
    """Evaluate ``B_{n,f}(x)`` from the ``n + 1`` node values ``f(a + k(b-a)/n)``.

    Weights are binomial probabilities computed in log space, so large ``n``
    neither overflows nor cancels. Complex data is handled componentwise by
    linearity.
    """
    a, b = interval
    f = np.asarray(f_samples)
    if f.shape != (n + 1,):
        raise ValueError(f"need exactly {n + 1} node values")
    x = np.asarray(x, dtype=float)
    if np.any(x < a) or np.any(x > b):
        raise ValueError(f"x outside [{a}, {b}]")
    t = (x - a) / (b - a)
    W = binom.pmf(np.arange(n + 1), n, t[..., None])
    return W @ f


def _exact_monomial(f, n, a, b):
    """Monomial coefficients in ``x`` computed in rational arithmetic, then rounded."""
    fr = [Fraction(v) for v in f]
    # forward differences: ct[j] = C(n, j) * Delta^j f_0 in t = (x - a)/(b - a)
    diffs, ct = list(fr), []
    for j in range(n + 1):
        ct.append(math.comb(n, j) * diffs[0])
        diffs = [q - p for p, q in zip(diffs, diffs[1:])]
    a, h = Fraction(a), Fraction(b) - Fraction(a)
    # expand sum_j ct[j] ((x - a)/h)^j by Horner on coefficient lists
    out = [Fraction(0)]
    lin = [-a / h, 1 / h]
    for c in reversed(ct):
        prod = [Fraction(0)] * (len(out) + 1)
        for i, o in enumerate(out):
            prod[i] += o * lin[0]
            prod[i + 1] += o * lin[1]
        prod[0] += c
        out = prod
    return np.array([float(c) for c in out])


def bernstein_to_monomial(f_samples, n, interval=(0.0, 1.0), monomial_cap=MONOMIAL_CAP):
    """Monomial coefficients in ``x`` of ``B_{n,f}`` on ``interval``.

    In ``t = (x - a)/(b - a)`` the coefficient of ``t^j`` is
    ``C(n, j) * (j-th forward difference of f at 0)``. The conversion is done
    exactly on the binary values of the samples, so the returned coefficients
    are correctly rounded; evaluating them can still cancel badly.
    """
    if n > monomial_cap:
        raise DegreeCapError(
            f"monomial conversion of degree {n} exceeds cap {monomial_cap}; use adaptive mode"
        )
    if n > CONDITIONING_WARN:
        warnings.warn(f"monomial form of a degree-{n} Bernstein polynomial is ill-conditioned",
                      RuntimeWarning, stacklevel=2)
    f = np.asarray(f_samples, dtype=complex)
    if f.shape != (n + 1,):
        raise ValueError(f"need exactly {n + 1} node values")
    a, b = interval
    re = _exact_monomial(f.real, n, a, b)
    im = _exact_monomial(f.imag, n, a, b)
    return ComplexPolynomial(re + 1j * im)

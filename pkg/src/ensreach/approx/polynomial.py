"""Complex polynomials in the monomial basis and finite Laurent polynomials."""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P


def _trim(c, tol=0.0):
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    nz = np.flatnonzero(np.abs(c) > tol)
    return c[: nz[-1] + 1].copy() if nz.size else np.zeros(1, dtype=complex)


@dataclass
class ComplexPolynomial:
    """``sum_j coeffs[j] * z**j`` with complex coefficients.

    Trailing zero coefficients are dropped on construction, so
    ``degree`` of the zero polynomial is 0.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _trim(self.coeffs)

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def identity(cls):
        return cls([0, 1])

    @property
    def degree(self):
        return self.coeffs.size - 1

    def is_zero(self):
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def __add__(self, other):
        other = _coerce(other)
        return ComplexPolynomial(P.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return ComplexPolynomial(P.polysub(self.coeffs, other.coeffs))

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return ComplexPolynomial(self.coeffs * other)
        return ComplexPolynomial(P.polymul(self.coeffs, _coerce(other).coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = ComplexPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def compose(self, inner):
        """``self(inner(z))`` by Horner's rule on coefficient arrays."""
        inner = _coerce(inner)
        out = ComplexPolynomial.constant(0)
        for c in self.coeffs[::-1]:
            out = out * inner + c
        return out

    def affine_substitute(self, shift, scale):
        """``self((z - shift) / scale)``."""
        return self.compose(ComplexPolynomial([-shift / scale, 1 / scale]))

    def truncated(self, tol):
        """Drop trailing coefficients with magnitude ``<= tol``."""
        return ComplexPolynomial(_trim(self.coeffs, tol))


def _coerce(p):
    return p if isinstance(p, ComplexPolynomial) else ComplexPolynomial([p])


@dataclass
class LaurentPolynomial:
    """``sum_{k=-(n-1)}^{n-1} coeffs[k + n - 1] * z**k``."""

    coeffs: np.ndarray
    band: int

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (2 * self.band - 1,):
            raise ValueError(f"expected {2 * self.band - 1} coefficients for band {self.band}")

    def coefficient(self, k):
        if abs(k) >= self.band:
            return 0j
        return self.coeffs[k + self.band - 1]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.positive_part()(z) + self.negative_part()(1 / z)

    def positive_part(self):
        """Terms with ``k >= 0`` as a polynomial in ``z``."""
        return ComplexPolynomial(self.coeffs[self.band - 1:])

    def negative_part(self):
        """Terms with ``k < 0`` as a polynomial in ``1/z`` (no constant term)."""
        neg = self.coeffs[: self.band - 1][::-1]
        return ComplexPolynomial(np.concatenate([[0], neg]))

"""Polynomials that are close to 1 on one compact set and to 0 on the others."""

from dataclasses import dataclass

import numpy as np

from ..errors import GridError
from .fit import fit_polynomial
from .polynomial import ComplexPolynomial
from .runge import default_pad, runge_certified

MIN_SEPARATION = 1e-6


@dataclass
class IndicatorResult:
    poly: ComplexPolynomial
    error: float
    mode: str

    @property
    def degree(self):
        return self.poly.degree


def set_distance(a, b):
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    return float(np.abs(a[:, None] - b[None, :]).min())


def min_separation(sets):
    """Smallest pairwise distance between sampled sets (``inf`` for one set)."""
    n = len(sets)
    return min((set_distance(sets[i], sets[j]) for i in range(n) for j in range(i + 1, n)),
               default=np.inf)


def _nearest_set(z, sets):
    d = np.stack([np.abs(z.ravel()[:, None] - np.ravel(s)[None, :]).min(axis=1) for s in sets])
    return d.argmin(axis=0).reshape(z.shape)


def indicator_polys(sets, eps_list, mode="adaptive", validation=None):
    """``q_k`` with measured ``|q_k - h_k| <= eps_k`` on the union of the sets.

    ``h_k`` is 1 on ``sets[k]`` and 0 on the others. In certified mode the
    indicator is extended to disjoint tubes of radius ``d_min/4`` (where it is
    locally constant, hence holomorphic) and passed to the certified Runge
    construction. ``validation`` is an optional list of denser samplings.
    """
    sets = [np.asarray(s, dtype=complex).ravel() for s in sets]
    eps_list = np.broadcast_to(np.asarray(eps_list, dtype=float), (len(sets),))
    if np.any(eps_list <= 0):
        raise ValueError("eps_list entries must be positive")
    if len(sets) == 1:
        return [IndicatorResult(ComplexPolynomial([1]), 0.0, mode)]
    d_min = min_separation(sets)
    if d_min < MIN_SEPARATION:
        raise GridError(f"sets are not separated on the samples (distance {d_min:.3g})")
    val = sets if validation is None else [np.asarray(v, dtype=complex).ravel() for v in validation]
    K = np.concatenate(sets)
    K_val = np.concatenate(val)
    owner = np.concatenate([np.full(v.size, k) for k, v in enumerate(val)])
    pad = max(default_pad(s) for s in sets)
    out = []
    for k, eps in enumerate(eps_list):
        if mode == "certified":
            def h(z, k=k):
                z = np.asarray(z, dtype=complex)
                return (_nearest_set(z, sets) == k).astype(complex)

            res = runge_certified(h, K, eps, d_min / 4, validation=K_val, pad=pad)
            out.append(IndicatorResult(res.poly, res.error, "certified"))
        elif mode == "adaptive":
            y = np.concatenate([np.full(s.size, 1.0 if j == k else 0.0) for j, s in enumerate(sets)])
            fit = fit_polynomial(K, y, eps, K_val, (owner == k).astype(float))
            out.append(IndicatorResult(fit.poly, fit.error, "adaptive"))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return out

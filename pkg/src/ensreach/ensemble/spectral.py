"""Eigenvalue arcs, normalised eigenbases and sampled Lipschitz estimates."""

import itertools

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import ConditionError, GridError
from .conditions import GAP_TOL, REACH_TOL
from .types import EigenDecomposition

TIE_TOL = 1e-12
SAFETY_FACTOR = 1.2


def _match(prev, cur):
    """Permutation of ``cur`` minimising total distance to ``prev``.

    Raises :class:`GridError` when a different assignment is within
    ``TIE_TOL`` of the optimum.
    """
    cost = np.abs(prev[:, None] - cur[None, :])
    rows, cols = linear_sum_assignment(cost)
    best = cost[rows, cols].sum()
    n = len(prev)
    for i, j in itertools.combinations(range(n), 2):
        swapped = best - cost[i, cols[i]] - cost[j, cols[j]] + cost[i, cols[j]] + cost[j, cols[i]]
        if swapped - best <= TIE_TOL:
            raise GridError(
                "eigenvalue matching is ambiguous between consecutive samples; refine the grid"
            )
    return cols


def eigendecompose_continuous(sys, reach_tol=REACH_TOL, gap_tol=GAP_TOL, reference=None):
    """Diagonalise every sample with ``T^{-1} A T = diag(lambda)`` and ``T^{-1} b = 1``.

    Eigenvalues are ordered at the first sample by (real, imag) unless
    ``reference`` (an earlier decomposition) is given, in which case the
    ordering follows the nearest reference sample. Later samples are matched
    to their predecessor by nearest-neighbour assignment.
    """
    b = sys.b
    M, n = b.shape
    lambdas = np.empty((M, n), dtype=complex)
    Ts = np.empty((M, n, n), dtype=complex)
    residual = 0.0
    prev = None
    for i in range(M):
        w, V = np.linalg.eig(sys.A[i])
        if n > 1:
            gap = np.min(np.abs(w[:, None] - w[None, :])[~np.eye(n, dtype=bool)])
            if gap <= gap_tol:
                raise ConditionError("S2", f"repeated eigenvalue at sample {i} (gap {gap:.3g})")
        if prev is None:
            if reference is None:
                order = np.lexsort((w.imag, w.real))
            else:
                j = int(np.argmin(np.abs(reference.grid.samples - sys.grid.samples[i])))
                order = _match(reference.lambdas[j], w)
        else:
            order = _match(prev, w)
        w, V = w[order], V[:, order]
        beta = np.linalg.solve(V, b[i])
        scale = np.abs(beta) / np.linalg.norm(b[i])
        if np.min(scale) <= reach_tol:
            raise ConditionError(
                "N1", f"b has no component along eigenvector {int(np.argmin(scale))} at sample {i}"
            )
        T = V * beta[None, :]
        lambdas[i], Ts[i] = w, T
        residual = max(
            residual,
            np.linalg.norm(sys.A[i] @ T - T * w[None, :]),
            np.linalg.norm(np.linalg.solve(T, b[i]) - 1.0),
        )
        prev = w
    T_norm = float(np.max(np.linalg.norm(Ts, ord=2, axis=(1, 2))))
    return EigenDecomposition(lambdas, Ts, T_norm, sys.grid, residual=float(residual))


def lipschitz_estimate(xs, ys, safety_factor=SAFETY_FACTOR):
    """Sampled Lipschitz constant and sup of ``ys`` along an ordered curve.

    Returns ``(L, M)`` with ``L = safety_factor * max |dy|/|dx|`` over
    consecutive pairs and ``M = max |y|``.
    """
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    if xs.size < 2 or xs.shape != ys.shape:
        raise ValueError("need at least two matching samples")
    dx = np.abs(np.diff(xs))
    if np.any(dx == 0):
        raise ValueError("duplicate abscissae")
    L = safety_factor * float(np.max(np.abs(np.diff(ys)) / dx))
    return L, float(np.max(np.abs(ys)))


def classify_arc(z, tol=1e-9):
    """Return ``"real_interval"``, ``"circle_arc"`` or ``"general_arc"`` for ordered samples."""
    z = np.asarray(z, dtype=complex)
    scale = 1.0 + np.max(np.abs(z))
    if np.max(np.abs(z.imag)) <= tol * scale:
        d = np.diff(z.real)
        if np.all(d > 0) or np.all(d < 0):
            return "real_interval"
    if np.max(np.abs(np.abs(z) - 1.0)) <= tol:
        return "circle_arc"
    return "general_arc"

"""Hermite indices and the single-input decomposition of multi-input pairs."""

from dataclasses import dataclass, field

import numpy as np

from ..ensemble import EnsembleSystem

RANK_TOL = 1e-8


@dataclass
class HermiteStructure:
    """Hermite indices of ``(A, B)`` and, when reachable, the canonical blocks.

    ``selected`` lists ``(i, j)`` for the chosen columns ``A^j b_i``.
    ``T`` and ``blocks`` are ``None`` unless ``sum(indices) == n``.
    """

    indices: tuple
    selected: list
    T: np.ndarray = None
    blocks: list = field(default_factory=list)

    @property
    def reachable(self):
        return self.T is not None


def _independent(Q, v, ref, tol):
    """Whether ``v`` adds a direction to the orthonormal columns ``Q``."""
    if Q.shape[1]:
        v = v - Q @ (Q.conj().T @ v)
        v = v - Q @ (Q.conj().T @ v)  # second pass for orthogonality
    return np.linalg.norm(v) > tol * ref, v


def hermite_indices(A, B, tol=RANK_TOL):
    """Left-to-right selection from ``(b_1, A b_1, ..., b_2, A b_2, ...)``.

    A chain stops at its first dependent column; everything after it in the
    chain is dependent as well because the span selected so far is then
    ``A``-invariant modulo the current chain.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if B.ndim == 1:
        B = B[:, None]
    n, m = B.shape
    ref = max(np.linalg.norm(B), np.finfo(float).tiny)
    Q = np.zeros((n, 0), dtype=complex)
    selected, indices = [], []
    for i in range(m):
        v = B[:, i]
        h = 0
        while h < n:
            ok, r = _independent(Q, v, ref * max(1.0, np.linalg.norm(A, 2)) ** h, tol)
            if not ok:
                break
            Q = np.hstack([Q, (r / np.linalg.norm(r))[:, None]])
            selected.append((i, h))
            h += 1
            v = A @ v
        indices.append(h)
    out = HermiteStructure(tuple(indices), selected)
    if sum(indices) == n:
        T = np.column_stack([np.linalg.matrix_power(A, j) @ B[:, i] for i, j in selected])
        At = np.linalg.solve(T, A @ T)
        Bt = np.linalg.solve(T, B)
        blocks, start = [], 0
        for i, h in enumerate(indices):
            if h:
                blocks.append((At[start:start + h, start:start + h], Bt[start:start + h, i]))
            start += h
        out.T, out.blocks = T, blocks
    return out


@dataclass
class HermiteDecomposition:
    structures: list
    constant: bool
    indices: tuple
    first_offending: int = None
    subsystems: list = field(default_factory=list)


def hermite_decompose(sys, tol=RANK_TOL):
    """Hermite structure at every sample and, if the indices are constant, the subpairs.

    Returns the single-input ensembles ``(A_ii(theta), b_i(theta))`` for the
    inputs with ``h_i > 0``. Varying indices are reported through
    ``constant=False`` and ``first_offending`` rather than raised.
    """
    if sys.m < 2:
        raise ValueError("the Hermite decomposition needs at least two inputs")
    structs = [hermite_indices(A, B, tol) for A, B in zip(sys.A, sys.B)]
    ref = structs[0].indices
    bad = next((i for i, s in enumerate(structs) if s.indices != ref), None)
    out = HermiteDecomposition(structs, bad is None, ref, bad)
    if bad is None and structs[0].reachable:
        for b in range(len(structs[0].blocks)):
            Ab = np.array([s.blocks[b][0] for s in structs])
            bb = np.array([s.blocks[b][1] for s in structs])
            out.subsystems.append(EnsembleSystem(Ab, bb, sys.grid))
    return out

"""Sampled representations of parameter-dependent linear ensembles."""

from dataclasses import dataclass, field

import numpy as np

ARC_KINDS = ("real_interval", "circle_arc", "general_arc")


@dataclass
class ParameterGrid:
    """Ordered finite sampling of the parameter arc.

    Every sup-norm in this package is a maximum over such a grid.
    """

    samples: np.ndarray
    arc_kind: str = "general_arc"

    def __post_init__(self):
        s = np.asarray(self.samples)
        s = s.astype(float) if np.isrealobj(s) else s.astype(complex)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a parameter grid needs at least two samples")
        if self.arc_kind not in ARC_KINDS:
            raise ValueError(f"unknown arc kind {self.arc_kind!r}")
        if self.arc_kind == "real_interval":
            if np.iscomplexobj(s):
                raise ValueError("real_interval grids must be real")
            if not np.all(np.diff(s) > 0):
                raise ValueError("real_interval samples must be strictly increasing")
        elif np.min(np.abs(s[:, None] - s[None, :]) + np.eye(s.size)) == 0:
            raise ValueError("grid samples must be pairwise distinct")
        self.samples = s

    @classmethod
    def interval(cls, a, b, num=201):
        return cls(np.linspace(a, b, num), "real_interval")

    def __len__(self):
        return self.samples.size

    def refined(self, factor=2):
        """Grid with ``factor - 1`` points inserted between consecutive samples."""
        s = self.samples
        t = np.arange(factor) / factor
        inner = (s[:-1, None] + t[None, :] * np.diff(s)[:, None]).ravel()
        return ParameterGrid(np.append(inner, s[-1]), self.arc_kind)


def _as_stack(x, M, rows, cols, name):
    a = np.asarray(x, dtype=complex)
    if a.ndim == 2 and cols == 1 and a.shape == (M, rows):
        a = a[:, :, None]
    if a.shape != (M, rows, cols):
        raise ValueError(f"{name} has shape {a.shape}, expected {(M, rows, cols)}")
    return a


@dataclass
class EnsembleSystem:
    """Per-sample matrices ``A(theta_i)`` (n x n) and ``B(theta_i)`` (n x m).

    ``A`` is stored as an array of shape ``(M, n, n)`` and ``B`` as
    ``(M, n, m)``. A single-input ``B`` may be passed with shape ``(M, n)``.
    """

    A: np.ndarray
    B: np.ndarray
    grid: ParameterGrid

    def __post_init__(self):
        M = len(self.grid)
        A = np.asarray(self.A, dtype=complex)
        if A.ndim != 3 or A.shape[0] != M or A.shape[1] != A.shape[2]:
            raise ValueError(f"A has shape {A.shape}, expected (M, n, n) with M={M}")
        n = A.shape[1]
        B = np.asarray(self.B, dtype=complex)
        m = 1 if B.ndim == 2 else (B.shape[2] if B.ndim == 3 else -1)
        self.A = A
        self.B = _as_stack(B, M, n, m, "B")

    @classmethod
    def from_functions(cls, A, B, grid):
        """Sample callables ``A(theta)`` and ``B(theta)`` on ``grid``."""
        As = np.array([np.atleast_2d(A(t)) for t in grid.samples], dtype=complex)
        Bs = np.array([np.asarray(B(t), dtype=complex) for t in grid.samples])
        if Bs.ndim == 2:
            Bs = Bs[:, :, None]
        return cls(As, Bs, grid)

    @property
    def n(self):
        return self.A.shape[1]

    @property
    def m(self):
        return self.B.shape[2]

    @property
    def M(self):
        return self.A.shape[0]

    @property
    def b(self):
        """Input vectors of a single-input ensemble, shape ``(M, n)``."""
        if self.m != 1:
            raise ValueError(f"system has {self.m} inputs, expected 1")
        return self.B[:, :, 0]


@dataclass
class StateFamily:
    """Per-sample complex n-vectors, shape ``(M, n)``."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise ValueError("state family must have shape (M, n)")
        self.x = x

    def __len__(self):
        return self.x.shape[0]

    @property
    def n(self):
        return self.x.shape[1]


class TargetFamily(StateFamily):
    """Desired terminal states, one n-vector per grid sample."""

    @classmethod
    def from_function(cls, f, grid):
        return cls(np.array([np.atleast_1d(f(t)) for t in grid.samples], dtype=complex))

    @property
    def f(self):
        return self.x

    def check(self, sys):
        if self.x.shape != (sys.M, sys.n):
            raise ValueError(f"target has shape {self.x.shape}, system needs {(sys.M, sys.n)}")


@dataclass
class InputSequence:
    """Discrete-time input ``u_0 .. u_{T-1}``; shape ``(T,)`` or ``(T, m)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 0:
            v = v[None]
        if v.ndim not in (1, 2) or v.shape[0] < 1:
            raise ValueError("an input sequence needs at least one value")
        self.values = v

    @property
    def T(self):
        return self.values.shape[0]

    def as_matrix(self):
        return self.values[:, None] if self.values.ndim == 1 else self.values


@dataclass
class PiecewiseConstantInput:
    """Continuous-time input equal to ``values[l]`` on ``[l*tau, (l+1)*tau)``."""

    tau: float
    values: np.ndarray

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("step length tau must be positive")
        v = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if v.ndim != 1 or v.size < 1:
            raise ValueError("a piecewise constant input needs at least one scalar value")
        self.tau = float(self.tau)
        self.values = v

    @property
    def N(self):
        return self.values.size

    @property
    def horizon(self):
        return self.N * self.tau


@dataclass
class EigenDecomposition:
    """Continuity-matched diagonalisation with ``T^{-1} b`` scaled to ones.

    ``lambdas`` has shape ``(M, n)``; column ``k`` is the k-th eigenvalue arc.
    ``T`` has shape ``(M, n, n)``.
    """

    lambdas: np.ndarray
    T: np.ndarray
    T_norm: float
    grid: ParameterGrid
    residual: float = 0.0
    Tinv_f: np.ndarray = field(default=None)

    @property
    def n(self):
        return self.lambdas.shape[1]

    def transform(self, f):
        """Return ``T(theta_i)^{-1} f(theta_i)`` for every sample."""
        f = np.asarray(f.x if isinstance(f, StateFamily) else f, dtype=complex)
        return np.linalg.solve(self.T, f[:, :, None])[:, :, 0]

"""Pointwise tests of the reachability conditions (N1), (N2), (S1), (S2).

All checks are on-grid statements: they inspect the sampled matrices only and
cannot certify anything between samples.
"""

from dataclasses import dataclass, field

import numpy as np

REACH_TOL = 1e-8
DISJOINT_TOL = 1e-6
GAP_TOL = 1e-6
CHARPOLY_TOL = 1e-8


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float
    per_sample: np.ndarray = None
    values: np.ndarray = None
    pair: tuple = None
    a0: np.ndarray = None
    a_const: np.ndarray = None
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"name": self.name, "passed": bool(self.passed), "margin": float(self.margin)}
        if self.pair is not None:
            out["pair"] = [int(i) for i in self.pair]
        if self.per_sample is not None:
            out["failing_samples"] = [int(i) for i in np.flatnonzero(~self.per_sample)]
        out.update(self.detail)
        return out


def kalman_matrix(A, B):
    """``[B, AB, ..., A^{n-1}B]`` for a single matrix pair."""
    n = A.shape[0]
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def check_N1(sys, tol=REACH_TOL):
    """Per-sample reachability via the smallest singular value of the Kalman matrix."""
    K = np.array([kalman_matrix(A, B) for A, B in zip(sys.A, sys.B)])
    sigma = np.linalg.svd(K, compute_uv=False)[:, sys.n - 1]
    ok = sigma > tol
    return CheckResult("N1", bool(ok.all()), float(sigma.min()), per_sample=ok, values=sigma)


def check_N2(sys, tol=DISJOINT_TOL):
    """Spectra at distinct grid samples must be pairwise disjoint.

    Returns the pair of sample indices with the closest eigenvalues.
    """
    lam = np.linalg.eigvals(sys.A)  # (M, n)
    M, n = lam.shape
    flat = lam.ravel()
    owner = np.repeat(np.arange(M), n)
    d = np.abs(flat[:, None] - flat[None, :])
    d[owner[:, None] == owner[None, :]] = np.inf
    k = int(np.argmin(d))
    i, j = sorted((int(owner[k // d.shape[0]]), int(owner[k % d.shape[0]])))
    dmin = float(d.flat[k])
    return CheckResult("N2", dmin > tol, dmin, pair=(i, j))


def char_poly_coeffs(A):
    """Coefficients ``a_0 .. a_{n-1}`` with char poly ``z^n - sum_j a_j z^j``.

    Works on a stack of matrices; returns shape ``(M, n)``.
    """
    lam = np.linalg.eigvals(A)
    out = []
    for row in lam:
        c = np.poly(row)  # [1, c_1, ..., c_n], c_j multiplies z^{n-j}
        out.append(-c[1:][::-1])
    return np.array(out, dtype=complex)


def check_S1(sys, tol=CHARPOLY_TOL):
    """Only the constant coefficient of the characteristic polynomial may vary."""
    a = char_poly_coeffs(sys.A)
    a0 = a[:, 0]
    rest = a[:, 1:]
    if rest.shape[1] == 0:
        spread = 0.0
        a_const = np.zeros(0, dtype=complex)
    else:
        a_const = rest.mean(axis=0)
        scale = 1.0 + np.abs(a_const)
        spread = float(np.max(np.abs(rest - a_const) / scale))
    return CheckResult("S1", spread <= tol, spread, a0=a0, a_const=a_const)


def check_S2(sys, tol=GAP_TOL):
    """Eigenvalues must be simple at every sample."""
    lam = np.linalg.eigvals(sys.A)
    n = lam.shape[1]
    if n == 1:
        gaps = np.full(lam.shape[0], np.inf)
    else:
        d = np.abs(lam[:, :, None] - lam[:, None, :]) + np.where(np.eye(n, dtype=bool), np.inf, 0)
        gaps = d.min(axis=(1, 2))
    ok = gaps > tol
    return CheckResult("S2", bool(ok.all()), float(gaps.min()), per_sample=ok, values=gaps,
                       detail={"worst_sample": int(np.argmin(gaps))})


def run_all(sys):
    """All four checks; (S1) is only meaningful for single-input systems."""
    return {
        "N1": check_N1(sys),
        "N2": check_N2(sys),
        "S1": check_S1(sys),
        "S2": check_S2(sys),
    }

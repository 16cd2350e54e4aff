"""End-to-end acceptance checks, each with its tolerance and time limit.

Every test prints one ``PASS``/``FAIL`` line; run with ``-s`` or ``-v`` to see them.
"""

import time

import numpy as np
import pytest

from ensreach.approx import (
    ComplexPolynomial,
    bernstein_apply,
    bernstein_bound,
    bernstein_nodes,
    circle_grid,
    fejer_bound,
    fejer_poly,
    fourier_coeffs,
    runge_approx,
    taylor_coeffs_pole,
)
from ensreach.ensemble import (
    EnsembleSystem,
    ParameterGrid,
    StateFamily,
    TargetFamily,
    eigendecompose_continuous,
    simulate_continuous_pwc,
    simulate_discrete,
    sup_error,
)
from ensreach.synthesis import (
    hermite_indices,
    input_from_poly,
    method_s1,
    method_s2,
    method_s2_continuous,
)

GRID = ParameterGrid.interval(0, 1, 201)
VGRID = ParameterGrid.interval(0, 1, 402)


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail, elapsed, limit=None):
        ok = bool(ok) and (limit is None or elapsed < limit)
        timing = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}; {timing}")
        return ok
    return emit


def problem(A, b, f):
    sys = EnsembleSystem.from_functions(A, b, GRID)
    val = EnsembleSystem.from_functions(A, b, VGRID)
    return sys, TargetFamily.from_function(f, GRID), (val, TargetFamily.from_function(f, VGRID))


def test_1_bernstein_bound(verdict):
    t0 = time.perf_counter()
    n = 1000
    f = np.abs(bernstein_nodes(0, 1, n) - 0.5)
    x = np.linspace(0, 1, 1001)
    err = np.max(np.abs(bernstein_apply(f, n, x) - np.abs(x - 0.5)))
    bound = bernstein_bound(0.5, 1, 1, n)
    elapsed = time.perf_counter() - t0
    assert bound == pytest.approx(0.294, abs=1e-3)
    assert verdict(1, "Bernstein |x-1/2|, n=1000", err <= bound,
                   f"error {err:.4g} <= bound {bound:.4g}", elapsed, 5)


def test_2_fejer_bound(verdict):
    t0 = time.perf_counter()
    knots = np.array([0, 1, 2.5, 3.5, 5, 2 * np.pi])
    vals = np.array([0, 1.5, -0.5, 0.5, 2, 0])
    cases = {
        "Re z": (np.cos, 1.0),
        "tent |arg z|": (lambda s: np.abs(np.angle(np.exp(1j * s))), 1.0),
        "piecewise linear": (lambda s: np.interp(np.mod(s, 2 * np.pi), knots, vals),
                             float(np.max(np.abs(np.diff(vals) / np.diff(knots))))),
    }
    sv = 2 * np.pi * np.arange(8192) / 8192
    worst, ok = 0.0, True
    for g, L in cases.values():
        for n in (50, 100, 200):
            Q = 16 * n
            F = fejer_poly(fourier_coeffs(g(2 * np.pi * np.arange(Q) / Q), n), n)
            err = np.max(np.abs(F(np.exp(1j * sv)) - g(sv)))
            ok &= err <= fejer_bound(L, n)
            worst = max(worst, err / fejer_bound(L, n))
    assert np.allclose(circle_grid(4), [1, 1j, -1, -1j])
    elapsed = time.perf_counter() - t0
    assert verdict(2, "Fejer bound, 3 functions x n in {50,100,200}", ok,
                   f"worst error/bound ratio {worst:.3f}", elapsed, 5)


def test_3_runge_certified(verdict):
    t0 = time.perf_counter()
    K = np.linspace(-1, 1, 201) + 0j
    Kv = np.linspace(-1, 1, 401) + 0j
    f = lambda z: 1 / (z - 3)
    res = runge_approx(f, K, 0.3, mode="certified", omega_margin=1.5, validation=Kv)
    stages = res.budget.stage_errors
    total = float(np.max(np.abs(f(Kv) - res.poly(Kv))))
    on_segments = bool(np.all(res.segments.distance_to(res.rational.poles) < 1e-12))
    elapsed = time.perf_counter() - t0
    ok = res.mode == "certified" and all(e <= 0.1 for e in stages.values()) and total <= 0.3
    stage_txt = ", ".join(f"{k} {v:.3g}" for k, v in stages.items())
    assert verdict(3, "certified Runge 1/(z-3) on [-1,1]", ok and on_segments,
                   f"stages [{stage_txt}], total {total:.3g}, degree {res.degree}, "
                   f"poles on segments {on_segments}", elapsed, 60)


def test_4_method_s1(verdict):
    t0 = time.perf_counter()
    sys, f, val = problem(lambda t: [[0, 1], [t, 0]], lambda t: [0, 1], lambda t: [t, 1])
    u, rep = method_s1(sys, f, 0.1, mode="adaptive", validation=val)
    err = sup_error(simulate_discrete(val[0], u), val[1])
    elapsed = time.perf_counter() - t0
    assert verdict(4, "Method S1 companion system", err < 0.1,
                   f"validation error {err:.3g} on {val[0].M} points, T={u.T}", elapsed, 10)


def test_5_method_s2(verdict):
    t0 = time.perf_counter()
    sys, f, val = problem(lambda t: np.diag([t, t + 3]), lambda t: [1, 1], lambda t: [1, t])
    u, rep = method_s2(sys, f, 0.2, validation=val)
    err = sup_error(simulate_discrete(val[0], u), val[1])
    elapsed = time.perf_counter() - t0
    over = [e.name for e in rep.budget if not e.ok]
    assert verdict(5, "Method S2 diag(t, t+3)", err < 0.2 and not over and rep.within_budget,
                   f"validation error {err:.3g}, {len(rep.budget)} budget entries, "
                   f"over budget {over or 'none'}", elapsed, 30)


def test_6_method_s2_continuous(verdict):
    t0 = time.perf_counter()
    sys, f, val = problem(lambda t: np.diag([t - 2, t - 5]), lambda t: [1, 1], lambda t: [1, t])
    inp, rep = method_s2_continuous(sys, f, 0.3, validation=val)
    err = sup_error(simulate_continuous_pwc(eigendecompose_continuous(val[0]), inp), val[1])
    margin = next(e.measured for e in rep.budget if e.name == "exp_factor")
    elapsed = time.perf_counter() - t0
    assert verdict(6, "continuous S2 diag(t-2, t-5)", err < 0.3 and margin <= 0.15,
                   f"validation error {err:.3g}, exponential defect {margin:.3g} <= 0.15, "
                   f"tau {inp.tau:.4g}, N {inp.N}", elapsed, 60)


def test_7_ordering_invariant(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20261019)
    worst = 0.0
    for _ in range(100):
        n, M, deg = rng.integers(1, 5), rng.integers(2, 7), rng.integers(0, 9)
        A = (rng.normal(size=(M, n, n)) + 0.5j * rng.normal(size=(M, n, n))) / np.sqrt(n)
        b = rng.normal(size=(M, n)) + 1j * rng.normal(size=(M, n))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        sys = EnsembleSystem(A, b, ParameterGrid(np.linspace(0, 1, M), "real_interval"))
        x = simulate_discrete(sys, input_from_poly(ComplexPolynomial(c))).x
        for i in range(M):
            ref = sum(cj * np.linalg.matrix_power(A[i], j) @ b[i] for j, cj in enumerate(c))
            worst = max(worst, np.linalg.norm(x[i] - ref) / max(1.0, np.linalg.norm(ref)))
    elapsed = time.perf_counter() - t0
    assert verdict(7, "input ordering, 100 random instances", worst <= 1e-9,
                   f"worst relative deviation {worst:.2e}", elapsed)


def test_8_hermite(verdict):
    t0 = time.perf_counter()
    nil = np.array([[0.0, 1.0], [0.0, 0.0]])
    ok = hermite_indices(nil, np.eye(2)).indices == (1, 1)
    s = hermite_indices(nil, np.array([[1.0], [0.0]]))
    ok &= s.indices == (1,) and not s.reachable
    s = hermite_indices(nil, np.array([[0.0], [1.0]]))
    ok &= s.indices == (2,) and np.allclose(s.T, [[0, 1], [1, 0]])
    rng = np.random.default_rng(7)
    random_ok = 0
    for _ in range(50):
        n, m = rng.integers(2, 6), rng.integers(1, 4)
        A, B = rng.normal(size=(n, n)), rng.normal(size=(n, m))
        kalman = np.hstack([np.linalg.matrix_power(A, j) @ B for j in range(n)])
        assert np.linalg.matrix_rank(kalman) == n
        s = hermite_indices(A, B)
        cols = np.column_stack([np.linalg.matrix_power(A, j) @ B[:, i] for i, j in s.selected])
        random_ok += sum(s.indices) == n and np.linalg.matrix_rank(cols) == n
    elapsed = time.perf_counter() - t0
    assert verdict(8, "Hermite indices", ok and random_ok == 50,
                   f"worked examples {'match' if ok else 'differ'}, {random_ok}/50 random pairs",
                   elapsed)


def test_9_oracle_suite(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    # sup_error against an exhaustive scan
    sup_dev = 0.0
    for _ in range(20):
        x = rng.normal(size=(9, 3)) + 1j * rng.normal(size=(9, 3))
        f = rng.normal(size=(9, 3)) + 1j * rng.normal(size=(9, 3))
        scan = max(sum(abs(x[i, k] - f[i, k]) ** 2 for k in range(3)) ** 0.5 for i in range(9))
        sup_dev = max(sup_dev, abs(sup_error(StateFamily(x), StateFamily(f)) - scan) / scan)
    # Fourier coefficients against explicit inner products
    n, Q = 6, 96
    s = 2 * np.pi * np.arange(Q) / Q
    k = np.arange(-(n - 1), n)
    four_dev = 0.0
    for _ in range(20):
        c = rng.normal(size=2 * n - 1) + 1j * rng.normal(size=2 * n - 1)
        fs = np.exp(1j * np.outer(s, k)) @ c
        oracle = np.array([np.sum(fs * np.exp(-1j * kk * s)) / Q for kk in k])
        four_dev = max(four_dev, np.max(np.abs(fourier_coeffs(fs, n) - oracle)),
                       np.max(np.abs(oracle - c)))
    # Taylor coefficients of 1/(z-b)^{v+1} against contour quadrature
    quad_dev = 0.0
    for b in (3.0 + 0j, -4 + 2j, 10j, 0.7 - 0.2j, -9.5 + 1j):
        r = abs(b) / 2
        xi = r * np.exp(2j * np.pi * np.arange(1024) / 1024)
        for v in range(4):
            quad = np.array([np.mean(xi ** (-m) / (xi - b) ** (v + 1)) for m in range(21)])
            closed = taylor_coeffs_pole(b, v, 20)
            quad_dev = max(quad_dev, np.max(np.abs(closed - quad)
                                            / (np.abs(quad) + np.abs(quad).max())))
    elapsed = time.perf_counter() - t0
    ok = sup_dev <= 1e-14 and four_dev <= 1e-12 and quad_dev <= 1e-8
    assert verdict(9, "oracle suite", ok,
                   f"sup_error {sup_dev:.1e} (1e-14), fourier {four_dev:.1e} (1e-12), "
                   f"contour {quad_dev:.1e} (1e-8)", elapsed)

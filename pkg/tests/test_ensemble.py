import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.linalg import expm

from ensreach.ensemble import (
    EigenDecomposition,
    EnsembleSystem,
    InputSequence,
    ParameterGrid,
    PiecewiseConstantInput,
    StateFamily,
    check_N1,
    check_N2,
    check_S1,
    check_S2,
    eigendecompose_continuous,
    expm1_ratio,
    lipschitz_estimate,
    simulate_continuous_pwc,
    simulate_discrete,
    sup_error,
)
from ensreach.errors import ConditionError, GridError


def scalar_system(fn, grid, b=1.0):
    return EnsembleSystem.from_functions(lambda t: [[fn(t)]], lambda t: [b], grid)


def companion2(grid):
    return EnsembleSystem.from_functions(
        lambda t: [[0, 1], [t, 0]], lambda t: [0, 1], grid
    )


def diag_system(grid, shift=3.0, b=(1, 1)):
    return EnsembleSystem.from_functions(
        lambda t: np.diag([t, t + shift]), lambda t: list(b), grid
    )


GRID = ParameterGrid.interval(0, 1, 11)


def random_system(rng, n, m, M=5):
    grid = ParameterGrid.interval(0, 1, M)
    A = rng.normal(size=(M, n, n)) + 1j * rng.normal(size=(M, n, n))
    B = rng.normal(size=(M, n, m)) + 1j * rng.normal(size=(M, n, m))
    return EnsembleSystem(A / np.sqrt(n), B, grid)


class TestTypes:
    def test_grid_needs_two_samples(self):
        with pytest.raises(ValueError):
            ParameterGrid(np.array([0.0]))

    def test_interval_must_increase(self):
        with pytest.raises(ValueError):
            ParameterGrid(np.array([0.0, 0.5, 0.4]), "real_interval")

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            ParameterGrid(np.array([1j, 2j, 1j]))

    def test_refined_interleaves(self):
        g = ParameterGrid.interval(0, 1, 3).refined()
        np.testing.assert_allclose(g.samples, [0, 0.25, 0.5, 0.75, 1])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            EnsembleSystem(np.zeros((3, 2, 2)), np.zeros((3, 2, 1)), GRID)


class TestSimulateDiscrete:
    def test_two_step_unrolled(self):
        sys = scalar_system(lambda t: t, GRID)
        x = simulate_discrete(sys, InputSequence([1, 0]))
        np.testing.assert_allclose(x.x[:, 0], GRID.samples)

    def test_zero_input(self):
        sys = companion2(GRID)
        x = simulate_discrete(sys, InputSequence(np.zeros(4)))
        assert np.all(x.x == 0)

    def test_companion_matches_matrix_power(self):
        sys = companion2(GRID)
        x = simulate_discrete(sys, InputSequence([1, 0, 0]))
        for i, t in enumerate(GRID.samples):
            A = np.array([[0, 1], [t, 0]])
            expected = np.linalg.matrix_power(A, 2) @ np.array([0, 1])
            np.testing.assert_allclose(x.x[i], expected, atol=1e-15)

    def test_dimension_mismatch(self):
        sys = companion2(GRID)
        with pytest.raises(ValueError):
            simulate_discrete(sys, InputSequence(np.zeros((3, 2))))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 4), m=st.integers(1, 2),
           T=st.integers(1, 6))
    def test_linearity(self, seed, n, m, T):
        rng = np.random.default_rng(seed)
        sys = random_system(rng, n, m)
        u = rng.normal(size=(T, m)) + 1j * rng.normal(size=(T, m))
        v = rng.normal(size=(T, m))
        a, b = 0.7 - 0.2j, -1.3
        lhs = simulate_discrete(sys, InputSequence(a * u + b * v)).x
        rhs = a * simulate_discrete(sys, InputSequence(u)).x + b * simulate_discrete(
            sys, InputSequence(v)).x
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * np.abs(rhs).max())

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 4), T=st.integers(1, 6),
           data=st.data())
    def test_impulse_identity(self, seed, n, T, data):
        t = data.draw(st.integers(0, T - 1))
        rng = np.random.default_rng(seed)
        sys = random_system(rng, n, 1)
        u = np.zeros(T)
        u[t] = 1
        x = simulate_discrete(sys, InputSequence(u)).x
        for i in range(sys.M):
            expected = np.linalg.matrix_power(sys.A[i], T - 1 - t) @ sys.b[i]
            np.testing.assert_allclose(x[i], expected, rtol=1e-10, atol=1e-12)


def quad_response(lam, values, tau):
    """Variation-of-constants integral for a scalar mode, by adaptive quadrature."""
    T = tau * len(values)

    def part(fn):
        total = 0.0
        for l, ul in enumerate(values):
            total += quad(lambda s: fn(np.exp((T - s) * lam) * ul), l * tau, (l + 1) * tau,
                          epsabs=1e-13, epsrel=1e-13)[0]
        return total

    return part(np.real) + 1j * part(np.imag)


def scalar_eig(lams):
    lams = np.asarray(lams, dtype=complex)
    grid = ParameterGrid(np.arange(lams.size, dtype=float), "real_interval")
    return EigenDecomposition(lams[:, None], np.ones((lams.size, 1, 1)), 1.0, grid)


class TestSimulateContinuous:
    def test_zero_eigenvalue_branch(self):
        eig = scalar_eig([0.0, 0.0])
        x = simulate_continuous_pwc(eig, PiecewiseConstantInput(0.3, [2.0]))
        np.testing.assert_allclose(x.x[:, 0], 0.6)

    def test_unit_decay(self):
        eig = scalar_eig([-1.0, -1.0])
        x = simulate_continuous_pwc(eig, PiecewiseConstantInput(1.0, [1.0]))
        np.testing.assert_allclose(x.x[:, 0], 1 - np.exp(-1), rtol=1e-14)

    def test_quadrature_oracle(self):
        theta = np.linspace(0, 1, 21)
        lam = theta - 2
        eig = scalar_eig(lam)
        inp = PiecewiseConstantInput(0.5, [1.0, 1.0])
        x = simulate_continuous_pwc(eig, inp).x[:, 0]
        expected = np.array([quad_response(l, [1.0, 1.0], 0.5) for l in lam])
        np.testing.assert_allclose(x, expected, atol=1e-8)

    def test_series_branch_continuity(self):
        x = np.array([1e-7, -3e-7j, 2e-6, 1e-3])
        np.testing.assert_allclose(expm1_ratio(x), np.expm1(x) / x, rtol=1e-12)
        assert expm1_ratio(np.array([0.0]))[0] == 1

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), N=st.integers(1, 4))
    def test_random_scalar_quadrature(self, seed, N):
        rng = np.random.default_rng(seed)
        lam = rng.uniform(-3, 1, 3) + 1j * rng.uniform(-2, 2, 3)
        vals = rng.normal(size=N) + 1j * rng.normal(size=N)
        tau = rng.uniform(0.05, 0.6)
        x = simulate_continuous_pwc(scalar_eig(lam), PiecewiseConstantInput(tau, vals)).x[:, 0]
        expected = np.array([quad_response(l, vals, tau) for l in lam])
        np.testing.assert_allclose(x, expected, atol=1e-8)

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(2, 4))
    def test_zero_order_hold_oracle(self, seed, n):
        # non-diagonal systems against the matrix-exponential hold discretisation
        rng = np.random.default_rng(seed)
        sys = random_system(rng, n, 1, M=4)
        eig = eigendecompose_continuous(sys)
        inp = PiecewiseConstantInput(0.3, rng.normal(size=3))
        x = simulate_continuous_pwc(eig, inp).x
        for i in range(sys.M):
            aug = np.zeros((n + 1, n + 1), dtype=complex)
            aug[:n, :n] = sys.A[i]
            aug[:n, n] = sys.b[i]
            E = expm(aug * inp.tau)
            xi = np.zeros(n, dtype=complex)
            for ul in inp.values:
                xi = E[:n, :n] @ xi + E[:n, n] * ul
            np.testing.assert_allclose(x[i], xi, rtol=1e-7, atol=1e-9)


class TestSupError:
    def test_identical(self):
        x = StateFamily(np.ones((4, 2)))
        assert sup_error(x, x) == 0

    def test_three_four_five(self):
        f = StateFamily(np.zeros((5, 2)))
        x = StateFamily(np.tile([0.3, 0.4], (5, 1)))
        assert sup_error(x, f) == pytest.approx(0.5)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_brute_force_scan(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3))
        f = rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3))
        best = 0.0
        for i in range(7):
            s = 0.0
            for k in range(3):
                d = x[i, k] - f[i, k]
                s += d.real ** 2 + d.imag ** 2
            best = max(best, s ** 0.5)
        assert sup_error(StateFamily(x), StateFamily(f)) == pytest.approx(best, rel=1e-14)

    def test_zero_iff_equal(self):
        x = StateFamily(np.zeros((3, 2)))
        y = StateFamily(np.zeros((3, 2)))
        y.x[1, 1] = 1e-300
        assert sup_error(x, y) > 0


class TestChecks:
    def test_N1_nilpotent(self):
        g = ParameterGrid.interval(0, 1, 3)
        good = EnsembleSystem.from_functions(lambda t: [[0, 1], [0, 0]], lambda t: [0, 1], g)
        bad = EnsembleSystem.from_functions(lambda t: [[0, 1], [0, 0]], lambda t: [1, 0], g)
        assert check_N1(good).passed
        assert not check_N1(bad).passed

    def test_N1_scalar(self):
        assert check_N1(scalar_system(lambda t: t, GRID)).passed

    def test_N2_distinct(self):
        g = ParameterGrid(np.array([0, 0.5, 1.0]), "real_interval")
        assert check_N2(scalar_system(lambda t: t, g)).passed

    def test_N2_parabola(self):
        g = ParameterGrid(np.array([0.1, 0.25, 0.5, 0.75]), "real_interval")
        res = check_N2(scalar_system(lambda t: t * (1 - t), g))
        assert not res.passed
        assert res.pair == (1, 3)

    def test_N2_diag_scan(self):
        g = ParameterGrid.interval(0, 1, 21)
        res = check_N2(diag_system(g))
        # independent scan of all cross-sample eigenvalue distances
        ev = [[t, t + 3] for t in g.samples]
        dmin = min(abs(a - b) for i in range(21) for j in range(21) if i != j
                   for a in ev[i] for b in ev[j])
        assert res.passed
        assert res.margin == pytest.approx(dmin)

    def test_N2_symmetric(self):
        g = ParameterGrid.interval(0, 1, 5)
        sys = scalar_system(lambda t: t * (1 - t), g)
        rev = EnsembleSystem(sys.A[::-1], sys.B[::-1], ParameterGrid(g.samples[::-1]))
        assert check_N2(rev).margin == check_N2(sys).margin

    def test_S1_companion(self):
        res = check_S1(companion2(GRID))
        assert res.passed
        np.testing.assert_allclose(res.a0, GRID.samples, atol=1e-14)
        np.testing.assert_allclose(res.a_const, [0], atol=1e-14)

    def test_S1_diag_fails(self):
        res = check_S1(diag_system(GRID))
        assert not res.passed
        a1 = 2 * GRID.samples + 3
        assert res.margin == pytest.approx(np.max(np.abs(a1 - a1.mean()) / (1 + abs(a1.mean()))))

    def test_S1_scalar(self):
        res = check_S1(scalar_system(lambda t: t, GRID))
        assert res.passed
        np.testing.assert_allclose(res.a0, GRID.samples)

    def test_S2(self):
        res = check_S2(diag_system(GRID))
        assert res.passed and res.margin == pytest.approx(3)
        g = ParameterGrid.interval(0, 1, 3)
        nil = EnsembleSystem.from_functions(lambda t: [[0, 1], [0, 0]], lambda t: [0, 1], g)
        assert not check_S2(nil).passed
        cross = EnsembleSystem.from_functions(lambda t: np.diag([t, 1 - t]), lambda t: [1, 1], g)
        res = check_S2(cross)
        assert not res.passed and res.detail["worst_sample"] == 1


class TestEigendecompose:
    def test_identity_basis(self):
        eig = eigendecompose_continuous(diag_system(GRID))
        np.testing.assert_allclose(eig.T, np.broadcast_to(np.eye(2), eig.T.shape), atol=1e-14)
        np.testing.assert_allclose(eig.lambdas[:, 0], GRID.samples)
        np.testing.assert_allclose(eig.lambdas[:, 1], GRID.samples + 3)
        assert eig.T_norm == pytest.approx(1)

    def test_scaled_input(self):
        eig = eigendecompose_continuous(diag_system(GRID, b=(2, 1)))
        np.testing.assert_allclose(eig.T[3], np.diag([2, 1]), atol=1e-14)

    def test_residual_nondiagonal(self):
        # A = [[t, 1], [0, t+2]] has eigenpairs (t, e1), (t+2, (1, 2))
        sys = EnsembleSystem.from_functions(
            lambda t: [[t, 1], [0, t + 2]], lambda t: [1, 1], GRID)
        eig = eigendecompose_continuous(sys)
        assert eig.residual < 1e-10
        for i in range(sys.M):
            T = eig.T[i]
            assert np.linalg.norm(sys.A[i] @ T - T @ np.diag(eig.lambdas[i])) < 1e-10
            np.testing.assert_allclose(np.linalg.solve(T, sys.b[i]), [1, 1], atol=1e-10)

    def test_crossing_arcs_followed(self):
        # eigenvalues t and 1.5 - t + 0.3j never collide; ordering must be continuous
        g = ParameterGrid.interval(0, 1, 41)
        sys = EnsembleSystem.from_functions(
            lambda t: np.diag([t, 1.5 - t + 0.3j]), lambda t: [1, 1], g)
        eig = eigendecompose_continuous(sys)
        d = np.abs(np.diff(eig.lambdas, axis=0))
        assert d.max() < 0.03

    def test_unreachable(self):
        with pytest.raises(ConditionError):
            eigendecompose_continuous(diag_system(GRID, b=(1, 0)))

    def test_ambiguous_matching(self):
        g = ParameterGrid(np.array([0.0, 1.0]))
        A = np.array([np.diag([0, 2]), np.diag([1 + 1e-3j, 1 - 1e-3j])], dtype=complex)
        # every eigenvalue at the second sample is equidistant from both predecessors
        with pytest.raises(GridError):
            eigendecompose_continuous(EnsembleSystem(A, np.ones((2, 2)), g))

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 4))
    def test_random_residuals(self, seed, n):
        rng = np.random.default_rng(seed)
        grid = ParameterGrid.interval(0, 1, 6)
        D = rng.normal(size=n) * 3 + 1j * rng.normal(size=n)
        S = rng.normal(size=(n, n)) + np.eye(n) * 3
        A = np.array([S @ np.diag(D + t) @ np.linalg.inv(S) for t in grid.samples])
        sys = EnsembleSystem(A, np.tile(S @ np.ones(n), (6, 1)), grid)
        eig = eigendecompose_continuous(sys)
        assert eig.residual < 1e-8


class TestLipschitz:
    def test_linear(self):
        x = np.linspace(0, 1, 11)
        L, M = lipschitz_estimate(x, 2 * x)
        assert L == pytest.approx(2 * 1.2)
        assert M == pytest.approx(2)

    def test_constant(self):
        x = np.linspace(0, 1, 5)
        assert lipschitz_estimate(x, np.full(5, 3 - 4j)) == (0.0, pytest.approx(5))

    def test_parabola(self):
        x = np.linspace(0, 1, 101)
        L, _ = lipschitz_estimate(x, x ** 2)
        assert 1.9 * 1.2 <= L <= 2.2 * 1.2

    def test_duplicates(self):
        with pytest.raises(ValueError):
            lipschitz_estimate(np.array([0, 1, 1.0]), np.zeros(3))

"""Discrete-time ensemble input synthesis (Methods S1 and S2)."""

import math

import numpy as np

from ..approx import ComplexPolynomial, indicator_polys
from ..ensemble import (
    char_poly_coeffs,
    check_N1,
    check_N2,
    check_S1,
    check_S2,
    eigendecompose_continuous,
    kalman_matrix,
    simulate_discrete,
    sup_error,
)
from ..errors import DegreeCapError
from .common import approximate_on_arc, input_from_poly, require, validation_pair
from .report import SynthesisReport

ASSEMBLY_DEGREE_CAP = 100_000


def assemble_s1_poly(ps, a_rest, degree_cap=ASSEMBLY_DEGREE_CAP):
    """``sum_k p_k(z^n - a_{n-1} z^{n-1} - ... - a_1 z) z^{k-1}``.

    ``ps`` holds ``p_1 .. p_n`` and ``a_rest`` the constant coefficients
    ``a_1 .. a_{n-1}`` of the characteristic polynomial ``z^n - sum a_j z^j``.
    """
    n = len(ps)
    a_rest = np.asarray(a_rest, dtype=complex).ravel()
    if a_rest.size != n - 1:
        raise ValueError(f"need {n - 1} coefficients a_1..a_(n-1), got {a_rest.size}")
    top = max(p.degree for p in ps) * n + n - 1
    if top > degree_cap:
        raise DegreeCapError(f"assembled degree {top} exceeds cap {degree_cap}")
    inner = np.zeros(n + 1, dtype=complex)
    inner[n] = 1
    inner[1:n] = -a_rest
    inner = ComplexPolynomial(inner)
    out = ComplexPolynomial([0])
    for k, p in enumerate(ps):
        out = out + p.compose(inner) * ComplexPolynomial(np.eye(k + 1)[k])
    return out


def _kalman_stack(sys):
    return np.array([kalman_matrix(A, B) for A, B in zip(sys.A, sys.B)])


def method_s1(sys, f, eps, mode="adaptive", validation=None):
    """Method S1 for single-input systems whose char poly varies only in ``a_0``.

    In Kalman coordinates ``g = K(theta)^{-1} f`` the flow of ``p`` equals
    ``sum_k p_k(a_0) A^{k-1} b``, so each ``g_k`` is approximated as a
    function of ``a_0`` on the arc ``a_0(P)``. The per-component tolerance is
    ``eps / (sqrt(n) * max ||K||)``. ``validation`` is an optional
    ``(system, target)`` pair on a finer grid.
    """
    if sys.m != 1:
        raise ValueError("method S1 needs a single-input system")
    f.check(sys)
    require(check_N1(sys))
    require(check_N2(sys))
    s1 = require(check_S1(sys))
    sys_v, f_v = validation_pair(sys, f, validation)
    n = sys.n
    K = _kalman_stack(sys)
    K_norm = float(np.max(np.linalg.norm(K, ord=2, axis=(1, 2))))
    g = np.linalg.solve(K, f.x[:, :, None])[:, :, 0]
    g_v = np.linalg.solve(_kalman_stack(sys_v), f_v.x[:, :, None])[:, :, 0]
    a0, a0_v = s1.a0, char_poly_coeffs(sys_v.A)[:, 0]
    tol = eps / (math.sqrt(n) * K_norm)

    report = SynthesisReport("S1", eps, mode, validation_points=sys_v.M)
    ps = []
    for k in range(n):
        p, err, prov = approximate_on_arc(a0, g[:, k], tol, mode, a0_v, g_v[:, k])
        ps.append(p)
        report.add(f"p_{k + 1}", tol, err)
        report.component_errors[f"p_{k + 1}"] = err
        report.degrees[f"p_{k + 1}"] = p.degree
    poly = assemble_s1_poly(ps, s1.a_const)
    u = input_from_poly(poly)
    report.degrees["p"] = poly.degree
    report.horizon = {"T": u.T}
    report.achieved_error = sup_error(simulate_discrete(sys_v, u), f_v)
    report.add("total", eps, report.achieved_error)
    return u, report


def _combine_with_indicators(arcs, arcs_v, ps, eps_q_scale, mode, report, eval_points):
    """``sum_k p_k q_k`` with ``q_k`` indicator polynomials of the arcs.

    ``eps_q_scale / sum_l alpha_{k,l}`` is the tolerance of ``q_k`` where
    ``alpha_{k,l}`` is the grid max of ``|p_k|`` on arc ``l``.
    """
    n = len(ps)
    if n == 1:
        report.degrees["q_1"] = 0
        return ps[0]
    alpha = np.array([[np.max(np.abs(p(pts))) for pts in eval_points] for p in ps])
    sum_alpha = alpha.sum(axis=1)
    active = sum_alpha > 0
    tols = np.where(active, eps_q_scale / np.where(active, sum_alpha, 1), 1.0)
    qs = indicator_polys(arcs, tols, mode=mode, validation=arcs_v)
    out = ComplexPolynomial([0])
    for k in range(n):
        if not active[k]:
            report.degrees[f"q_{k + 1}"] = 0
            continue
        report.add(f"q_{k + 1}", tols[k], qs[k].error)
        report.degrees[f"q_{k + 1}"] = qs[k].degree
        out = out + ps[k] * qs[k].poly
    report.component_errors["alpha"] = alpha.tolist()
    return out


def method_s2(sys, f, eps, mode="adaptive", validation=None):
    """Method S2 for single-input systems with simple eigenvalues.

    With ``A = T diag(lambda) T^{-1}`` and ``T^{-1} b = 1`` the flow of ``p``
    is ``T (p(lambda_1), ..., p(lambda_n))``. Each ``p_k`` approximates
    ``(T^{-1} f)_k`` on the eigenvalue arc ``lambda_k(P)`` and indicator
    polynomials glue them into one ``p``.
    """
    if sys.m != 1:
        raise ValueError("method S2 needs a single-input system")
    f.check(sys)
    require(check_N1(sys))
    require(check_N2(sys))
    require(check_S2(sys))
    sys_v, f_v = validation_pair(sys, f, validation)
    eig = eigendecompose_continuous(sys)
    eig_v = eig if sys_v is sys else eigendecompose_continuous(sys_v, reference=eig)
    ft, ft_v = eig.transform(f), eig_v.transform(f_v)
    n = sys.n
    report = SynthesisReport("S2", eps, mode, validation_points=sys_v.M)
    if not np.any(f.x) and not np.any(f_v.x):
        u = input_from_poly(ComplexPolynomial([0]))
        report.horizon = {"T": u.T}
        report.achieved_error = sup_error(simulate_discrete(sys_v, u), f_v)
        return u, report

    scale = 3 * math.sqrt(n) * eig.T_norm
    tol_p = eps / scale
    arcs = [eig.lambdas[:, k] for k in range(n)]
    arcs_v = [eig_v.lambdas[:, k] for k in range(n)]
    ps = []
    for k in range(n):
        p, err, _ = approximate_on_arc(arcs[k], ft[:, k], tol_p, mode, arcs_v[k], ft_v[:, k])
        ps.append(p)
        report.add(f"p_{k + 1}", tol_p, err)
        report.degrees[f"p_{k + 1}"] = p.degree
    poly = _combine_with_indicators(arcs, arcs_v, ps, eps / scale, mode, report, arcs_v)
    u = input_from_poly(poly)
    report.degrees["p"] = poly.degree
    report.horizon = {"T": u.T}
    report.notes.append(f"T_norm={eig.T_norm:.4g}, decomposition residual={eig.residual:.2e}")
    report.achieved_error = sup_error(simulate_discrete(sys_v, u), f_v)
    report.add("total", eps, report.achieved_error)
    return u, report

"""Continuous-time Method S2 with piecewise constant inputs."""

import math

import numpy as np

from ..ensemble import (
    check_N2,
    check_S2,
    diagonal_pwc_response,
    eigendecompose_continuous,
    expm1_ratio,
    simulate_continuous_pwc,
    sup_error,
)
from ..approx import ComplexPolynomial
from ..errors import ToleranceError
from .common import approximate_on_arc, pwc_from_poly, require, validation_pair
from .discrete import _combine_with_indicators
from .report import SynthesisReport

MAX_HALVINGS = 20
TAU_FLOOR = 1e-8
SEPARATION_TOL = 1e-9


def exp_factor_tau(lambdas, eps, tau_hi=None):
    """Largest grid-valid ``tau`` with ``|(e^{tau lam} - 1)/(tau lam) - 1| < eps/2``.

    Bisection on the monotone-in-practice defect; ``tau_hi`` defaults to a
    value where the defect is certainly too large.
    """
    lam = np.asarray(lambdas, dtype=complex).ravel()
    rho = float(np.abs(lam).max())
    if rho == 0:
        return 1.0

    def defect(t):
        return float(np.max(np.abs(expm1_ratio(t * lam) - 1)))

    lo, hi = 0.0, tau_hi or 10.0 / rho
    while defect(hi) < eps / 2:
        lo, hi = hi, 2 * hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if defect(mid) < eps / 2:
            lo = mid
        else:
            hi = mid
    return lo


def exp_sets_separated(lambdas, tau):
    """Grid check that ``theta -> e^{tau lam_k}`` is injective and the images are disjoint."""
    lam = np.asarray(lambdas, dtype=complex)
    M, n = lam.shape
    # injectivity of the exponential along each arc: no 2 pi wrap in tau * Im
    if np.any(tau * np.ptp(lam.imag, axis=0) >= 2 * math.pi):
        return False
    Om = np.exp(tau * lam)
    for k in range(n):
        d = np.abs(Om[:, k, None] - Om[None, :, k]) + np.eye(M)
        if d.min() <= SEPARATION_TOL:
            return False
        for l in range(k + 1, n):
            if np.abs(Om[:, k, None] - Om[None, :, l]).min() <= SEPARATION_TOL:
                return False
    return True


def _build(eig, eig_v, g, g_v, eps, tau, mode, report):
    n = eig.n
    scale = 6 * tau * math.sqrt(n) * eig.T_norm
    Om = [np.exp(tau * eig.lambdas[:, k]) for k in range(n)]
    Om_v = [np.exp(tau * eig_v.lambdas[:, k]) for k in range(n)]
    ps = []
    for k in range(n):
        p, err, _ = approximate_on_arc(Om[k], g[:, k] / tau, eps / scale, mode,
                                       Om_v[k], g_v[:, k] / tau)
        ps.append(p)
        report.add(f"p_{k + 1}", eps / scale, err)
        report.degrees[f"p_{k + 1}"] = p.degree
    return _combine_with_indicators(Om, Om_v, ps, eps / scale, mode, report, Om_v)


def method_s2_continuous(sys, f, eps, mode="adaptive", validation=None, tau=None):
    """Piecewise constant input steering ``x' = A x + b u`` to ``f`` within ``eps``.

    In diagonal coordinates the flow is ``tau E(tau lam) p(e^{tau lam})``.
    For ``tau`` small the factor ``E`` is close to 1, so ``tau * p`` must
    approximate ``g = T^{-1} f`` on the sets ``exp(tau lam_k(P))``. After
    building ``p`` the exponential-factor defect ``|tau p(e^{tau lam}) - phi|``
    and the total error are measured; on failure ``tau`` is halved and ``p``
    rebuilt (at most 20 times).
    """
    if sys.m != 1:
        raise ValueError("continuous method S2 needs a single-input system")
    f.check(sys)
    require(check_N2(sys))
    require(check_S2(sys))
    sys_v, f_v = validation_pair(sys, f, validation)
    eig = eigendecompose_continuous(sys)
    eig_v = eig if sys_v is sys else eigendecompose_continuous(sys_v, reference=eig)
    g, g_v = eig.transform(f), eig_v.transform(f_v)

    if not np.any(f.x) and not np.any(f_v.x):
        inp = pwc_from_poly(ComplexPolynomial([0]), tau or 1.0)
        report = SynthesisReport("S2-continuous", eps, mode, validation_points=sys_v.M)
        report.horizon = {"tau": inp.tau, "N": inp.N}
        report.achieved_error = sup_error(simulate_continuous_pwc(eig_v, inp), f_v)
        return inp, report

    if tau is None:
        tau = exp_factor_tau(eig_v.lambdas, eps)
    while not exp_sets_separated(eig_v.lambdas, tau):
        tau /= 2
        if tau < TAU_FLOOR:
            raise ToleranceError("no step length separates the exponential images of the arcs")

    last = None
    for attempt in range(MAX_HALVINGS + 1):
        report = SynthesisReport("S2-continuous", eps, mode, validation_points=sys_v.M)
        poly = _build(eig, eig_v, g, g_v, eps, tau, mode, report)
        inp = pwc_from_poly(poly, tau)
        phi = diagonal_pwc_response(eig_v.lambdas, inp)
        defect = float(np.max(np.abs(tau * poly(np.exp(tau * eig_v.lambdas)) - phi)))
        achieved = sup_error(simulate_continuous_pwc(eig_v, inp), f_v)
        report.add("exp_factor", eps / 2, defect)
        report.degrees["p"] = poly.degree
        report.horizon = {"tau": tau, "N": inp.N, "T": inp.horizon}
        report.achieved_error = achieved
        report.add("total", eps, achieved)
        report.notes.append(f"T_norm={eig.T_norm:.4g}; tau halvings={attempt}")
        if defect <= eps / 2 and achieved <= eps:
            return inp, report
        last = report
        tau /= 2
        if tau < TAU_FLOOR:
            break
    raise ToleranceError(
        f"no accepted step length; last attempt achieved {last.achieved_error:.3g} "
        f"with exponential defect {last.budget[-2].measured:.3g}"
    )

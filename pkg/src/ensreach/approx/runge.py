"""Constructive Runge approximation: grid contour, Riemann sum, pole shift, Taylor.

The certified pipeline is

1. :func:`grid_segments` builds axis-aligned boundary segments around ``K``
   so that the Cauchy integral over them reproduces ``f`` on ``K``;
2. :func:`rational_approx` replaces the integral by a midpoint sum with
   poles on the segments;
3. :func:`pole_shift` rewrites each ``1/(w - z)`` as a truncated geometric
   series in ``1/(z - b)`` for a shift centre ``b`` far from ``K``;
4. :func:`polynomialize` truncates the Taylor series of every
   ``1/(z - b)^{v+1}`` about the origin.

Each stage gets a third of the tolerance and its error is measured on a
validation sampling of ``K``. All sup-norms are on-grid.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ..errors import DegreeCapError, GridError, ToleranceError
from .fit import fit_polynomial
from .polynomial import ComplexPolynomial

DEGREE_CAP = 5000
POLE_CAP = 10**6
N_CENTERS = 16
CENTER_RADIUS_FACTOR = 3.0
CENTER_GROWTH = 1.5
CENTER_RETRIES = 8
SEGMENT_SAMPLES = 33
# irrational grid offsets keep grid lines away from "nice" sample coordinates
GRID_OFFSET = (0.3819660112501051, 0.2763932022500210)


@dataclass
class SegmentSet:
    """Oriented axis-aligned segments of common length ``delta``."""

    starts: np.ndarray
    ends: np.ndarray
    delta: float
    boxes: list = field(default_factory=list)

    def __len__(self):
        return self.starts.size

    def points(self, s):
        """Points at fractions ``s`` (shape ``(S,)``) along every segment, shape ``(N, S)``."""
        return self.starts[:, None] + (self.ends - self.starts)[:, None] * np.asarray(s)[None, :]

    def distance_to(self, z):
        """Distance from each point of ``z`` to the union of segments."""
        z = np.asarray(z, dtype=complex).ravel()
        a, d = self.starts[None, :], (self.ends - self.starts)[None, :]
        t = np.clip(((z[:, None] - a) * d.conj()).real / np.abs(d) ** 2, 0, 1)
        return np.min(np.abs(z[:, None] - a - t * d), axis=1)


@dataclass
class RationalSum:
    """``r(z) = sum_l coeffs[l] / (poles[l] - z)``; the ``1/(2 pi i)`` is folded in."""

    poles: np.ndarray
    coeffs: np.ndarray
    M: int = 0
    L_hat: float = 0.0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.coeffs[None, :] / (self.poles[None, :] - z.ravel()[:, None])).sum(
            axis=1).reshape(z.shape)


@dataclass
class ShiftedSum:
    """Pole-shifted sum ``r_b(z) = sum_g sum_v moments[g][v] / (z - centers[g])^{v+1}``.

    ``degrees[l]`` is the truncation order ``m_kl`` used for pole ``l`` and
    ``assign[l]`` its shift centre.
    """

    centers: np.ndarray
    assign: np.ndarray
    degrees: np.ndarray
    deltas: np.ndarray
    alphas: np.ndarray
    moments: list

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.size, dtype=complex)
        for b, S in zip(self.centers, self.moments):
            if S.size == 0:
                continue
            zeta = 1.0 / (z.ravel() - b)
            acc = np.zeros_like(zeta)
            for s in S[::-1]:
                acc = (acc + s) * zeta
            out += acc
        return out.reshape(z.shape)


@dataclass
class RungeBudget:
    """Budget ledger and degree records of one certified run."""

    eps: float
    eta: float
    radius: float
    delta: float
    n_segments: int
    M: int
    L_hat: float
    step_degrees: np.ndarray
    taylor_degrees: dict
    stage_errors: dict
    final_error: float

    def to_dict(self):
        return {
            "eps": self.eps,
            "eta": self.eta,
            "center_radius": self.radius,
            "delta": self.delta,
            "segments": self.n_segments,
            "subdivisions": self.M,
            "L_hat": self.L_hat,
            "max_shift_degree": int(self.step_degrees.max(initial=0)),
            "max_taylor_degree": int(max(self.taylor_degrees.values(), default=0)),
            "stage_errors": dict(self.stage_errors),
            "final_error": self.final_error,
        }


@dataclass
class RungeResult:
    poly: ComplexPolynomial
    error: float
    mode: str
    budget: RungeBudget = None

    @property
    def degree(self):
        return self.poly.degree


def default_pad(K):
    """Half the largest nearest-neighbour spacing of a point cloud.

    Spacings above ten times the median belong to isolated points (separate
    components) and are ignored.
    """
    K = np.asarray(K, dtype=complex).ravel()
    if K.size < 3:
        # one or two samples describe isolated points, not an arc
        return 0.0
    d = np.abs(K[:, None] - K[None, :])
    np.fill_diagonal(d, np.inf)
    nn = d.min(axis=1)
    return 0.5 * float(nn[nn <= 10 * np.median(nn)].max())


def grid_segments(K_samples, omega_margin, delta, pad=None):
    """Boundary segments of the grid boxes of pitch ``delta`` that meet ``K``.

    A box is selected when it comes within ``pad`` of a sample (``pad``
    defaults to half the sample spacing so the continuum between samples is
    covered). Edges shared by two selected boxes cancel; the rest are
    returned oriented counterclockwise with respect to their box.
    """
    K = np.asarray(K_samples, dtype=complex).ravel()
    if not 0 < delta < omega_margin / math.sqrt(2):
        raise ValueError(f"need 0 < delta < omega_margin/sqrt(2); got delta={delta}")
    if pad is None:
        pad = default_pad(K)
    if math.sqrt(2) * delta + pad >= omega_margin:
        raise GridError("sample spacing too coarse for the declared holomorphy margin")
    ox, oy = GRID_OFFSET
    boxes = set()
    i_lo = np.floor((K.real - pad) / delta - ox).astype(int)
    i_hi = np.floor((K.real + pad) / delta - ox).astype(int)
    j_lo = np.floor((K.imag - pad) / delta - oy).astype(int)
    j_hi = np.floor((K.imag + pad) / delta - oy).astype(int)
    for z, a, b, c, d in zip(K, i_lo, i_hi, j_lo, j_hi):
        for i in range(a, b + 1):
            for j in range(c, d + 1):
                # distance from z to the box [i, i+1] x [j, j+1] in grid units
                x0, y0 = (i + ox) * delta, (j + oy) * delta
                dx = max(x0 - z.real, 0, z.real - x0 - delta)
                dy = max(y0 - z.imag, 0, z.imag - y0 - delta)
                if math.hypot(dx, dy) <= pad:
                    boxes.add((i, j))
    edges = {}
    for i, j in sorted(boxes):
        corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
        for p, q in zip(corners, corners[1:] + corners[:1]):
            key = (min(p, q), max(p, q))
            if key in edges:
                del edges[key]
            else:
                edges[key] = (p, q)

    def to_c(p):
        return complex((p[0] + ox) * delta, (p[1] + oy) * delta)

    ordered = [edges[k] for k in sorted(edges)]
    segs = SegmentSet(
        np.array([to_c(p) for p, _ in ordered], dtype=complex),
        np.array([to_c(q) for _, q in ordered], dtype=complex),
        float(delta),
        sorted(boxes),
    )
    if len(segs) and segs.distance_to(K).min() <= 0:
        raise GridError("a grid segment touches K")
    return segs


def estimate_cauchy_lipschitz(f, segs, K_val, safety_factor=1.2):
    """Sampled Lipschitz constant of ``xi -> f(xi)/(xi - z)`` along the segments, sup over ``z``."""
    s = np.linspace(0, 1, SEGMENT_SAMPLES)
    xi = segs.points(s)  # (N, S)
    fx = f(xi)
    K_val = np.asarray(K_val, dtype=complex).ravel()
    L = 0.0
    for chunk in np.array_split(K_val, max(1, K_val.size // 64)):
        g = fx[None] / (xi[None] - chunk[:, None, None])
        slope = np.abs(np.diff(g, axis=2)) / np.abs(np.diff(xi, axis=1))[None]
        L = max(L, float(slope.max()))
    return safety_factor * L


def rational_approx(f, segs, eps_step, L_hat, pole_cap=POLE_CAP):
    """Midpoint Riemann sum of the Cauchy integral over ``segs``.

    ``M`` is the smallest integer with ``N delta^2 L_hat / (2 pi M) <= eps_step``.
    """
    if not eps_step > 0:
        raise ValueError("eps_step must be positive")
    N = len(segs)
    M = max(1, math.ceil(N * segs.delta ** 2 * L_hat / (2 * math.pi * eps_step)))
    if N * M > pole_cap:
        raise DegreeCapError(f"{N * M} poles exceed pole cap {pole_cap}; use adaptive mode")
    s = (np.arange(M) + 0.5) / M
    w = segs.points(s)
    dxi = ((segs.ends - segs.starts) / M)[:, None] * np.ones(M)
    c = f(w) * dxi / (2j * math.pi)
    return RationalSum(w.ravel(), c.ravel(), M=M, L_hat=float(L_hat))


def shift_degree(c, delta, alpha, eps_step, n_terms):
    """Smallest ``m >= 0`` with ``|c|/(alpha - delta) (delta/alpha)^{m+1} <= eps_step/n_terms``."""
    c = np.abs(np.asarray(c))
    delta = np.asarray(delta, dtype=float)
    if np.any(delta >= alpha):
        raise ValueError("geometric series diverges: some |w - b| >= min |z - b|")
    with np.errstate(divide="ignore"):
        rhs = eps_step * (alpha - delta) / (n_terms * c)
        m1 = np.log(rhs) / (np.log(delta) - np.log(alpha))
    m = np.where((c == 0) | (delta == 0) | (rhs >= 1), 0, np.ceil(m1) - 1)
    return np.maximum(m, 0).astype(int)


def choose_centers(poles, K, radius=None):
    """Ring of shift centres and, per pole, the centre with the smallest ratio.

    The ring starts with ``N_CENTERS`` points at radius ``3 * max(eta, max|w|)``
    (``eta = max |z|`` on ``K``). While some pole ``w`` has no centre ``b``
    with ``|w - b| < min_z |z - b|`` the angular resolution is refined 4x
    (twice), then the radius grows by 1.5x.
    """
    K = np.asarray(K, dtype=complex).ravel()
    eta = float(np.abs(K).max())
    R = radius or CENTER_RADIUS_FACTOR * max(eta, float(np.abs(poles).max(initial=0)), 1e-3)
    for _ in range(CENTER_RETRIES):
        for count in (N_CENTERS, 4 * N_CENTERS, 16 * N_CENTERS):
            centers = R * np.exp(2j * math.pi * (np.arange(count) + 0.5) / count)
            alpha = np.abs(K[:, None] - centers[None, :]).min(axis=0)
            ratio = np.abs(poles[:, None] - centers[None, :]) / alpha[None, :]
            best = ratio.argmin(axis=1)
            if np.all(ratio[np.arange(poles.size), best] < 1):
                used = np.unique(best)
                return centers[used], np.searchsorted(used, best)
        R *= CENTER_GROWTH
    raise DegreeCapError("no pole-shift centre separates every pole from K; use adaptive mode")


def pole_shift(rs, K_samples, centers, eps_step, degree_cap=DEGREE_CAP):
    """Rewrite ``rs`` as truncated geometric series about shift centres.

    ``centers`` may be a single complex ``b`` (every pole is shifted to it),
    an array of centres (each pole uses the one with the smallest ratio
    ``|w - b| / min_z |z - b|``) or ``None`` for :func:`choose_centers`.
    """
    K = np.asarray(K_samples, dtype=complex).ravel()
    if centers is None:
        centers, assign = choose_centers(rs.poles, K)
    else:
        centers = np.atleast_1d(np.asarray(centers, dtype=complex))
        alpha = np.abs(K[:, None] - centers[None, :]).min(axis=0)
        ratio = np.abs(rs.poles[:, None] - centers[None, :]) / alpha[None, :]
        assign = ratio.argmin(axis=1)
    alphas = np.abs(K[:, None] - centers[None, :]).min(axis=0)
    deltas = np.abs(rs.poles - centers[assign])
    degrees = np.zeros(rs.poles.size, dtype=int)
    P = rs.poles.size
    for g in range(centers.size):
        idx = assign == g
        if idx.any():
            degrees[idx] = shift_degree(rs.coeffs[idx], deltas[idx], alphas[g], eps_step, P)
    if degrees.max(initial=0) > degree_cap:
        raise DegreeCapError(f"pole-shift degree {degrees.max()} exceeds cap {degree_cap}")
    moments = []
    for g, b in enumerate(centers):
        idx = np.flatnonzero(assign == g)
        top = degrees[idx].max(initial=-1)
        S = np.zeros(top + 1, dtype=complex)
        d = rs.poles[idx] - b
        c = -rs.coeffs[idx]  # 1/(w - z) = -(1/(z - b)) sum ((w - b)/(z - b))^v
        power = np.ones(idx.size, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            for v in range(top + 1):
                S[v] = np.sum(c[degrees[idx] >= v] * power[degrees[idx] >= v])
                power = power * d
        if not np.all(np.isfinite(S)):
            raise DegreeCapError("pole-shift moments overflow; use adaptive mode")
        moments.append(S)
    return ShiftedSum(centers, assign, degrees, deltas, alphas, moments)


def taylor_coeffs_pole(b, v, D):
    """Taylor coefficients ``a_mu``, ``mu = 0..D``, of ``1/(z - b)^{v+1}`` about 0.

    ``a_mu = C(mu + v, v) (-1)^{v+1} / b^{mu + v + 1}``, evaluated in log
    space to avoid overflow.
    """
    mu = np.arange(D + 1)
    logmag = gammaln(mu + v + 1) - gammaln(mu + 1) - gammaln(v + 1) - (mu + v + 1) * math.log(abs(b))
    phase = np.exp(-1j * (mu + v + 1) * np.angle(b))
    return (-1) ** (v + 1) * np.exp(logmag) * phase


def taylor_tail_degree(v, x, absb, weight, tol, degree_cap=DEGREE_CAP):
    """Smallest ``D`` with ``weight * sum_{mu > D} C(mu+v, v) x^mu / |b|^{v+1} <= tol``.

    ``x = eta/|b| < 1``. The tail is bounded by its first term over
    ``1 - rho`` where ``rho`` bounds the ratio of consecutive terms.
    """
    if weight == 0 or x == 0:
        return 0
    base = -(v + 1) * math.log(absb) + math.log(weight)
    logt = base + math.log(x) * 1 + math.log(v + 1)  # term mu = 1
    for D in range(0, degree_cap + 1):
        mu = D + 1
        rho = (mu + v + 1) / (mu + 1) * x
        if rho < 1 and logt - math.log(1 - rho) <= math.log(tol):
            return D
        logt += math.log((mu + v + 1) / (mu + 1)) + math.log(x)
    raise DegreeCapError(f"Taylor degree exceeds cap {degree_cap} for pole order {v + 1}")


def polynomialize(rb, K_samples, eps_step, degree_cap=DEGREE_CAP):
    """Replace every ``1/(z - b)^{v+1}`` in ``rb`` by its Taylor polynomial about 0.

    Degrees come from an a-priori tail bound so the total truncation error on
    ``|z| <= eta`` is at most ``eps_step``. Returns the polynomial and the
    degree record ``{(g, v): D}``.
    """
    K = np.asarray(K_samples, dtype=complex).ravel()
    eta = float(np.abs(K).max())
    pairs = [(g, v) for g, S in enumerate(rb.moments) for v in range(S.size)]
    if not pairs:
        return ComplexPolynomial([0]), {}
    share = eps_step / len(pairs)
    degrees = {}
    for g, v in pairs:
        b = rb.centers[g]
        if abs(b) <= 2 * eta:
            raise ValueError(f"shift centre |b|={abs(b):.3g} must exceed 2*eta={2 * eta:.3g}")
        degrees[(g, v)] = taylor_tail_degree(v, eta / abs(b), abs(b), abs(rb.moments[g][v]),
                                             share, degree_cap)
    top = max(degrees.values())
    coeffs = np.zeros(top + 1, dtype=complex)
    for (g, v), D in degrees.items():
        coeffs[: D + 1] += rb.moments[g][v] * taylor_coeffs_pole(rb.centers[g], v, D)
    return ComplexPolynomial(coeffs), degrees


def _max_err(a, b):
    return float(np.max(np.abs(a - b)))


def runge_certified(f, K_samples, eps, omega_margin, delta=None, validation=None, pad=None,
                    degree_cap=DEGREE_CAP, pole_cap=POLE_CAP):
    """Four-stage constructive Runge approximation with ``eps/3`` per stage.

    ``pad`` is the covering radius of the samples (see :func:`grid_segments`).
    """
    K = np.asarray(K_samples, dtype=complex).ravel()
    K_val = K if validation is None else np.asarray(validation, dtype=complex).ravel()
    if pad is None:
        pad = default_pad(K)
    if delta is None:
        delta = 0.9 * (omega_margin - pad) / math.sqrt(2)
    step = eps / 3
    segs = grid_segments(K, omega_margin, delta, pad=pad)
    L_hat = estimate_cauchy_lipschitz(f, segs, K_val)
    rs = rational_approx(f, segs, step, L_hat, pole_cap=pole_cap)
    rb = pole_shift(rs, K_val, None, step, degree_cap=degree_cap)
    poly, tdeg = polynomialize(rb, K_val, step, degree_cap=degree_cap)
    fv, rv, rbv, pv = f(K_val), rs(K_val), rb(K_val), poly(K_val)
    stages = {
        "rational": _max_err(fv, rv),
        "pole_shift": _max_err(rv, rbv),
        "polynomial": _max_err(rbv, pv),
    }
    final = _max_err(fv, pv)
    budget = RungeBudget(eps, float(np.abs(K_val).max()), float(np.abs(rb.centers).max()),
                         float(delta), len(segs), rs.M, L_hat, rb.degrees, tdeg, stages, final)
    over = {k: e for k, e in stages.items() if e > step}
    if over or final > eps:
        raise ToleranceError(f"certified Runge stages over budget {step:.3g}: {over}, final {final:.3g}")
    result = RungeResult(poly, final, "certified", budget)
    result.segments, result.rational, result.shifted = segs, rs, rb
    return result


def runge_approx(f, K_samples, eps, mode="adaptive", omega_margin=None, validation=None, **kw):
    """Polynomial ``p`` with measured ``max |f - p| <= eps`` on the validation samples of ``K``.

    ``mode="certified"`` runs the four-stage construction (needs
    ``omega_margin``, a guaranteed distance from ``K`` to the boundary of the
    region where ``f`` is holomorphic). ``mode="adaptive"`` fits least-squares
    polynomials of increasing degree. ``K`` must have a connected complement;
    this is not checked.
    """
    K = np.asarray(K_samples, dtype=complex).ravel()
    K_val = K if validation is None else np.asarray(validation, dtype=complex).ravel()
    if mode == "certified":
        if omega_margin is None:
            raise ValueError("certified mode needs omega_margin")
        return runge_certified(f, K, eps, omega_margin, validation=K_val, **kw)
    if mode != "adaptive":
        raise ValueError(f"unknown mode {mode!r}")
    fit = fit_polynomial(K, f(K), eps, K_val, f(K_val), **kw)
    return RungeResult(fit.poly, fit.error, "adaptive")

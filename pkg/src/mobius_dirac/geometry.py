"""Fundamental forms, Weingarten map, curvatures and the thin-layer metric.

All closed forms hold for any twist count ``k``; with ``c = cos(k t/2)``,
``s = sin(k t/2)`` and ``N`` from :func:`mobius_dirac.surface.normalizer`::

    g     = diag(1, N^2/4)
    h     = [[0, kR/N], [kR/N, (N^2 + k^2 r^2) s / (2N)]]      (right normal)
    alpha = -h g^-1
    M     = tr(alpha)/2 = -(N^2 + k^2 r^2) s / N^3
    K     = det(alpha)  = -4 k^2 R^2 / N^4

Switching to the ``"left"`` normal flips the signs of h, alpha and M and
leaves K unchanged.  Closed forms broadcast over array arguments; the
finite-difference oracles work on one chart point at a time.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantError, RangeError
from .surface import (
    NORMAL_CONVENTIONS,
    StripParams,
    _d_r,
    _embed,
    _frame,
    check_domain,
    normalizer,
    numeric_partials,
)

Q3_SAFETY = 0.5
# theta stencils carry all the truncation error (the chart is linear in r) and
# the optimal angular step does not grow with R, unlike the surface default
ORACLE_STEP = 1e-5


def _sign(convention):
    if convention not in NORMAL_CONVENTIONS:
        raise DomainError(f"convention must be one of {NORMAL_CONVENTIONS}, got {convention!r}")
    return 1.0 if convention == "right" else -1.0


def _mat(a, b, c, d):
    a, b, c, d = np.broadcast_arrays(a, b, c, d)
    return np.stack([np.stack([a, b], -1), np.stack([c, d], -1)], -2)


@dataclass(frozen=True)
class FundamentalForms:
    g: np.ndarray
    g_det: np.ndarray
    g_inv: np.ndarray
    h: np.ndarray
    alpha: np.ndarray
    M: np.ndarray
    K: np.ndarray
    convention: str = "right"


@dataclass(frozen=True)
class RescalingFactor:
    """f(q3) = 1 + tr(alpha) q3 + det(alpha) q3^2 and its first-order roots."""

    trace_term: np.ndarray
    det_term: np.ndarray

    def f(self, q3):
        return 1 + self.trace_term * q3 + self.det_term * q3**2

    def approx_plus_half(self, q3):
        """First-order approximant of f^(+1/2)."""
        return 1 + 0.5 * self.trace_term * q3

    def approx_minus_half(self, q3):
        """First-order approximant of f^(-1/2)."""
        return 1 - 0.5 * self.trace_term * q3


@dataclass(frozen=True)
class Metric3D:
    G: np.ndarray
    G_det: np.ndarray


# ---------------------------------------------------------------- closed forms


def first_fundamental(params: StripParams, r, theta):
    """Return ``(g, g_det, g_inv)`` of the (r, theta) chart."""
    r, theta = check_domain(params, r, theta)
    N = normalizer(params, r, theta)
    one, zero = np.ones_like(N), np.zeros_like(N)
    g_det = N**2 / 4
    return _mat(one, zero, zero, g_det), g_det, _mat(one, zero, zero, 1 / g_det)


def second_fundamental(params: StripParams, r, theta, convention: str = "right"):
    sgn = _sign(convention)
    r, theta = check_domain(params, r, theta)
    k, R = params.twist_k, params.R
    N = normalizer(params, r, theta)
    h_rt = k * R / N
    h_tt = (N**2 + (k * r) ** 2) * np.sin(k * theta / 2) / (2 * N)
    return sgn * _mat(np.zeros_like(N), h_rt, h_rt, h_tt)


def weingarten(g, h):
    """Weingarten matrix ``alpha = -h g^-1`` (row a, column b = alpha_a^b)."""
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    sym = np.abs(g - np.swapaxes(g, -1, -2)).max() if g.size else 0.0
    ev = np.linalg.eigvalsh(0.5 * (g + np.swapaxes(g, -1, -2)))
    if sym > 1e-12 * max(1.0, np.abs(g).max()) or np.any(ev <= 0):
        raise InvariantError("metric is not symmetric positive definite")
    return -h @ np.linalg.inv(g)


def weingarten_closed(params: StripParams, r, theta, convention: str = "right"):
    sgn = _sign(convention)
    r, theta = check_domain(params, r, theta)
    k, R = params.twist_k, params.R
    N = normalizer(params, r, theta)
    a_ts = -2 * (N**2 + (k * r) ** 2) * np.sin(k * theta / 2) / N**3
    return sgn * _mat(np.zeros_like(N), -4 * k * R / N**3, -k * R / N, a_ts)


def curvatures(alpha):
    """Mean and Gaussian curvature ``(tr(alpha)/2, det(alpha))``."""
    alpha = np.asarray(alpha, dtype=float)
    M = 0.5 * np.trace(alpha, axis1=-2, axis2=-1)
    K = alpha[..., 0, 0] * alpha[..., 1, 1] - alpha[..., 0, 1] * alpha[..., 1, 0]
    return M, K


def gaussian_curvature_closed(params: StripParams, r, theta):
    r, theta = check_domain(params, r, theta)
    N = normalizer(params, r, theta)
    return -4 * (params.twist_k * params.R) ** 2 / N**4


def mean_curvature_flipped(params: StripParams, r, theta):
    """Mean curvature with the opposite sign, +(N^2 + k^2 r^2) s / N^3.

    This equals tr(alpha)/2 only in the ``"left"`` normal convention; kept
    for the sign-convention report and sensitivity runs.
    """
    r, theta = check_domain(params, r, theta)
    k = params.twist_k
    N = normalizer(params, r, theta)
    return (N**2 + (k * r) ** 2) * np.sin(k * theta / 2) / N**3


def fundamental_forms(params: StripParams, r, theta, convention: str = "right") -> FundamentalForms:
    g, g_det, g_inv = first_fundamental(params, r, theta)
    h = second_fundamental(params, r, theta, convention)
    alpha = weingarten(g, h)
    M, K = curvatures(alpha)
    return FundamentalForms(g, g_det, g_inv, h, alpha, M, K, convention)


def rescaling_factor(alpha) -> RescalingFactor:
    M, K = curvatures(alpha)
    return RescalingFactor(2 * M, K)


def rescale(alpha, q3):
    """Exact f(q3) together with the approximants of f^(+1/2) and f^(-1/2).

    Raises :class:`RangeError` if f <= 0 anywhere.
    """
    rf = rescaling_factor(alpha)
    f = rf.f(q3)
    if np.any(~(f > 0)):
        raise RangeError("rescaling factor f(q3) <= 0: q3 is outside the tubular neighbourhood")
    return f, rf.approx_plus_half(q3), rf.approx_minus_half(q3)


def metric3d(g, alpha, q3) -> Metric3D:
    """Metric of R = r + q3 n: G_ab = ((1 + q3 alpha) g (1 + q3 alpha)^T)_ab, G_33 = 1."""
    g = np.asarray(g, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    rescale(alpha, q3)
    q3 = np.asarray(q3, dtype=float)[..., None, None]
    aT = np.swapaxes(alpha, -1, -2)
    gT = np.swapaxes(g, -1, -2)
    Gab = g + (alpha @ g + gT @ aT) * q3 + (alpha @ g @ aT) * q3**2
    shape = Gab.shape[:-2]
    G = np.zeros(shape + (3, 3))
    G[..., :2, :2] = Gab
    G[..., 2, 2] = 1.0
    return Metric3D(G, np.linalg.det(G))


def spectral_radius(alpha):
    """Spectral radius of alpha (largest |principal curvature|)."""
    M, K = curvatures(alpha)
    disc = np.sqrt(np.maximum(M**2 - K, 0.0))
    return np.maximum(np.abs(M + disc), np.abs(M - disc))


def q3_bound(params: StripParams, r, theta):
    """Admissible normal offset |q3| < 0.5 / spectral_radius(alpha)."""
    rho = spectral_radius(weingarten_closed(params, r, theta))
    with np.errstate(divide="ignore"):
        return np.where(rho > 0, Q3_SAFETY / np.where(rho > 0, rho, 1.0), np.inf)


def check_q3(params: StripParams, r, theta, q3):
    q3 = np.asarray(q3, dtype=float)
    bound = q3_bound(params, r, theta)
    if np.any(~np.isfinite(q3)) or np.any(np.abs(q3) >= bound):
        raise RangeError(f"|q3| must stay below {np.min(bound):.6g} here (the 3D metric would degenerate)")
    return q3


# ---------------------------------------------------------------- oracles


def numeric_first_fundamental(params: StripParams, r: float, theta: float, step: float = ORACLE_STEP):
    p = numeric_partials(params, r, theta, step=step)
    d = np.stack([p.d_r, p.d_theta])
    return d @ d.T


def numeric_second_fundamental(params: StripParams, r: float, theta: float, convention: str = "right", step2: float = None):
    sgn = _sign(convention)
    p = numeric_partials(params, r, theta, step2=step2)
    n = -sgn * _frame(params, np.asarray(r, float), np.asarray(theta, float)).e_n
    H = p.second()
    return np.einsum("abi,i->ab", H, n)


def numeric_weingarten(params: StripParams, r: float, theta: float, convention: str = "right"):
    return weingarten(numeric_first_fundamental(params, r, theta), numeric_second_fundamental(params, r, theta, convention))


def numeric_metric3d(params: StripParams, r: float, theta: float, q3: float, convention: str = "right", step: float = ORACLE_STEP):
    """Finite-difference G_ab of the offset embedding, one-sided at r = +-w."""
    sgn = _sign(convention)
    step = float(step)
    if not step > 0:
        raise DomainError("finite-difference step must be positive")
    r, theta = (float(v) for v in check_domain(params, r, theta))
    check_q3(params, r, theta, q3)

    def R3(rr, tt, qq):
        n = -sgn * _frame(params, np.asarray(rr), np.asarray(tt)).e_n
        return _embed(params, rr, tt) + qq * n

    d_r = _d_r(lambda x: R3(x, theta, q3), r, params.w, step)
    d_t = (R3(r, theta + step, q3) - R3(r, theta - step, q3)) / (2 * step)
    d_q = (R3(r, theta, q3 + step) - R3(r, theta, q3 - step)) / (2 * step)
    D = np.stack([d_r, d_t, d_q])
    return D @ D.T

"""Twisted-strip embedding, adapted frame and finite-difference oracles.

The strip of midcircle radius ``R`` and half-width ``w`` with ``k`` half-twists
is

    x = (R + r cos(k t/2)) cos t
    y = (R + r cos(k t/2)) sin t
    z = r sin(k t/2)

with ``r`` in [-w, w].  ``k = 1`` is the Moebius strip.  For odd ``k`` the
parameter ``t`` runs over the double cover [0, 4 pi]; the deck map
``(r, t) -> (-r, t + 2 pi)`` sends a parameter pair to the same point.

Two normal conventions are used throughout:

``"right"``
    ``e_r x e_s``, so (e_r, e_s, e_n) is right handed.  The second fundamental
    form and Weingarten matrix in :mod:`mobius_dirac.geometry` take their
    textbook closed forms in this convention.
``"left"``
    ``e_s x e_r``, the normal of the adapted Moebius-strip frame
    (left handed, triple product -1).
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

NORMAL_CONVENTIONS = ("right", "left")
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class StripParams:
    """Geometric parameters of a strip with ``twist_k`` half-twists."""

    R: float = 4.0
    w: float = 1.0
    twist_k: int = 1

    def __post_init__(self):
        if not np.isfinite(self.R) or self.R <= 0:
            raise DomainError(f"R must be positive, got {self.R!r}")
        if not np.isfinite(self.w) or not 0 < self.w < self.R:
            raise DomainError(f"w must satisfy 0 < w < R={self.R}, got {self.w!r}")
        if int(self.twist_k) != self.twist_k or self.twist_k < 1:
            raise DomainError(f"twist_k must be an integer >= 1, got {self.twist_k!r}")
        object.__setattr__(self, "twist_k", int(self.twist_k))

    @property
    def theta_max(self) -> float:
        """Parametric period: 4 pi (double cover) for odd twist, 2 pi for even."""
        return 4 * np.pi if self.twist_k % 2 else 2 * np.pi

    @property
    def orientable(self) -> bool:
        return self.twist_k % 2 == 0


@dataclass(frozen=True)
class SurfacePoint:
    r: float
    theta: float
    position: np.ndarray


@dataclass(frozen=True)
class FrameTriad:
    """Adapted frame with the left-handed normal, plus the normalizer N.

    Arrays carry a trailing axis of length 3 when evaluated on grids.
    """

    e_r: np.ndarray
    e_s: np.ndarray
    e_n: np.ndarray
    N: np.ndarray

    def triple_product(self):
        return np.einsum("...i,...i->...", self.e_r, np.cross(self.e_s, self.e_n))


def check_domain(params: StripParams, r, theta):
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(r)) or np.any(np.abs(r) > params.w * (1 + _EDGE_SLACK)):
        raise DomainError(f"r must lie in [-w, w] = [-{params.w}, {params.w}]")
    tmax = params.theta_max
    if np.any(~np.isfinite(theta)) or np.any(theta < -_EDGE_SLACK) or np.any(theta > tmax * (1 + _EDGE_SLACK)):
        raise DomainError(f"theta must lie in [0, {tmax:.6g}]")
    return r, theta


def normalizer(params: StripParams, r, theta):
    """N = 2 |d_theta x|, so that g_theta_theta = N^2 / 4.

    For k = 1 this is (4R^2 + 8Rr cos(t/2) + 2r^2 cos t + 3r^2)^(1/2).
    """
    k = params.twist_k
    c = np.cos(k * np.asarray(theta) / 2)
    return np.sqrt(4 * (params.R + r * c) ** 2 + (k * r) ** 2)


def _embed(params, r, theta):
    k = params.twist_k
    rho = params.R + r * np.cos(k * theta / 2)
    return np.stack(
        np.broadcast_arrays(rho * np.cos(theta), rho * np.sin(theta), r * np.sin(k * theta / 2)),
        axis=-1,
    )


def embed(params: StripParams, r, theta):
    """Cartesian position of the strip point at chart coordinates (r, theta)."""
    r, theta = check_domain(params, r, theta)
    return _embed(params, r, theta)


def surface_point(params: StripParams, r: float, theta: float) -> SurfacePoint:
    return SurfacePoint(float(r), float(theta), embed(params, r, theta))


def _basis(params, r, theta):
    """Orthonormal (e_r, h, u) basis plus tilt cosine/sine and N.

    ``h`` is the horizontal tangent of the midcircle and ``u = e_r x h``;
    e_s = cos(theta_x) h + sin(theta_x) u.
    """
    k = params.twist_k
    c = np.cos(k * theta / 2)
    s = np.sin(k * theta / 2)
    ct, st = np.cos(theta), np.sin(theta)
    zero = np.zeros(np.broadcast(r, theta).shape)
    e_r = np.stack(np.broadcast_arrays(c * ct, c * st, s + zero), axis=-1)
    h = np.stack(np.broadcast_arrays(-st + zero, ct + zero, zero), axis=-1)
    u = np.stack(np.broadcast_arrays(-s * ct + zero, -s * st + zero, c + zero), axis=-1)
    N = normalizer(params, r, theta)
    cos_x = 2 * (params.R + r * c) / N
    sin_x = k * r / N
    return e_r, h, u, cos_x, sin_x, N


def _frame(params, r, theta):
    e_r, h, u, cos_x, sin_x, N = _basis(params, r, theta)
    e_s = cos_x[..., None] * h + sin_x[..., None] * u
    e_n = sin_x[..., None] * h - cos_x[..., None] * u
    return FrameTriad(e_r, e_s, e_n, N)


def frame(params: StripParams, r, theta) -> FrameTriad:
    """Adapted frame (e_r, e_s, e_n) with the left-handed normal e_n = e_s x e_r."""
    r, theta = check_domain(params, r, theta)
    return _frame(params, r, theta)


def reference_triad_k1(R, r, theta) -> FrameTriad:
    """Component-by-component k = 1 triad, kept as an independent cross-check."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ct, st = np.cos(theta), np.sin(theta)
    N = np.sqrt(4 * R**2 + 8 * R * r * c + 2 * r**2 * ct + 3 * r**2)
    e_r = np.stack(np.broadcast_arrays(c * ct, c * st, s), axis=-1)
    e_s = (2 / N)[..., None] * np.stack(
        np.broadcast_arrays(
            -(R * st + 1.5 * r * ct * s + r * s),
            R * ct + 0.25 * r * c + 0.75 * r * np.cos(1.5 * theta),
            0.5 * r * c,
        ),
        axis=-1,
    )
    e_n = (2 / N)[..., None] * np.stack(
        np.broadcast_arrays(
            R * s * ct - r * s**2 * st,
            R * s * st + 0.5 * r * (st**2 + ct),
            -R * c - r * c**2,
        ),
        axis=-1,
    )
    return FrameTriad(e_r, e_s, e_n, N)


def normal(params: StripParams, r, theta, convention: str = "right"):
    """Unit normal in the requested convention (see module docstring)."""
    if convention not in NORMAL_CONVENTIONS:
        raise DomainError(f"convention must be one of {NORMAL_CONVENTIONS}, got {convention!r}")
    r, theta = check_domain(params, r, theta)
    e_n = _frame(params, r, theta).e_n
    return -e_n if convention == "right" else e_n


def embed_offset(params: StripParams, r, theta, q3, convention: str = "right"):
    """Point at signed normal distance ``q3`` from the strip.

    Raises :class:`RangeError` when ``q3`` leaves the validity bound of
    :func:`mobius_dirac.geometry.q3_bound`, where the 3D metric degenerates.
    """
    from .geometry import check_q3

    r, theta = check_domain(params, r, theta)
    check_q3(params, r, theta, q3)
    return _embed(params, r, theta) + np.asarray(q3)[..., None] * normal(params, r, theta, convention)


@dataclass(frozen=True)
class Partials:
    """Finite-difference derivatives of the embedding at one chart point."""

    d_r: np.ndarray
    d_theta: np.ndarray
    d_rr: np.ndarray
    d_rtheta: np.ndarray
    d_thetar: np.ndarray
    d_thetatheta: np.ndarray

    def first(self):
        return self.d_r, self.d_theta

    def second(self):
        return np.array([[self.d_rr, self.d_rtheta], [self.d_thetar, self.d_thetatheta]])


def default_step(params: StripParams) -> float:
    return 1e-5 * max(1.0, params.R)


def default_step2(params: StripParams) -> float:
    # second differences lose ~eps/h^2; 1e-4 balances that against h^2 truncation
    return 1e-4 * max(1.0, params.R)


def _d_r(f, r, w, h):
    """Second-order derivative in r, one-sided when the stencil would cross r = +-w."""
    if r + h > w:
        return (3 * f(r) - 4 * f(r - h) + f(r - 2 * h)) / (2 * h)
    if r - h < -w:
        return (-3 * f(r) + 4 * f(r + h) - f(r + 2 * h)) / (2 * h)
    return (f(r + h) - f(r - h)) / (2 * h)


def _d_rr(f, r, w, h):
    if r + h > w:
        return (2 * f(r) - 5 * f(r - h) + 4 * f(r - 2 * h) - f(r - 3 * h)) / h**2
    if r - h < -w:
        return (2 * f(r) - 5 * f(r + h) + 4 * f(r + 2 * h) - f(r + 3 * h)) / h**2
    return (f(r + h) - 2 * f(r) + f(r - h)) / h**2


def _d_t(f, t, h):
    return (f(t + h) - f(t - h)) / (2 * h)


def numeric_partials(params: StripParams, r: float, theta: float, step: float = None, step2: float = None) -> Partials:
    """Central-difference partials of the embedding (one-sided at r = +-w).

    ``step`` is used for first derivatives, ``step2`` for second derivatives.
    Theta stencils may leave [0, theta_max]; the embedding is smooth and
    periodic there.
    """
    step = default_step(params) if step is None else float(step)
    step2 = default_step2(params) if step2 is None else float(step2)
    if not step > 0 or not step2 > 0:
        raise DomainError("finite-difference step must be positive")
    r, theta = (float(v) for v in check_domain(params, r, theta))
    w = params.w
    X = lambda rr, tt: _embed(params, rr, tt)

    d_r = _d_r(lambda x: X(x, theta), r, w, step)
    d_theta = _d_t(lambda t: X(r, t), theta, step)
    d_rr = _d_rr(lambda x: X(x, theta), r, w, step2)
    d_tt = (X(r, theta + step2) - 2 * X(r, theta) + X(r, theta - step2)) / step2**2
    # the two mixed orders are evaluated as separate nested stencils
    d_rt = _d_r(lambda x: _d_t(lambda t: X(x, t), theta, step2), r, w, step2)
    d_tr = _d_t(lambda t: _d_r(lambda x: X(x, t), r, w, step2), theta, step2)
    return Partials(d_r, d_theta, d_rr, d_rt, d_tr, d_tt)

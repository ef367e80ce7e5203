"""Geometric gauge potential, its curl B_n, and the field-character report.

With c = cos(k t/2), s = sin(k t/2) and the tilt angle theta_x
(sin = k r/N, cos = 2(R + r c)/N) the closed-form potential is

    A_r = 2 k R / N^2                                   (= d_r theta_x)
    A_s = s^2 sin^2(x) (cos t cos^2(x) + c sin 2x) / sqrt(N^2 - k^2 r^2)
          + ((sin t s + 2c) cos x - cos t sin x) / N

and the normal field is B_n = d_r A_s - d_s A_r with d_s = (2/N) d_theta.
The connection of the canonical frame gives an independent potential,
omega_a = (d_a e_r) . e_s, whose difference from the closed form is a
reported diagnostic rather than an asserted identity.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import ndimage
from scipy.interpolate import RegularGridInterpolator

from .errors import ConfigError, DomainError
from .frames import canonical_rotation
from .surface import StripParams, _frame, check_domain, normalizer

SOURCES = ("closed-form", "connection")
MONOPOLE_THRESHOLD = 0.5
NULL_TOL = 1e-12


def _closed_raw(params, r, theta):
    """Closed-form (A_r, A_s); complex-safe in r for complex-step differentiation."""
    k, R = params.twist_k, params.R
    c = np.cos(k * theta / 2)
    s = np.sin(k * theta / 2)
    N = np.sqrt(4 * (R + r * c) ** 2 + (k * r) ** 2)
    sx = k * r / N
    cx = 2 * (R + r * c) / N
    A_r = 2 * k * R / N**2
    A_s = (
        s**2 * sx**2 * (np.cos(theta) * cx**2 + c * 2 * sx * cx) / np.sqrt(N**2 - (k * r) ** 2)
        + ((np.sin(theta) * s + 2 * c) * cx - np.cos(theta) * sx) / N
    )
    return A_r, A_s


def gauge_closed(params: StripParams, r, theta):
    """Closed-form potential ``(A_r, A_s)``; A_n vanishes identically."""
    r, theta = check_domain(params, r, theta)
    return _closed_raw(params, r, theta)


def tilt_r_derivative(params: StripParams, r, theta):
    """d/dr arcsin(k r / N) by the chain rule (independent check of A_r)."""
    r, theta = check_domain(params, r, theta)
    k, R = params.twist_k, params.R
    c = np.cos(k * theta / 2)
    N = normalizer(params, r, theta)
    dN = (4 * (R + r * c) * c + k * k * r) / N
    u = k * r / N
    du = k / N - k * r * dN / N**2
    return du / np.sqrt(1 - u**2)


def connection_closed(params: StripParams, r, theta):
    """Analytic (omega_r, omega_s) of the canonical frame: 0 and (2/N)(c cos x + k/2 sin x)."""
    r, theta = check_domain(params, r, theta)
    k = params.twist_k
    c = np.cos(k * theta / 2)
    N = normalizer(params, r, theta)
    om_t = c * 2 * (params.R + r * c) / N + 0.5 * k * k * r / N
    return np.zeros_like(N), 2 * om_t / N


def _raw_rotation(params, r, theta):
    f = _frame(params, r, theta)
    return np.stack([f.e_r, f.e_s, -f.e_n], axis=-2)


def connection_matrices(params: StripParams, r, theta, step: float = 1e-4):
    """Antisymmetric ``(Omega_r, Omega_s)`` with Omega_a = (d_a U) U^T for the canonical frame.

    Central differences; one-sided (second order) in r where the stencil
    would leave [-w, w].  Theta stencils wrap smoothly.
    """
    if not step > 0:
        raise DomainError("finite-difference step must be positive")
    r, theta = check_domain(params, r, theta)
    r, theta = np.broadcast_arrays(r, theta)
    U = canonical_rotation(params, r, theta)
    F = lambda rr: _raw_rotation(params, rr, theta)
    w = params.w
    central = (F(r + step) - F(r - step)) / (2 * step)
    fwd = (-3 * U + 4 * F(r + step) - F(r + 2 * step)) / (2 * step)
    bwd = (3 * U - 4 * F(r - step) + F(r - 2 * step)) / (2 * step)
    hi = (r + step > w)[..., None, None]
    lo = (r - step < -w)[..., None, None]
    dU_r = np.where(hi, bwd, np.where(lo, fwd, central))
    dU_t = (_raw_rotation(params, r, theta + step) - _raw_rotation(params, r, theta - step)) / (2 * step)
    N = normalizer(params, r, theta)[..., None, None]
    Ut = np.swapaxes(U, -1, -2)
    return dU_r @ Ut, (2 / N) * (dU_t @ Ut)


def gauge_connection(params: StripParams, r, theta, step: float = 1e-4):
    """Connection-derived potential: the rotation rate of the tangent pair about the normal."""
    Om_r, Om_s = connection_matrices(params, r, theta, step)
    return Om_r[..., 0, 1], Om_s[..., 0, 1]


def linking_number(params: StripParams) -> Fraction:
    """Linking number of the strip's edge with its core, k/2."""
    return Fraction(params.twist_k, 2)


# ---------------------------------------------------------------- grids


@dataclass
class GaugeFieldGrid:
    """Fields on the (r, theta) lattice, arrays shaped (n_r, n_theta).

    r nodes include both edges; theta nodes are periodic (endpoint excluded).
    """

    params: StripParams
    r: np.ndarray
    theta: np.ndarray
    N: np.ndarray
    A_r: np.ndarray
    A_s: np.ndarray
    source: str = "closed-form"
    B_n: np.ndarray = field(default=None)

    @property
    def shape(self):
        return self.A_r.shape

    @property
    def dr(self):
        return self.r[1] - self.r[0]

    @property
    def dtheta(self):
        return self.params.theta_max / len(self.theta)

    @property
    def sqrt_g(self):
        return self.N / 2

    def meshgrid(self):
        return np.meshgrid(self.r, self.theta, indexing="ij")


def grid_nodes(params: StripParams, n_r: int, n_theta: int):
    if n_r < 3 or n_theta < 3:
        raise ConfigError([f"grid needs at least 3 nodes per axis, got {n_r}x{n_theta}"])
    r = np.linspace(-params.w, params.w, int(n_r))
    theta = np.arange(int(n_theta)) * (params.theta_max / n_theta)
    return r, theta


def gauge_field_grid(params: StripParams, n_r: int, n_theta: int, source: str = "closed-form", step: float = 1e-4) -> GaugeFieldGrid:
    """Sample A on the lattice and attach B_n."""
    if source not in SOURCES:
        raise ConfigError([f"source must be one of {SOURCES}, got {source!r}"])
    r, theta = grid_nodes(params, n_r, n_theta)
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    if source == "closed-form":
        A_r, A_s = gauge_closed(params, rr, tt)
    else:
        A_r, A_s = gauge_connection(params, rr, tt, step)
    grid = GaugeFieldGrid(params, r, theta, normalizer(params, rr, tt), A_r, A_s, source)
    grid.B_n = magnetic_field(grid)
    return grid


def magnetic_field(fields: GaugeFieldGrid):
    """B_n = d_r A_s - (2/N) d_theta A_r on the lattice.

    Second-order stencils: ``np.gradient`` in r (one-sided at the edges) and a
    periodic central difference in theta.
    """
    n_r, n_t = fields.shape
    if n_r < 3 or n_t < 3:
        raise ConfigError([f"grid needs at least 3 nodes per axis, got {n_r}x{n_t}"])
    dAs_dr = np.gradient(fields.A_s, fields.r, axis=0, edge_order=2)
    dAr_dt = (np.roll(fields.A_r, -1, axis=1) - np.roll(fields.A_r, 1, axis=1)) / (2 * fields.dtheta)
    return dAs_dr - (2 / fields.N) * dAr_dt


def magnetic_field_reference(params: StripParams, r, theta, h: float = 1e-30):
    """Pointwise B_n from complex-step r-derivatives of the closed form.

    The theta-derivative of A_r = 2kR/N^2 is taken analytically, so the
    result is exact to rounding and serves as a reference for grid curls.
    """
    r, theta = check_domain(params, r, theta)
    _, As_c = _closed_raw(params, r + 1j * h, theta)
    dAs_dr = As_c.imag / h
    k, R = params.twist_k, params.R
    c = np.cos(k * theta / 2)
    N = normalizer(params, r, theta)
    dN2_dt = 8 * (R + r * c) * r * (-0.5 * k * np.sin(k * theta / 2))
    dAr_dt = -2 * k * R * dN2_dt / N**4
    return dAs_dr - (2 / N) * dAr_dt


def curl_convergence(params: StripParams, n_r: int = 17, n_theta: int = 64, levels: int = 3):
    """Max grid-curl error against :func:`magnetic_field_reference` under halving.

    Returns ``(sizes, errors, orders)`` with ``orders[i] = log2(e_i / e_{i+1})``.
    """
    sizes, errors = [], []
    nr, nt = n_r, n_theta
    for _ in range(levels):
        g = gauge_field_grid(params, nr, nt)
        rr, tt = g.meshgrid()
        errors.append(np.abs(g.B_n - magnetic_field_reference(params, rr, tt)).max())
        sizes.append((nr, nt))
        nr, nt = 2 * nr - 1, 2 * nt
    errors = np.array(errors)
    return sizes, errors, np.log2(errors[:-1] / errors[1:])


# ---------------------------------------------------------------- structure


def _periodic_interpolator(grid: GaugeFieldGrid, values):
    theta = np.append(grid.theta, grid.params.theta_max)
    vals = np.concatenate([values, values[:, :1]], axis=1)
    return RegularGridInterpolator((grid.r, theta), vals)


def resample(grid: GaugeFieldGrid, values, r, theta):
    """Bilinear resampling of a periodic lattice field at (r, theta)."""
    pts = np.stack(np.broadcast_arrays(r, np.mod(theta, grid.params.theta_max)), axis=-1)
    return _periodic_interpolator(grid, values)(pts)


def sign_agreement(coarse: GaugeFieldGrid, fine: GaugeFieldGrid, tol: float = 0.0):
    """Fraction of coarse nodes whose sign(B_n) matches the fine field there."""
    rr, tt = coarse.meshgrid()
    fine_on_coarse = resample(fine, fine.B_n, rr, tt)
    a = np.where(np.abs(coarse.B_n) <= tol, 0, np.sign(coarse.B_n))
    b = np.where(np.abs(fine_on_coarse) <= tol, 0, np.sign(fine_on_coarse))
    return float(np.mean(a == b))


def sign_lobes(values, periodic_theta: bool = True):
    """Count connected regions of positive and of negative sign.

    Regions touching across the theta seam are merged when ``periodic_theta``.
    """
    counts = {}
    for name, mask in (("positive", values > 0), ("negative", values < 0)):
        labels, n = ndimage.label(mask)
        if periodic_theta and n:
            parent = list(range(n + 1))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for a, b in zip(labels[:, 0], labels[:, -1]):
                if a and b:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
            n = len({find(i) for i in range(1, n + 1)})
        counts[name] = n
    return counts


@dataclass(frozen=True)
class FieldCharacter:
    classification: str
    positive_fraction: float
    negative_fraction: float
    flux: float
    abs_flux: float
    coherence: float
    face_coherence: float
    dominant_sign: int
    linking: Fraction

    def as_dict(self):
        return {
            "classification": self.classification,
            "positive_fraction": self.positive_fraction,
            "negative_fraction": self.negative_fraction,
            "flux": self.flux,
            "abs_flux": self.abs_flux,
            "coherence": self.coherence,
            "face_coherence": self.face_coherence,
            "dominant_sign": self.dominant_sign,
            "linking_number": str(self.linking),
        }


def field_character(fields: GaugeFieldGrid, linking: Fraction = None, threshold: float = MONOPOLE_THRESHOLD) -> FieldCharacter:
    """Classify the normal field as "monopole-like", "common field" or "null".

    The field is collected over every face of the strip: for half-integer
    linking the parametric double cover already runs over the single side
    with both normal orientations; for integer linking the surface has two
    faces whose outward normals are opposite, so the second face carries
    -B_n.  The coherence ``|flux| / abs_flux`` of that face field (flux
    weighted by sqrt(g) dr dtheta) is 1 for a single-signed field and 0 for a
    field whose flux enters one face and leaves the other; the field is
    monopole-like when it reaches ``threshold``.  ``face_coherence`` is the
    same ratio over the parametric domain alone, reported for reference.
    """
    linking = linking_number(fields.params) if linking is None else Fraction(linking)
    B = fields.B_n
    weight = fields.sqrt_g * fields.dr * fields.dtheta
    if np.abs(B).max() <= NULL_TOL:
        return FieldCharacter("null", 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, linking)
    face = abs(float(np.sum(B * weight))) / float(np.sum(np.abs(B) * weight))
    if linking.denominator == 1:
        B, weight = np.concatenate([B, -B]), np.concatenate([weight, weight])
    flux = float(np.sum(B * weight))
    abs_flux = float(np.sum(np.abs(B) * weight))
    coherence = abs(flux) / abs_flux
    label = "monopole-like" if coherence >= threshold else "common field"
    return FieldCharacter(
        label,
        float(np.mean(fields.B_n > 0)),
        float(np.mean(fields.B_n < 0)),
        flux,
        abs_flux,
        coherence,
        face,
        int(np.sign(flux)) if coherence > 0 else 0,
        linking,
    )

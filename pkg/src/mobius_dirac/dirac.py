"""Normal modes and the lattice Dirac operator on the strip.

Per normal-spin sector ``s3 = +1/-1`` the tangent operator acts on
two-component spinors and reads

    H = sigma_1 (P_r - s3 A_r) + sigma_2 (P_s - s3 A_s)
        + s3 sigma_3 (m + m_eff + W L)

with P_a = -i d_a, d_s = (2/N) d_theta, and ``W L`` a Wilson term (graph
Laplacian) that lifts fermion doublers.  The sign of the mass channel
follows s3, which makes the two sectors time-reversal partners,
``H_- = sigma_2 conj(H_+) sigma_2``, so their spectra coincide exactly.

The matrix is assembled for the half-density amplitude
``phi = sqrt(w) psi`` where ``w = sqrt(g) dr dtheta`` is the node weight;
in that basis the operator is an ordinary Hermitian matrix and eigenvectors
map back to wavefunctions orthonormal under the sqrt(g)-weighted product.

Node index is ``component * (n_r n_theta) + i_r * n_theta + i_theta``.
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
import scipy.linalg as sla
import scipy.sparse as sps

from .errors import ConfigError, DomainError, InvariantError, UsageError
from .gauge import gauge_closed
from .geometry import mean_curvature_flipped, weingarten_closed
from .surface import StripParams, normalizer

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
REPRESENTATION = "H = s1 (P_r - s3 A_r) + s2 (P_s - s3 A_s) + s3 s3z (m + m_eff + W L)"
DENSE_CAP = 12000
MIN_STRIP_GRID = (8, 32)
EDGE_FRACTION = 0.2
LEVEL_TOL = 1e-8
SIGN_TOL = 1e-8
HERMITICITY_TOL = 1e-12


# ---------------------------------------------------------------- normal modes


@dataclass(frozen=True)
class NormalMode:
    """Hard-wall ground-state family across a layer of thickness ``epsilon``."""

    epsilon: float
    n: int

    @property
    def k_n(self) -> float:
        return (2 * self.n + 1) * np.pi / self.epsilon

    @property
    def E_perp(self) -> float:
        return self.k_n

    @property
    def amplitude(self) -> float:
        return np.sqrt(2 / self.epsilon)

    def __call__(self, q3):
        q3 = np.asarray(q3, dtype=float)
        inside = np.abs(q3) <= self.epsilon / 2
        return np.where(inside, self.amplitude * np.cos(self.k_n * q3), 0.0)

    def norm(self, nodes: int = None) -> float:
        """Integral of |chi|^2 over the layer by Gauss-Legendre quadrature."""
        nodes = 32 + 8 * self.n if nodes is None else int(nodes)
        x, wts = leggauss(nodes)
        half = self.epsilon / 2
        return float(half * np.sum(wts * self(half * x) ** 2))


def normal_modes(epsilon: float, n: int) -> NormalMode:
    if not np.isfinite(epsilon) or epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    return NormalMode(float(epsilon), int(n))


# ---------------------------------------------------------------- grid


@dataclass(frozen=True)
class DiracOptions:
    """Discretization and physics switches.

    boundary
        ``"hard"``: r nodes are interior points of [-w, w] and amplitudes
        vanish on the edges.  ``"periodic"``: r wraps (flat metric only).
    metric
        ``"strip"`` uses sqrt(g_thth) = N/2; ``"flat"`` uses the constant
        ``flat_radius`` (default R).
    mass_sign
        ``"trace"``: m_eff = tr(alpha)/2; ``"flipped"``: the opposite sign.
    """

    wilson: float = 0.5
    boundary: str = "hard"
    metric: str = "strip"
    gauge: bool = True
    effective_mass: bool = True
    mass_sign: str = "trace"
    flat_radius: float = None

    def __post_init__(self):
        bad = []
        if not np.isfinite(self.wilson) or self.wilson < 0:
            bad.append(f"wilson must be >= 0, got {self.wilson!r}")
        if self.boundary not in ("hard", "periodic"):
            bad.append(f"boundary must be 'hard' or 'periodic', got {self.boundary!r}")
        if self.metric not in ("strip", "flat"):
            bad.append(f"metric must be 'strip' or 'flat', got {self.metric!r}")
        if self.mass_sign not in ("trace", "flipped"):
            bad.append(f"mass_sign must be 'trace' or 'flipped', got {self.mass_sign!r}")
        if self.boundary == "periodic" and self.metric != "flat":
            bad.append("periodic r-boundary is only defined for the flat metric")
        if self.flat_radius is not None and not self.flat_radius > 0:
            bad.append(f"flat_radius must be positive, got {self.flat_radius!r}")
        if bad:
            raise ConfigError(bad)


@dataclass(frozen=True)
class DiracGrid:
    params: StripParams
    n_r: int
    n_theta: int
    boundary: str = "hard"

    def __post_init__(self):
        if self.n_r < 3 or self.n_theta < 3:
            raise ConfigError([f"grid needs at least 3 nodes per axis, got {self.n_r}x{self.n_theta}"])
        if self.boundary not in ("hard", "periodic"):
            raise ConfigError([f"boundary must be 'hard' or 'periodic', got {self.boundary!r}"])

    @property
    def size(self) -> int:
        return self.n_r * self.n_theta

    @property
    def dr(self) -> float:
        w = self.params.w
        return 2 * w / (self.n_r + 1) if self.boundary == "hard" else 2 * w / self.n_r

    @property
    def dtheta(self) -> float:
        return self.params.theta_max / self.n_theta

    @property
    def r(self):
        w = self.params.w
        if self.boundary == "hard":
            return np.linspace(-w, w, self.n_r + 2)[1:-1]
        return -w + (np.arange(self.n_r) + 0.5) * self.dr

    @property
    def theta(self):
        return np.arange(self.n_theta) * self.dtheta

    def meshgrid(self):
        return np.meshgrid(self.r, self.theta, indexing="ij")


def effective_mass_field(params: StripParams, grid: DiracGrid, mass_sign: str = "trace"):
    """Per-node m_eff, shaped (n_r, n_theta)."""
    rr, tt = grid.meshgrid()
    if mass_sign == "flipped":
        return mean_curvature_flipped(params, rr, tt)
    alpha = weingarten_closed(params, rr, tt)
    return 0.5 * np.trace(alpha, axis1=-2, axis2=-1)


# ---------------------------------------------------------------- assembly


@dataclass
class DiracGridOperator:
    grid: DiracGrid
    sector: int
    mass: float
    options: DiracOptions
    matrix: np.ndarray
    weights: np.ndarray
    A_r: np.ndarray
    A_s: np.ndarray
    m_eff: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_error(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())


def _difference(n, periodic):
    C = sps.diags([np.ones(n - 1), -np.ones(n - 1)], [1, -1], format="lil")
    if periodic:
        C[0, n - 1] = -1
        C[n - 1, 0] = 1
    return C.tocsr()


def _laplacian(n_nodes, i, j, weight):
    """Graph Laplacian of the undirected links (i, j) with link weights."""
    rows = np.concatenate([i, j])
    cols = np.concatenate([j, i])
    off = sps.coo_matrix((-np.concatenate([weight, weight]), (rows, cols)), shape=(n_nodes, n_nodes))
    deg = np.zeros(n_nodes)
    np.add.at(deg, i, weight)
    np.add.at(deg, j, weight)
    return (off + sps.diags(deg)).tocsr()


def assemble(params: StripParams, grid: DiracGrid, sector: int, mass: float = 0.0, options: DiracOptions = None) -> DiracGridOperator:
    """Assemble the dense Hermitian sector operator (see module docstring)."""
    options = DiracOptions() if options is None else options
    if sector not in (1, -1):
        raise ConfigError([f"sector must be +1 or -1, got {sector!r}"])
    if grid.params != params:
        raise ConfigError(["grid was built for different strip parameters"])
    if grid.boundary != options.boundary:
        raise ConfigError([f"grid boundary {grid.boundary!r} does not match options boundary {options.boundary!r}"])
    if options.metric == "strip" and (grid.n_r < MIN_STRIP_GRID[0] or grid.n_theta < MIN_STRIP_GRID[1]):
        raise ConfigError([f"strip operator needs at least {MIN_STRIP_GRID[0]}x{MIN_STRIP_GRID[1]} nodes, got {grid.n_r}x{grid.n_theta}"])
    if not np.isfinite(mass):
        raise ConfigError([f"mass must be finite, got {mass!r}"])
    dim = 2 * grid.size
    if dim > DENSE_CAP:
        raise ConfigError([f"operator dimension {dim} exceeds the dense cap {DENSE_CAP}; use a smaller grid"])

    n_r, n_t = grid.n_r, grid.n_theta
    dr, dt = grid.dr, grid.dtheta
    rr, tt = grid.meshgrid()
    if options.metric == "strip":
        n = normalizer(params, rr, tt) / 2
    else:
        n = np.full(rr.shape, params.R if options.flat_radius is None else options.flat_radius)
    zero = np.zeros(rr.shape)
    if options.gauge:
        A_r, A_s = gauge_closed(params, rr, tt)
    else:
        A_r, A_s = zero, zero
    m_eff = effective_mass_field(params, grid, options.mass_sign) if options.effective_mass else zero

    nv = n.ravel()
    I_r, I_t = sps.identity(n_r), sps.identity(n_t)
    P_r = (-0.5j / dr) * sps.kron(_difference(n_r, options.boundary == "periodic"), I_t)
    D = sps.diags(nv**-0.5)
    P_s = (-0.5j / dt) * (D @ sps.kron(I_r, _difference(n_t, True)) @ D)

    idx = np.arange(grid.size).reshape(n_r, n_t)
    # r links
    if options.boundary == "periodic":
        ri, rj = idx.ravel(), np.roll(idx, -1, axis=0).ravel()
    else:
        ri, rj = idx[:-1].ravel(), idx[1:].ravel()
    L = _laplacian(grid.size, ri, rj, np.full(ri.shape, 1 / (2 * dr)))
    if options.boundary == "hard":
        # links to the zero-amplitude wall nodes keep their degree
        wall = np.zeros((n_r, n_t))
        wall[[0, -1]] = 1 / (2 * dr)
        L = L + sps.diags(wall.ravel())
    ti, tj = idx.ravel(), np.roll(idx, -1, axis=1).ravel()
    h_link = 0.5 * (nv[ti] + nv[tj]) * dt
    L = L + _laplacian(grid.size, ti, tj, 1 / (2 * h_link))

    Mch = sps.diags(mass + m_eff.ravel()) + options.wilson * L
    H = (
        sps.kron(SIGMA[0], P_r - sector * sps.diags(A_r.ravel()))
        + sps.kron(SIGMA[1], P_s - sector * sps.diags(A_s.ravel()))
        + sector * sps.kron(SIGMA[2], Mch)
    )
    H = H.toarray()
    op = DiracGridOperator(grid, sector, float(mass), options, H, n * dr * dt, A_r, A_s, m_eff)
    err = op.hermiticity_error()
    if err > HERMITICITY_TOL:
        raise InvariantError(f"assembled operator is not Hermitian (max |H - H^dagger| = {err:.3g})")
    return op


def square_flat_grid(n_r: int, n_theta: int, spacing: float = 1.0, twist_k: int = 1):
    """Grid and options of a flat periodic lattice with equal spacings in r and s."""
    w = 0.5 * n_r * spacing
    params = StripParams(R=2 * w + 1.0, w=w, twist_k=twist_k)
    grid = DiracGrid(params, n_r, n_theta, "periodic")
    radius = spacing / grid.dtheta
    options = DiracOptions(boundary="periodic", metric="flat", gauge=False, effective_mass=False, flat_radius=radius)
    return params, grid, options


def flat_control_options(wilson: float = 0.5, flat_radius: float = None) -> DiracOptions:
    """No gauge field, no effective mass, flat metric, periodic in both directions."""
    return DiracOptions(wilson=wilson, boundary="periodic", metric="flat", gauge=False, effective_mass=False, flat_radius=flat_radius)


def textbook_flat_matrix(n_r: int, n_theta: int, dr: float, ds: float, mass: float = 0.0, wilson: float = 0.5, sector: int = 1):
    """Wilson-Dirac matrix on a periodic square lattice, built site by site.

    Reference for the assembled flat-control operator.
    """
    nn = n_r * n_theta
    H = np.zeros((2 * nn, 2 * nn), dtype=complex)
    site = lambda i, j: (i % n_r) * n_theta + (j % n_theta)
    for i in range(n_r):
        for j in range(n_theta):
            x = site(i, j)
            hop = []
            for (di, dj), a, sig in (((1, 0), dr, SIGMA[0]), ((0, 1), ds, SIGMA[1])):
                fwd, bwd = site(i + di, j + dj), site(i - di, j - dj)
                # -i/(2a) (psi(x+1) - psi(x-1)) and the Wilson -W/(2a) hops
                hop.append((fwd, -0.5j / a * sig - sector * wilson / (2 * a) * SIGMA[2]))
                hop.append((bwd, 0.5j / a * sig - sector * wilson / (2 * a) * SIGMA[2]))
                onsite = sector * wilson / a * SIGMA[2]
                for p in range(2):
                    for q in range(2):
                        H[p * nn + x, q * nn + x] += onsite[p, q]
            for y, blk in hop:
                for p in range(2):
                    for q in range(2):
                        H[p * nn + x, q * nn + y] += blk[p, q]
            for p in range(2):
                H[p * nn + x, p * nn + x] += sector * mass * SIGMA[2][p, p]
    return H


def flat_dispersion(grid: DiracGrid, mass: float = 0.0, wilson: float = 0.5, flat_radius: float = None):
    """Sorted analytic eigenvalues of the periodic flat-control lattice."""
    if grid.boundary != "periodic":
        raise UsageError("the analytic dispersion needs a periodic grid")
    radius = grid.params.R if flat_radius is None else flat_radius
    dr, ds = grid.dr, radius * grid.dtheta
    kr = 2 * np.pi * np.arange(grid.n_r) / grid.n_r
    kt = 2 * np.pi * np.arange(grid.n_theta) / grid.n_theta
    KR, KT = np.meshgrid(kr, kt, indexing="ij")
    m = mass + wilson * ((1 - np.cos(KR)) / dr + (1 - np.cos(KT)) / ds)
    E = np.sqrt((np.sin(KR) / dr) ** 2 + (np.sin(KT) / ds) ** 2 + m**2).ravel()
    return np.sort(np.concatenate([-E, E]))


def time_reversal_conjugate(op: DiracGridOperator):
    """sigma_2 conj(H) sigma_2, which equals the opposite-sector operator."""
    T = np.kron(SIGMA[1], np.eye(op.grid.size))
    return T @ op.matrix.conj() @ T


# ---------------------------------------------------------------- spectrum


@dataclass
class Spectrum:
    """Lowest-|E| eigenpairs, sorted by energy.

    ``eigenvectors`` has shape (count, 2, n_r, n_theta) and holds psi, so
    that sum(weights * |psi|^2) = 1.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sector: int = 0
    grid: DiracGrid = None
    weights: np.ndarray = None
    mass: float = 0.0
    options: DiracOptions = None
    mean_r: np.ndarray = field(default=None)
    edge_weight: np.ndarray = field(default=None)
    current: np.ndarray = field(default=None)

    def gram(self):
        v = self.eigenvectors.reshape(len(self.eigenvalues), 2, -1)
        w = np.ones(v.shape[-1]) if self.weights is None else self.weights.ravel()
        return np.einsum("apn,bpn,n->ab", v.conj(), v, w)


def _negative_count(H) -> int:
    """Number of negative eigenvalues from the LDL^H inertia."""
    _, d, _ = sla.ldl(H, hermitian=True)
    n, i, neg = d.shape[0], 0, 0
    while i < n:
        if i + 1 < n and d[i + 1, i] != 0:
            neg += int(np.sum(np.linalg.eigvalsh(d[i : i + 2, i : i + 2]) < 0))
            i += 2
        else:
            neg += int(d[i, i].real < 0)
            i += 1
    return neg


def _lowest_abs(H, count):
    n = H.shape[0]
    if 4 * count >= n or n <= 1024:
        E, V = sla.eigh(H, driver="evr")
    else:
        k = _negative_count(H)
        lo, hi = max(0, k - count), min(n - 1, k + count - 1)
        E, V = sla.eigh(H, subset_by_index=(lo, hi), driver="evr")
    keep = np.sort(np.argsort(np.abs(E), kind="stable")[:count])
    return E[keep], V[:, keep]


def _fix_phase(V):
    idx = np.argmax(np.abs(V), axis=0)
    piv = V[idx, np.arange(V.shape[1])]
    return V * (np.abs(piv) / piv)[None, :], idx


def spectrum(op, count: int = 20) -> Spectrum:
    """Lowest-|E| ``count`` eigenpairs of a grid operator (or a bare Hermitian matrix).

    Deterministic: eigenvectors are phased so their largest entry is real
    positive, and states are ordered by energy with ties broken by the
    position of that entry.
    """
    if isinstance(op, DiracGridOperator):
        H = op.matrix
    else:
        H = np.asarray(op)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise UsageError("spectrum needs a square matrix or a DiracGridOperator")
    n = H.shape[0]
    if n > DENSE_CAP:
        raise ConfigError([f"operator dimension {n} exceeds the dense cap {DENSE_CAP}; use a smaller grid"])
    count = int(count)
    if not 1 <= count <= n:
        raise UsageError(f"count must lie in [1, {n}], got {count}")
    E, V = _lowest_abs(H, count)
    V, sig = _fix_phase(V)
    order = np.lexsort((sig, E))
    E, V = E[order], V[:, order]
    if not isinstance(op, DiracGridOperator):
        return Spectrum(E, V.T.copy())
    g = op.grid
    w = op.weights
    psi = (V.T.reshape(count, 2, g.n_r, g.n_theta)) / np.sqrt(w)[None, None]
    spec = Spectrum(E, psi, op.sector, g, w, op.mass, op.options)
    _localize(spec)
    return spec


def _localize(spec: Spectrum):
    w = spec.weights
    dens = (np.abs(spec.eigenvectors) ** 2).sum(axis=1) * w
    r = spec.grid.r[None, :, None]
    spec.mean_r = (dens * r).sum(axis=(1, 2))
    edge = (np.abs(spec.grid.r) >= (1 - EDGE_FRACTION) * spec.grid.params.w)[None, :, None]
    spec.edge_weight = (dens * edge).sum(axis=(1, 2))
    up, dn = spec.eigenvectors[:, 0], spec.eigenvectors[:, 1]
    # <sigma_2> = 2 Re(conj(up) (-i) dn), weighted
    spec.current = 2 * np.real((np.conj(up) * (-1j) * dn * w).sum(axis=(1, 2)))


# ---------------------------------------------------------------- diagnostics


def _same_setup(a: Spectrum, b: Spectrum):
    if a.grid is None or b.grid is None:
        return True
    return a.grid == b.grid and a.options == b.options


def sector_pairing(spec_plus: Spectrum, spec_minus: Spectrum, tol: float = 1e-8) -> dict:
    """Pair the sorted eigenvalue lists of the two sectors and report the largest gap."""
    if not _same_setup(spec_plus, spec_minus):
        raise UsageError("sector spectra were computed on different grids or options")
    if len(spec_plus.eigenvalues) != len(spec_minus.eigenvalues):
        raise UsageError("sector spectra hold different numbers of states")
    gaps = np.abs(np.sort(spec_plus.eigenvalues) - np.sort(spec_minus.eigenvalues))
    gap = float(gaps.max())
    return {
        "pairs": int(len(gaps)),
        "max_gap": gap,
        "tolerance": tol,
        "degenerate": bool(gap <= tol),
        "mass_plus": spec_plus.mass,
        "mass_minus": spec_minus.mass,
    }


def _sign(x, tol=SIGN_TOL):
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) <= tol, 0.0, np.sign(x))


def _corr(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 2 or a.std() == 0 or b.std() == 0:
        return 0.0
    return float(np.corrcoef(a, b)[0, 1])


def energy_levels(spec: Spectrum, index, tol: float = LEVEL_TOL):
    """Group states (sorted by energy) into levels whose energies agree within ``tol``.

    Observables are averaged over each level, which makes them independent
    of the arbitrary basis chosen inside a degenerate eigenspace.
    """
    index = np.asarray(index)
    index = index[np.argsort(spec.eigenvalues[index], kind="stable")]
    levels, cur = [], [index[0]] if len(index) else []
    for a, b in zip(index[:-1], index[1:]):
        if spec.eigenvalues[b] - spec.eigenvalues[a] <= tol:
            cur.append(b)
        else:
            levels.append(cur)
            cur = [b]
    if cur:
        levels.append(cur)
    out = []
    for lv in levels:
        lv = np.array(lv)
        out.append(
            {
                "energy": float(spec.eigenvalues[lv].mean()),
                "mean_r": float(spec.mean_r[lv].mean()),
                "edge_weight": float(spec.edge_weight[lv].mean()),
                "current": float(spec.current[lv].mean()),
                "degeneracy": int(len(lv)),
            }
        )
    return out


def window_indices(spec: Spectrum, states: int, emax: float = None):
    order = np.argsort(np.abs(spec.eigenvalues), kind="stable")[: int(states)]
    if emax is not None:
        order = order[np.abs(spec.eigenvalues[order]) <= emax]
    return np.sort(order)


def spin_hall_diagnostics(spec_plus: Spectrum, spec_minus: Spectrum, window: int = 40, emax: float = None) -> dict:
    """Spin-sorting statistics over the lowest-|E| ``window`` states of each sector.

    Each level of the +1 sector is matched with the -1 level of the same
    current direction (sign of <sigma_2>) and nearest energy.  The headline
    number ``pair_correlation`` is the Pearson correlation of sign<r> across
    these co-propagating pairs; -1 means the two spin species running the
    same way sit on opposite sides of the strip.
    """
    if not _same_setup(spec_plus, spec_minus):
        raise UsageError("sector spectra were computed on different grids or options")
    if spec_plus.mean_r is None or spec_minus.mean_r is None:
        raise UsageError("spin-Hall diagnostics need grid spectra with eigenvectors")
    ip, im = window_indices(spec_plus, window, emax), window_indices(spec_minus, window, emax)
    if len(ip) == 0 or len(im) == 0:
        raise UsageError("energy window selects no states")
    Lp, Lm = energy_levels(spec_plus, ip), energy_levels(spec_minus, im)

    a, b, pairs = [], [], []
    for lv in Lp:
        sj = _sign(lv["current"])
        if sj == 0:
            continue
        cand = [x for x in Lm if _sign(x["current"]) == sj]
        if not cand:
            continue
        q = min(cand, key=lambda x: abs(x["energy"] - lv["energy"]))
        a.append(float(_sign(lv["mean_r"])))
        b.append(float(_sign(q["mean_r"])))
        pairs.append((lv["energy"], q["energy"], lv["mean_r"], q["mean_r"], lv["current"]))

    def rows(spec, idx):
        return [
            {
                "sector": spec.sector,
                "energy": float(spec.eigenvalues[i]),
                "mean_r": float(spec.mean_r[i]),
                "edge_weight": float(spec.edge_weight[i]),
                "current": float(spec.current[i]),
            }
            for i in idx
        ]

    states = rows(spec_plus, ip) + rows(spec_minus, im)
    s3 = np.array([x["sector"] for x in states], dtype=float)
    sr = _sign([x["mean_r"] for x in states])
    sj = _sign([x["current"] for x in states])
    return {
        "window": int(window),
        "emax": emax,
        "states": states,
        "levels_plus": len(Lp),
        "levels_minus": len(Lm),
        "pairs": pairs,
        "n_pairs": len(pairs),
        "pair_correlation": _corr(a, b),
        "sector_position_correlation": _corr(s3, sr),
        "chirality_correlation": _corr(s3 * sr, sj),
    }


def deck_overlap(spec: Spectrum, spin_action: str = "identity"):
    """|<psi| D psi>| for the deck map (r, theta) -> (-r, theta + theta_max/2).

    Only meaningful for odd twist on the double cover.  The closed-form
    potential is not deck-covariant, so the overlaps are a diagnostic
    rather than a parity label.
    """
    g = spec.grid
    if g is None or g.params.twist_k % 2 == 0 or g.n_theta % 2:
        raise UsageError("deck map needs an odd-twist grid with an even number of theta nodes")
    if spin_action not in ("identity", "sigma3"):
        raise UsageError("spin_action must be 'identity' or 'sigma3'")
    v = spec.eigenvectors
    Dv = np.roll(v[:, :, ::-1, :], -g.n_theta // 2, axis=3)
    if spin_action == "sigma3":
        Dv = Dv * np.array([1, -1])[None, :, None, None]
    return np.abs(np.einsum("apij,apij,ij->a", v.conj(), Dv, spec.weights))

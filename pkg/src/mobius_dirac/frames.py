"""Frame rotations: dreibein matrix, Euler-factor composition and spin-1/2 lift.

Rotation matrices here act on Cartesian components and have the frame
vectors as rows, so ``U @ v`` gives the components of ``v`` in the frame.

The adapted triad is left handed, so its dreibein matrix has determinant
-1 and no SU(2) preimage.  Spin lifts and connection coefficients therefore
use the canonical frame (e_r, e_s, e_r x e_s), which shares the tangent rows
and differs at most in the sign of the normal row.
"""
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DomainError
from .surface import FrameTriad, StripParams, _frame, check_domain, normalizer

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


@dataclass(frozen=True)
class AngleFields:
    """Tilt, twist and azimuth angles of the frame.

    ``theta_x = arcsin(k r / N)``, ``theta_y = k theta / 2``, ``theta_z = theta``.
    """

    theta_x: np.ndarray
    theta_y: np.ndarray
    theta_z: np.ndarray


@dataclass(frozen=True)
class SpinRotor:
    """SU(2) preimage of a proper rotation; ``branch`` is +1 when it is the
    preimage with non-negative real trace, else -1."""

    matrix: np.ndarray
    branch: int


def dreibein_matrix(frame: FrameTriad):
    """Rows e_r, e_s, e_n of the given triad (determinant is -1 for the left-handed normal)."""
    return np.stack([frame.e_r, frame.e_s, frame.e_n], axis=-2)


def canonical_rotation(params: StripParams, r, theta):
    """Proper rotation with rows e_r, e_s, e_r x e_s."""
    r, theta = check_domain(params, r, theta)
    f = _frame(params, r, theta)
    return np.stack([f.e_r, f.e_s, -f.e_n], axis=-2)


def angle_fields(params: StripParams, r, theta) -> AngleFields:
    r, theta = check_domain(params, r, theta)
    k = params.twist_k
    N = normalizer(params, r, theta)
    tx = np.arcsin(k * r / N)
    ty = k * theta / 2
    return AngleFields(*np.broadcast_arrays(tx, ty, np.asarray(theta, dtype=float)))


def _rot(c, s, axes):
    c, s = np.broadcast_arrays(np.asarray(c, float), np.asarray(s, float))
    U = np.zeros(c.shape + (3, 3))
    i, j, fixed = axes
    U[..., fixed, fixed] = 1
    U[..., i, i] = c
    U[..., j, j] = c
    U[..., i, j] = s
    U[..., j, i] = -s
    return U


def euler_rotations(params: StripParams, r, theta):
    """The three Euler factors ``(U_z, U_y, U_x)``.

    ``U_z`` turns by theta about z, ``U_y`` by k theta/2 about y (with the
    reference sign, ``-sin`` in the (0, 2) slot) and ``U_x`` by the tilt
    theta_x, with cos theta_x = 2(R + r cos(k theta/2))/N, sin theta_x = k r/N.
    """
    r, theta = check_domain(params, r, theta)
    k = params.twist_k
    N = normalizer(params, r, theta)
    U_z = _rot(np.cos(theta), np.sin(theta), (0, 1, 2))
    U_y = _rot(np.cos(k * theta / 2), -np.sin(k * theta / 2), (0, 2, 1))
    cx = 2 * (params.R + r * np.cos(k * theta / 2)) / N
    sx = k * r / N
    U_x = _rot(cx, sx, (1, 2, 0))
    return U_z, U_y, U_x


def compose_rotation(params: StripParams, r, theta):
    """Product ``U_x @ U_y @ U_z`` of the Euler factors."""
    U_z, U_y, U_x = euler_rotations(params, r, theta)
    return U_x @ U_y @ U_z


def rotation_deviation(params: StripParams, r, theta):
    """Per-point max-entry difference between the composition and the dreibein matrix."""
    r, theta = check_domain(params, r, theta)
    D = dreibein_matrix(_frame(params, r, theta))
    return np.abs(compose_rotation(params, r, theta) - D).max(axis=(-2, -1))


def orthogonality_error(U):
    U = np.asarray(U, dtype=float)
    return np.abs(np.swapaxes(U, -1, -2) @ U - np.eye(3)).max(axis=(-2, -1))


# ---------------------------------------------------------------- spin lift


def su2_to_so3(S):
    """Adjoint projection: ``U_ij = tr(sigma_i S sigma_j S^dagger) / 2``."""
    S = np.asarray(S, dtype=complex)
    Sd = np.conj(np.swapaxes(S, -1, -2))
    left = np.einsum("iab,...bc->...iac", PAULI, S)
    right = np.einsum("jab,...bc->...jac", PAULI, Sd)
    return 0.5 * np.einsum("...iab,...jba->...ij", left, right).real


def _rotor(U):
    # scipy quaternions are (x, y, z, w) with w >= 0 canonical form
    x, y, z, w = Rotation.from_matrix(U).as_quat(canonical=True)
    return w * np.eye(2) - 1j * (x * PAULI[0] + y * PAULI[1] + z * PAULI[2])


def _check_proper(U):
    U = np.asarray(U, dtype=float)
    if U.shape != (3, 3):
        raise DomainError(f"expected a 3x3 rotation, got shape {U.shape}")
    if orthogonality_error(U) > 1e-8:
        raise DomainError("matrix is not orthogonal")
    if np.linalg.det(U) < 0:
        raise DomainError("det(U) = -1: improper rotations have no spin lift")
    return U


def spin_lift(U, previous=None) -> SpinRotor:
    """SU(2) preimage of the proper rotation ``U``.

    Without ``previous`` the preimage with non-negative real trace is
    returned; otherwise the preimage closer (Frobenius) to ``previous``.
    """
    S = _rotor(_check_proper(U))
    branch = 1
    if previous is not None:
        prev = previous.matrix if isinstance(previous, SpinRotor) else np.asarray(previous)
        if np.linalg.norm(S - prev) > np.linalg.norm(S + prev):
            S, branch = -S, -1
    return SpinRotor(S, branch)


def lift_path(Us, seed=None):
    """Branch-tracked lift of a sequence of proper rotations.

    Returns an array of shape (n, 2, 2).  The first rotor is the preimage
    nearest to ``seed`` (identity by default).
    """
    Us = np.asarray(Us, dtype=float)
    out = np.empty((len(Us), 2, 2), dtype=complex)
    prev = np.eye(2, dtype=complex) if seed is None else np.asarray(seed, dtype=complex)
    for i, U in enumerate(Us):
        prev = spin_lift(U, prev).matrix
        out[i] = prev
    return out


def theta_loop_lift(params: StripParams, r: float, n_steps: int = 512):
    """Lift the canonical frame along theta in [0, theta_max] at fixed r.

    Each full turn of the twist angle k theta/2 and of the azimuth theta flips
    the rotor sign once.  Odd twist (theta_max = 4 pi) gives k + 2 turns and
    even twist (theta_max = 2 pi) gives k/2 + 1, so the last rotor is
    (-1)^turns times the first: -1 for the Moebius strip, +1 for k = 2.
    """
    theta = np.linspace(0.0, params.theta_max, int(n_steps) + 1)
    return lift_path(canonical_rotation(params, np.full_like(theta, r), theta))

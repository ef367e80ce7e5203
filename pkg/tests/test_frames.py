import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from mobius_dirac import frames, surface
from mobius_dirac.errors import DomainError
from mobius_dirac.surface import StripParams

P = StripParams()


def test_dreibein_at_origin():
    D = frames.dreibein_matrix(surface.frame(P, 0.0, 0.0))
    np.testing.assert_allclose(D, np.diag([1.0, 1.0, -1.0]), atol=1e-15)


def test_canonical_rotation_at_origin():
    np.testing.assert_allclose(frames.canonical_rotation(P, 0.0, 0.0), np.eye(3), atol=1e-15)


def test_euler_factor_examples():
    Uz, Uy, Ux = frames.euler_rotations(P, 0.3, 0.0)
    np.testing.assert_allclose(Uz, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(Uy, np.eye(3), atol=1e-15)
    _, _, Ux = frames.euler_rotations(P, 0.0, 1.7)
    np.testing.assert_allclose(Ux, np.eye(3), atol=1e-15)


def test_composition_at_origin_and_deviation_report():
    np.testing.assert_allclose(frames.compose_rotation(P, 0.0, 0.0), np.eye(3), atol=1e-15)
    assert frames.rotation_deviation(P, 0.0, 0.0) == pytest.approx(2.0)


def test_angle_fields():
    a = frames.angle_fields(P, 0.5, 1.0)
    N = surface.normalizer(P, 0.5, 1.0)
    assert a.theta_x == pytest.approx(np.arcsin(0.5 / N))
    assert a.theta_y == pytest.approx(0.5)
    assert a.theta_z == pytest.approx(1.0)


def test_spin_lift_identity():
    S = frames.spin_lift(np.eye(3))
    np.testing.assert_allclose(S.matrix, np.eye(2), atol=1e-15)
    assert S.branch == 1


def test_spin_lift_rejects_improper():
    with pytest.raises(DomainError):
        frames.spin_lift(np.diag([1.0, 1.0, -1.0]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_su2_adjoint_round_trip(seed):
    U = Rotation.random(random_state=seed).as_matrix()
    S = frames.spin_lift(U).matrix
    np.testing.assert_allclose(S @ S.conj().T, np.eye(2), atol=1e-14)
    assert np.linalg.det(S) == pytest.approx(1.0)
    np.testing.assert_allclose(frames.su2_to_so3(S), U, atol=1e-12)
    np.testing.assert_allclose(frames.su2_to_so3(-S), U, atol=1e-12)


def test_lift_path_is_continuous():
    t = np.linspace(0, 2 * np.pi, 200)
    Us = Rotation.from_rotvec(np.outer(t, [0, 0, 1])).as_matrix()
    path = frames.lift_path(Us)
    steps = [np.abs(a - b).max() for a, b in zip(path[:-1], path[1:])]
    assert max(steps) < 0.05
    # a 2 pi rotation lifts to -1
    np.testing.assert_allclose(path[-1], -path[0], atol=1e-12)


@pytest.mark.parametrize("k, r, sign", [(1, 0.0, -1), (1, 0.6, -1), (2, 0.0, 1), (3, -0.4, -1)])
def test_theta_loop_endpoint(k, r, sign):
    p = StripParams(twist_k=k)
    lift = frames.theta_loop_lift(p, r)
    np.testing.assert_allclose(lift[-1], sign * lift[0], atol=1e-10)

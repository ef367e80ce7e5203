import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobius_dirac import geometry as geo
from mobius_dirac.errors import InvariantError, RangeError
from mobius_dirac.surface import StripParams

P = StripParams()


def test_metric_examples():
    assert geo.first_fundamental(P, 0.0, 1.234)[0][1, 1] == pytest.approx(16.0)
    g, g_det, g_inv = geo.first_fundamental(P, 1.0, 0.0)
    assert g[1, 1] == pytest.approx(25.25) and g_det == pytest.approx(25.25)
    np.testing.assert_allclose(g @ g_inv, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(geo.first_fundamental(P, 0.5, 2.0)[0][0], [1.0, 0.0])


def test_second_fundamental_examples():
    h = geo.second_fundamental(P, 0.0, 0.7)
    assert h[0, 1] == pytest.approx(0.5) and h[1, 0] == pytest.approx(0.5)
    assert geo.second_fundamental(P, 0.0, 0.0)[1, 1] == pytest.approx(0.0, abs=1e-15)
    assert h[0, 0] == 0.0


def test_second_fundamental_convention_flips_sign(rng):
    r, t = rng.uniform(-1, 1, 20), rng.uniform(0, 4 * np.pi, 20)
    np.testing.assert_allclose(geo.second_fundamental(P, r, t, "left"), -geo.second_fundamental(P, r, t, "right"))


def test_weingarten_examples():
    a = geo.weingarten_closed(P, 0.0, np.pi)
    assert a[1, 0] == pytest.approx(-0.5)
    assert a[0, 1] == pytest.approx(-0.03125)
    assert a[1, 1] == pytest.approx(-0.25)


def test_weingarten_rejects_singular_metric():
    with pytest.raises(InvariantError):
        geo.weingarten(np.array([[1.0, 0.0], [0.0, 0.0]]), np.eye(2))
    with pytest.raises(InvariantError):
        geo.weingarten(np.array([[1.0, 0.0], [0.0, -1.0]]), np.eye(2))


def test_curvature_examples():
    M, K = geo.curvatures(geo.weingarten_closed(P, 0.0, 0.0))
    assert M == pytest.approx(0.0, abs=1e-15)
    M, K = geo.curvatures(geo.weingarten_closed(P, 0.0, np.pi))
    assert K == pytest.approx(-0.015625)
    assert abs(M) == pytest.approx(0.125)
    assert M == pytest.approx(-0.125)  # half the trace
    assert geo.mean_curvature_flipped(P, 0.0, np.pi) == pytest.approx(0.125)


def test_rescaling_examples():
    alpha = geo.weingarten_closed(P, 0.0, np.pi)
    f, fp, fm = geo.rescale(alpha, 0.0)
    assert (f, fp, fm) == (1.0, 1.0, 1.0)
    f, fp, fm = geo.rescale(alpha, 0.1)
    assert f == pytest.approx(0.97484375, rel=1e-14)
    assert fp == pytest.approx(np.sqrt(f), rel=1e-3)
    assert fm == pytest.approx(1 / np.sqrt(f), rel=1e-3)
    with pytest.raises(RangeError):
        geo.rescale(alpha, 4.0)


def test_metric3d_reduces_to_g_at_zero_offset(rng):
    for r, t in zip(rng.uniform(-1, 1, 10), rng.uniform(0, 4 * np.pi, 10)):
        ff = geo.fundamental_forms(P, r, t)
        G = geo.metric3d(ff.g, ff.alpha, 0.0).G
        np.testing.assert_array_equal(G[:2, :2], ff.g)
        assert G[2, 2] == 1.0 and G[0, 2] == 0.0


def test_q3_bound_and_check():
    assert geo.q3_bound(P, 0.0, 0.0) == pytest.approx(4.0)
    geo.check_q3(P, 0.0, 0.0, 3.9)
    with pytest.raises(RangeError):
        geo.check_q3(P, 0.0, 0.0, 4.0)
    with pytest.raises(RangeError):
        geo.check_q3(P, 0.0, 0.0, float("nan"))


def test_oracles_agree_at_edges():
    for r in (-1.0, 1.0):
        ff = geo.fundamental_forms(P, r, 1.0)
        assert np.abs(geo.numeric_first_fundamental(P, r, 1.0) - ff.g).max() < 1e-8
        assert np.abs(geo.numeric_second_fundamental(P, r, 1.0) - ff.h).max() < 1e-6


def test_left_convention_oracle(rng):
    r, t = 0.3, 2.2
    assert np.abs(geo.numeric_second_fundamental(P, r, t, "left") - geo.second_fundamental(P, r, t, "left")).max() < 1e-6


@settings(max_examples=40, deadline=None)
@given(r=st.floats(-1, 1), t=st.floats(0, 4 * np.pi), k=st.integers(1, 3))
def test_general_twist_closed_forms_match_oracles(r, t, k):
    p = StripParams(4.0, 1.0, k)
    t = min(t, p.theta_max)
    ff = geo.fundamental_forms(p, r, t)
    assert np.abs(geo.numeric_first_fundamental(p, r, t) - ff.g).max() < 1e-8
    assert np.abs(geo.numeric_weingarten(p, r, t) - ff.alpha).max() < 1e-6
    assert ff.K == pytest.approx(geo.gaussian_curvature_closed(p, r, t), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(-1, 1), t=st.floats(0, 4 * np.pi), frac=st.floats(-0.99, 0.99))
def test_det_G_identity(r, t, frac):
    ff = geo.fundamental_forms(P, r, t)
    q = frac * float(geo.q3_bound(P, r, t))
    f, _, _ = geo.rescale(ff.alpha, q)
    G = geo.metric3d(ff.g, ff.alpha, q)
    assert G.G_det == pytest.approx(f**2 * ff.g_det, rel=1e-10)


def test_vectorized_forms_match_pointwise(rng):
    r, t = rng.uniform(-1, 1, 7), rng.uniform(0, 4 * np.pi, 7)
    ff = geo.fundamental_forms(P, r, t)
    for i in range(7):
        one = geo.fundamental_forms(P, r[i], t[i])
        np.testing.assert_allclose(ff.alpha[i], one.alpha, rtol=1e-14, atol=1e-16)
        assert ff.K[i] == pytest.approx(one.K, rel=1e-14)

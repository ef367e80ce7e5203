import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobius_dirac import surface
from mobius_dirac.errors import DomainError, RangeError
from mobius_dirac.surface import StripParams

P = StripParams()


def test_params_defaults_and_period():
    assert (P.R, P.w, P.twist_k) == (4.0, 1.0, 1)
    assert P.theta_max == pytest.approx(4 * np.pi)
    assert StripParams(twist_k=2).theta_max == pytest.approx(2 * np.pi)
    assert not P.orientable and StripParams(twist_k=2).orientable


@pytest.mark.parametrize("kw", [dict(R=0.0), dict(R=-1.0), dict(w=0.0), dict(w=4.0), dict(twist_k=0), dict(R=float("nan"))])
def test_params_rejects_bad_values(kw):
    with pytest.raises(DomainError):
        StripParams(**kw)


@pytest.mark.parametrize(
    "r, theta, expected",
    [(0.0, 0.0, (4, 0, 0)), (1.0, 0.0, (5, 0, 0)), (1.0, 2 * np.pi, (3, 0, 0))],
)
def test_embed_examples(r, theta, expected):
    np.testing.assert_allclose(surface.embed(P, r, theta), expected, atol=1e-14)


def test_embed_domain_error_names_argument():
    with pytest.raises(DomainError, match="r"):
        surface.embed(P, 1.5, 0.0)
    with pytest.raises(DomainError, match="theta"):
        surface.embed(P, 0.0, 5 * np.pi)


def test_frame_at_origin():
    f = surface.frame(P, 0.0, 0.0)
    np.testing.assert_allclose(f.e_r, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(f.e_s, [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(f.e_n, [0, 0, -1], atol=1e-15)
    assert f.N == pytest.approx(8.0)


def test_normalizer_midline_is_2R():
    t = np.linspace(0, P.theta_max, 17)
    np.testing.assert_allclose(surface.normalizer(P, np.zeros_like(t), t), 8.0, rtol=1e-15)


def test_closed_triad_matches_component_form(rng):
    r, t = rng.uniform(-1, 1, 200), rng.uniform(0, 4 * np.pi, 200)
    a, b = surface.frame(P, r, t), surface.reference_triad_k1(P.R, r, t)
    for x, y in ((a.e_r, b.e_r), (a.e_s, b.e_s), (a.e_n, b.e_n)):
        np.testing.assert_allclose(x, y, atol=1e-14)


def test_normal_conventions_are_opposite(rng):
    r, t = rng.uniform(-1, 1, 50), rng.uniform(0, 4 * np.pi, 50)
    np.testing.assert_allclose(surface.normal(P, r, t, "right"), -surface.normal(P, r, t, "left"), atol=1e-15)
    with pytest.raises(DomainError):
        surface.normal(P, 0.0, 0.0, "up")


def test_embed_offset_examples():
    np.testing.assert_allclose(surface.embed_offset(P, 0.0, 0.0, 0.0), surface.embed(P, 0.0, 0.0))
    np.testing.assert_allclose(surface.embed_offset(P, 0.0, 0.0, 0.1, convention="left"), [4, 0, -0.1], atol=1e-15)


def test_embed_offset_at_rescaling_root_is_range_error():
    # at (0, pi): f = 1 - 0.25 q3 - 0.015625 q3^2 has its positive root near q3 = 3.3
    with pytest.raises(RangeError):
        surface.embed_offset(P, 0.0, np.pi, 3.3)
    with pytest.raises(RangeError):
        surface.embed_offset(P, 0.0, 0.0, 8.0)


def test_numeric_partials_examples():
    d = surface.numeric_partials(P, 0.0, 0.0, step=1e-4)
    np.testing.assert_allclose(d.d_r, [1, 0, 0], atol=1e-8)
    N = surface.normalizer(P, 0.3, 1.1)
    d = surface.numeric_partials(P, 0.3, 1.1)
    assert d.d_theta @ d.d_theta == pytest.approx(N**2 / 4, rel=1e-8)
    with pytest.raises(DomainError):
        surface.numeric_partials(P, 0.0, 0.0, step=0.0)


@settings(max_examples=60, deadline=None)
@given(
    r=st.floats(-1, 1),
    t=st.floats(0, 4 * np.pi),
    k=st.integers(1, 4),
    R=st.floats(1.5, 10),
)
def test_frame_orthonormal_and_left_handed(r, t, k, R):
    p = StripParams(R, 1.0, k)
    t = min(t, p.theta_max)
    f = surface.frame(p, r, t)
    E = np.stack([f.e_r, f.e_s, f.e_n])
    np.testing.assert_allclose(E @ E.T, np.eye(3), atol=1e-12)
    assert f.triple_product() == pytest.approx(-1.0, abs=1e-12)
    c = np.cos(k * t / 2)
    assert f.N**2 - (k * r) ** 2 == pytest.approx(4 * (R + r * c) ** 2, rel=1e-12)


def test_normal_flips_after_one_turn_for_odd_twist():
    t = np.linspace(0, 2 * np.pi, 9)
    z = np.zeros_like(t)
    for k, sign in ((1, -1), (3, -1), (2, 1)):
        p = StripParams(twist_k=k)
        a = surface.frame(p, z, t).e_n
        b = surface.frame(p, z, np.mod(t + 2 * np.pi, p.theta_max)).e_n
        np.testing.assert_allclose(np.einsum("ij,ij->i", a, b), sign, atol=1e-12)

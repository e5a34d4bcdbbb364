import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.stats import special_ortho_group

from willmore_tori import spectral
from willmore_tori.corpus import curve_corpus, perturbed_circle
from willmore_tori.errors import DegenerateFrame, NonRegular, NotOnSphere, NotUnitSpeed
from willmore_tori.sphere_curves import (ClosedCurve, arclength_reparametrize, bending_energy, bending_energy_bound,
                                         ejiri_curve, frenet, great_circle, small_circle, total_space_curvature)


# -- an S^2 curve with an independent symbolic geodesic-curvature oracle -----

_t = sp.symbols("t", real=True)
_p = sp.Matrix([sp.cos(_t), sp.sin(_t), sp.Rational(2, 5) + sp.Rational(3, 10) * sp.cos(2 * _t) + sp.sin(_t) / 5])
_g = _p / sp.sqrt(_p.dot(_p))
_g1 = _g.diff(_t)
_g2 = _g1.diff(_t)
_speed = sp.sqrt(_g1.dot(_g1))
_kg = sp.Matrix.hstack(_g, _g1, _g2).det() / _speed**3
SPEED = sp.lambdify(_t, _speed, "numpy")
KG = sp.lambdify(_t, _kg, "numpy")
POS = sp.lambdify(_t, _g.T, "numpy")


def wavy(n):
    return ClosedCurve(3, 2 * np.pi, lambda t: np.array([POS(x)[0] for x in t], dtype=float).reshape(len(t), 3), n,
                       name="wavy")


def oracle_integrals():
    kw = dict(limit=400, epsabs=1e-13, epsrel=1e-13)
    L = quad(SPEED, 0, 2 * np.pi, **kw)[0]
    I1 = quad(lambda t: KG(t) * SPEED(t), 0, 2 * np.pi, **kw)[0]
    I2 = quad(lambda t: KG(t) ** 2 * SPEED(t), 0, 2 * np.pi, **kw)[0]
    return L, I1, I2


def test_geodesic_curvature_matches_symbolic_oracle():
    L, I1, I2 = oracle_integrals()
    c = arclength_reparametrize(wavy(128))
    fr = frenet(c)
    assert c.period == pytest.approx(L, rel=1e-12)
    # the last curvature is signed: in S^2 it is the geodesic curvature
    assert spectral.trapezoid(fr.k1, c.period) == pytest.approx(I1, abs=1e-10)
    assert spectral.trapezoid(fr.k1**2, c.period) == pytest.approx(I2, rel=1e-10)


def test_spectral_convergence_of_curvature():
    errs = []
    for n in (16, 32, 64):
        c = wavy(n)
        g, g1, g2 = c.derivatives(2)
        kg = np.linalg.det(np.stack([g, g1, g2], axis=2)) / np.linalg.norm(g1, axis=1) ** 3
        errs.append(np.max(np.abs(kg - KG(c.nodes))))
    assert errs[0] / errs[1] >= 4 and errs[1] / errs[2] >= 4
    assert errs[2] < 1e-9


def test_gauss_bonnet_for_spherical_cap():
    # int k_g ds = 2 pi - enclosed area; for a small circle of curvature k the cap area is 2 pi (1 - h)
    for k in (0.3, 1.0, 2.5):
        fr = frenet(small_circle(k))
        h = k / np.sqrt(1 + k * k)
        assert spectral.trapezoid(fr.k1, fr.length) == pytest.approx(2 * np.pi - 2 * np.pi * (1 - h), rel=1e-12)


# -- named curves -------------------------------------------------------------


@pytest.mark.parametrize("k", [0.0, 0.25, 1.0, np.sqrt(2), 3.0])
def test_small_circle_curvature_and_length(k):
    c = great_circle(3) if k == 0 else small_circle(k)
    fr = frenet(c)
    assert np.allclose(fr.k1, k, atol=1e-10)
    assert c.period == pytest.approx(2 * np.pi / np.sqrt(1 + k * k), rel=1e-15)


def test_reversed_circle_has_negative_signed_curvature():
    c = small_circle(1.5)
    rev = ClosedCurve(3, c.period, lambda t: c.position(-np.asarray(t)), c.sample_count)
    assert np.allclose(frenet(rev).k1, -1.5, atol=1e-10)


def test_ejiri_curve():
    c = ejiri_curve()
    fr = frenet(c)
    assert c.period == pytest.approx(2 * np.pi / np.sqrt(3), rel=1e-15)
    assert np.allclose(fr.k1, np.sqrt(2), atol=1e-10)
    s = c.nodes
    expect = np.stack([np.cos(np.sqrt(3) * s), np.sin(np.sqrt(3) * s), np.full_like(s, np.sqrt(2))], 1) / np.sqrt(3)
    assert np.allclose(c.samples, expect, atol=1e-15)


def test_circle_in_s3_has_zero_torsion():
    fr = frenet(small_circle(1.2, ambient_dim=4))
    assert np.allclose(fr.k1, 1.2, atol=1e-10)
    assert fr.degenerate_from == 2
    assert np.all(fr.curvature_or_zero(2) == 0)


def test_great_circle_degenerates_at_first_curvature():
    fr = frenet(great_circle(4))
    assert fr.degenerate_from == 1
    assert np.all(fr.k1 == 0) and np.all(fr.curvature_or_zero(2) == 0)
    # in S^1 there is no curvature at all
    assert np.all(frenet(great_circle(2)).k1 == 0)


def test_homogeneous_type_curve_in_s3_has_constant_curvatures():
    from willmore_tori.elastica import homogeneous_curve

    hc = homogeneous_curve(0.6, 0.8, 2.0)
    fr = frenet(hc.curve)
    assert np.allclose(fr.k1**2, hc.k1_squared, atol=1e-9)
    assert np.allclose(fr.curvature_or_zero(2) ** 2, hc.k2_squared, atol=1e-8)
    assert fr.frenet_residual() < 1e-9


# -- frames -------------------------------------------------------------------


def test_frames_orthonormal_on_corpus():
    for item in curve_corpus():
        fr = frenet(item.curve)
        assert fr.orthonormality_error() < 1e-8
        assert fr.frenet_residual() < 1e-6


def test_frame_orientation_positive():
    for item in curve_corpus()[30:35]:
        fr = frenet(item.curve)
        M = np.stack((fr.gamma,) + fr.frame, axis=1)
        assert np.allclose(np.linalg.det(M), 1.0, atol=1e-10)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_curvatures_invariant_under_rotation(seed):
    rng = np.random.default_rng(seed)
    c = perturbed_circle(rng, 4, 1.3, 0.05, sample_count=128)
    Q = special_ortho_group.rvs(4, random_state=seed % 2**31)
    rot = ClosedCurve(4, c.period, lambda t: c.position(t) @ Q.T, c.sample_count)
    a, b = frenet(c), frenet(rot)
    assert np.allclose(a.k1, b.k1, atol=1e-9)
    assert np.allclose(a.curvature_or_zero(2), b.curvature_or_zero(2), atol=1e-7)


def test_vanishing_first_curvature_blocks_torsion():
    # a curve wiggling about the equator has k_g changing sign; in R^4 its k1 = |k_g| touches zero
    def pos(t):
        p = np.stack([np.cos(t), np.sin(t), 0.2 * np.sin(2 * t), np.zeros_like(t)], 1)
        return p / np.linalg.norm(p, axis=1)[:, None]

    c = arclength_reparametrize(ClosedCurve(4, 2 * np.pi, pos, 256))
    with pytest.raises(DegenerateFrame):
        frenet(c)


# -- errors and reparametrization ---------------------------------------------


def test_off_sphere_rejected():
    with pytest.raises(NotOnSphere):
        ClosedCurve(3, 2 * np.pi, lambda t: 1.01 * great_circle(3).position(t))


def test_frenet_requires_unit_speed():
    fast = ClosedCurve(3, np.pi, lambda t: great_circle(3).position(2 * np.asarray(t)))
    with pytest.raises(NotUnitSpeed):
        frenet(fast)
    assert np.allclose(frenet(arclength_reparametrize(fast)).k1, 0, atol=1e-10)


def test_stationary_point_is_non_regular():
    def pos(t):
        phi = t - np.sin(t)
        return np.stack([np.cos(phi), np.sin(phi), np.zeros_like(t)], 1)

    with pytest.raises(NonRegular):
        arclength_reparametrize(ClosedCurve(3, 2 * np.pi, pos, 64))


def test_reparametrization_is_unit_speed_and_traces_same_curve():
    raw = wavy(128)
    c = arclength_reparametrize(raw)
    assert np.max(np.abs(c.speed() - 1)) < 1e-10
    # every reparametrized point lies on the original curve: its angle recovers the raw parameter
    t = np.arctan2(c.samples[:, 1], c.samples[:, 0])
    assert np.max(np.abs(c.samples - raw.position(t))) < 1e-13


def test_from_samples_round_trip():
    c = small_circle(0.7, sample_count=64)
    d = ClosedCurve.from_samples(c.samples, c.period)
    assert np.array_equal(d.samples, c.samples)
    x = np.array([0.123, 1.7])
    assert np.allclose(d.position(x), c.position(x), atol=1e-14)
    assert np.allclose(c.resampled(32).samples, c.samples[::2], atol=0)


# -- functionals ----------------------------------------------------------------


@pytest.mark.parametrize("k", [0.25, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("a0", [2.0, 3.0, 4.0, 6.0])
def test_bending_energy_of_circles(k, a0):
    expect = 2 * np.pi * (k * k + a0) / np.sqrt(1 + k * k)
    assert bending_energy(small_circle(k), a0) == pytest.approx(expect, rel=1e-12)


def test_bending_bound_attained_by_its_circle():
    for a0 in (2.0, 3.0, 4.0, 6.0):
        k = np.sqrt(a0 - 2)
        c = great_circle(3) if k == 0 else small_circle(k)
        assert bending_energy(c, a0) == pytest.approx(bending_energy_bound(a0), abs=1e-10)
    assert bending_energy_bound(4.0) == pytest.approx(4 * np.pi * np.sqrt(3), rel=1e-15)


@given(st.integers(0, 2**32 - 1), st.floats(0.02, 0.15), st.sampled_from([2.0, 3.0, 4.0, 6.0]))
@settings(max_examples=20, deadline=None)
def test_bending_bound_on_random_curves(seed, amp, a0):
    c = perturbed_circle(np.random.default_rng(seed), 3, 1.0, amp, sample_count=128)
    assert bending_energy(c, a0) >= bending_energy_bound(a0) - 1e-6
    assert total_space_curvature(c) >= 2 * np.pi


def test_total_curvature_of_circles():
    assert total_space_curvature(great_circle(3)) == pytest.approx(2 * np.pi, rel=1e-14)
    # a small circle of radius r in R^3 has total curvature 2 pi
    assert total_space_curvature(small_circle(1.7)) == pytest.approx(2 * np.pi, rel=1e-12)

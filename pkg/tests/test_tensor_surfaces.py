import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from willmore_tori.corpus import torus_corpus
from willmore_tori.errors import NotOnSphere, NotUnitSpeed
from willmore_tori.families import FamilySpec, make_surface
from willmore_tori.sphere_curves import ClosedCurve, great_circle, small_circle
from willmore_tori.tensor_surfaces import (canonical_lift_derivatives, build_tensor_torus, conformal_data, hopf_density,
                                           kron, lift_vector, lorentz, numerical_lift_derivatives, schwarzian)

vec = lambda n: arrays(np.float64, n, elements=st.floats(-10, 10))


def test_kron_ordering():
    assert kron([1, 0], [0, 1]).tolist() == [0, 1, 0, 0]
    assert kron([1, 2], [3, 4, 5]).tolist() == [3, 4, 5, 6, 8, 10]


@given(vec(3), vec(3), vec(4), vec(4))
@settings(max_examples=200)
def test_inner_product_identity(f, g, fh, gh):
    lhs = np.dot(kron(f, fh), kron(g, gh))
    rhs = np.dot(f, g) * np.dot(fh, gh)
    scale = max(1.0, np.linalg.norm(f) * np.linalg.norm(g) * np.linalg.norm(fh) * np.linalg.norm(gh))
    assert abs(lhs - rhs) <= 1e-13 * scale


def test_inner_product_identity_1000_quadruples(rng):
    worst = 0.0
    for _ in range(1000):
        f, g = rng.normal(size=(2, 3))
        fh, gh = rng.normal(size=(2, 4))
        worst = max(worst, abs(np.dot(kron(f, fh), kron(g, gh)) - np.dot(f, g) * np.dot(fh, gh)))
    assert worst < 1e-13


@given(vec(3), vec(2), st.floats(-5, 5))
def test_bilinearity(x, xh, alpha):
    assert np.allclose(kron(alpha * x, xh), alpha * kron(x, xh), rtol=1e-14, atol=1e-12)
    assert np.allclose(kron(x, alpha * xh), alpha * kron(x, xh), rtol=1e-14, atol=1e-12)


def test_kron_broadcasts_to_grid():
    A = np.arange(6.0).reshape(3, 2)
    B = np.arange(8.0).reshape(4, 2)
    G = kron(A[:, None, :], B[None, :, :])
    assert G.shape == (3, 4, 4)
    assert np.array_equal(G[2, 1], kron(A[2], B[1]))


def test_lorentz_form_signature():
    a = np.array([2.0, 1.0, 3.0])
    b = np.array([1.0, 4.0, -1.0])
    assert lorentz(a, b) == -2 + 4 - 3
    Y = lift_vector(np.array([0.6, 0.8]), 1.0)
    assert lorentz(Y, Y) == pytest.approx(0.0, abs=1e-15)


# -- tori -------------------------------------------------------------------


def test_ejiri_torus_matches_explicit_immersion(ejiri):
    s, sh = ejiri.left.nodes, ejiri.right.nodes
    S, H = np.meshgrid(s, sh, indexing="ij")
    r3 = np.sqrt(3)
    expect = np.stack([np.cos(H) * np.cos(r3 * S), np.sin(H) * np.cos(r3 * S), np.cos(H) * np.sin(r3 * S),
                       np.sin(H) * np.sin(r3 * S), np.sqrt(2) * np.cos(H), np.sqrt(2) * np.sin(H)], -1) / r3
    assert np.allclose(ejiri.samples, expect, atol=1e-15)


def test_clifford_double_cover(clifford_double):
    y = clifford_double.samples
    n = y.shape[0]
    # y(s + pi, t + pi) = y(s, t): every point is covered twice
    assert np.allclose(np.roll(np.roll(y, n // 2, 0), n // 2, 1), y, atol=1e-15)
    # in rotated coordinates the image is |z1|^2 = |z2|^2 = 1/2
    z1 = (y[..., 0] + y[..., 3]) ** 2 + (y[..., 2] - y[..., 1]) ** 2
    z2 = (y[..., 0] - y[..., 3]) ** 2 + (y[..., 1] + y[..., 2]) ** 2
    assert np.allclose(z1 / 2, 0.5) and np.allclose(z2 / 2, 0.5)


def test_torus_lies_on_sphere_and_is_conformal():
    for t in torus_corpus():
        assert np.max(np.abs(np.linalg.norm(t.samples, axis=-1) - 1)) < 1e-12
        assert t.conformality_error() < 1e-9


def test_flat_example_family_is_conformal():
    t = make_surface(FamilySpec("inf_family"), 0.4)
    assert t.conformality_error() < 1e-12
    assert t.ambient_dim == 9


def test_build_rejects_bad_factors():
    fast = ClosedCurve(2, np.pi, lambda t: great_circle(2).position(2 * np.asarray(t)))
    with pytest.raises(NotUnitSpeed):
        build_tensor_torus(fast, great_circle(2))
    loose = ClosedCurve(2, 2 * np.pi, lambda t: (1 + 1e-6) * great_circle(2).position(t), sphere_tol=1e-3)
    with pytest.raises(NotOnSphere):
        build_tensor_torus(loose, great_circle(2))


# -- canonical lift ---------------------------------------------------------


def _normalizations(d):
    return (np.max(np.abs(lorentz(d.Y, d.Y))), np.max(np.abs(lorentz(d.Y_z, d.Y_z))),
            np.max(np.abs(lorentz(d.Y_z, d.Y_zbar) - 0.5)))


@pytest.mark.parametrize("index", [0, 1, 5, 9, 12])
def test_lift_normalization(index):
    t = torus_corpus()[index]
    assert max(_normalizations(canonical_lift_derivatives(t))) < 1e-9


def test_clifford_lift_at_origin(clifford_double):
    d = canonical_lift_derivatives(clifford_double, 0, 0)
    y0 = clifford_double.samples[0, 0]
    assert np.allclose(d.Y_zzbar, lift_vector(-0.5 * y0), atol=1e-12)


def test_ejiri_schwarzian_from_lift(ejiri):
    d = canonical_lift_derivatives(ejiri)
    c = 4 * lorentz(d.Y_zz, d.Y_zzbar)
    assert np.allclose(c, 0.5, atol=1e-12)


@pytest.mark.parametrize("index", [0, 2, 5, 8, 13])
def test_analytic_lift_matches_numerical_differentiation(index):
    t = torus_corpus()[index]
    a, n = canonical_lift_derivatives(t), numerical_lift_derivatives(t)
    for name in ("Y", "Y_z", "Y_zbar", "Y_zz", "Y_zzbar"):
        assert np.max(np.abs(getattr(a, name) - getattr(n, name))) < 1e-8, name


def test_schwarzian_matches_lift_on_corpus():
    for t in torus_corpus()[5:10]:
        d = canonical_lift_derivatives(t)
        assert np.allclose(4 * lorentz(d.Y_zz, d.Y_zzbar), schwarzian(t), atol=1e-10)


# -- conformal data -----------------------------------------------------------


def test_clifford_conformal_data(clifford_double):
    assert np.all(schwarzian(clifford_double) == 0)
    assert np.allclose(hopf_density(clifford_double), 0.25, atol=0)


def test_ejiri_conformal_data(ejiri):
    cd = conformal_data(ejiri)
    assert np.allclose(cd.schwarzian, 0.5, atol=1e-12)
    assert np.allclose(cd.hopf_density, 3 / 8, atol=1e-12)
    assert np.allclose(cd.density_from_coefficients(), cd.hopf_density, atol=1e-10)
    g00 = cd.hopf_coefficients[2]
    assert np.all(g00.real == 0) and np.all(g00.imag == -0.5)


@pytest.mark.parametrize("a", [0.3, 0.6, 0.9])
def test_flat_family_hopf_density(a):
    t = make_surface(FamilySpec("inf_family"), a)
    b = np.sqrt(1 - a * a)
    assert np.allclose(hopf_density(t), 0.25 + 2 * (b / a) ** 2 / 16, atol=1e-10)


def test_density_from_coefficients_on_corpus():
    for t in torus_corpus():
        cd = conformal_data(t)
        assert np.max(np.abs(cd.density_from_coefficients() - cd.hopf_density)) < 1e-10
        assert np.min(cd.hopf_density) >= 0.25


@pytest.mark.parametrize("index", [0, 3, 6, 11])
def test_hopf_vector_is_normal_part_of_Yzz(index):
    # Y_zz = mu Y + kappa with kappa orthogonal to Y, Y_z, Y_zbar
    t = torus_corpus()[index]
    cd = conformal_data(t)
    d = canonical_lift_derivatives(t)
    kappa = cd.hopf_vector()
    for v in (d.Y, d.Y_z, d.Y_zbar):
        assert np.max(np.abs(lorentz(kappa, v))) < 1e-12
    rest = d.Y_zz - kappa
    mu = rest[..., 0] / d.Y[..., 0]
    assert np.max(np.abs(rest - mu[..., None] * d.Y)) < 1e-12
    assert np.allclose(lorentz(kappa, np.conj(kappa)).real, cd.hopf_density, atol=1e-12)


def test_homogeneous_factor_gives_constant_density():
    t = build_tensor_torus(small_circle(0.8), torus_corpus()[7].right)
    h = hopf_density(t)
    # constant along s because the left factor is a circle
    assert np.allclose(h, h[:1, :], atol=1e-12)

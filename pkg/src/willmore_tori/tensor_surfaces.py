"""Tensor-product tori ``y(s, t) = gamma(s) (x) gamma_hat(t)`` and their conformal data.

The canonical lift ``Y = (1, y)`` lives in Lorentzian space with signature
``(-, +, ..., +)``; use :func:`lorentz` for every inner product of lifted
vectors.  Complex-valued vectors (``Y_z``, ``Y_zz``, the Hopf differential)
are numpy complex arrays, and :func:`lorentz` is complex *bilinear*; the
Hermitian pairing ``<A, conj(B)>`` has to be formed explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotOnSphere, NotUnitSpeed
from .sphere_curves import (
    UNIT_SPEED_TOL,
    ClosedCurve,
    FrenetApparatus,
    frenet,
)


def kron(x, x_hat):
    """Tensor product ``(x_1 xh_1, .., x_1 xh_m, x_2 xh_1, ..)``, row-major.

    Leading axes broadcast like numpy, so ``kron(A[:, None, :], B[None, :, :])``
    builds the full product grid.
    """
    x = np.asarray(x)
    x_hat = np.asarray(x_hat)
    prod = x[..., :, None] * x_hat[..., None, :]
    return prod.reshape(prod.shape[:-2] + (x.shape[-1] * x_hat.shape[-1],))


def lorentz(a, b):
    """Bilinear form ``-a_0 b_0 + sum a_i b_i`` over the last axis."""
    a = np.asarray(a)
    b = np.asarray(b)
    return -a[..., 0] * b[..., 0] + np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def lift_vector(v, timelike=0.0):
    """Prepend a time component: ``(timelike, v)``."""
    v = np.asarray(v)
    t = np.broadcast_to(np.asarray(timelike, dtype=v.dtype), v.shape[:-1] + (1,))
    return np.concatenate([t, v], axis=-1)


@dataclass(frozen=True, eq=False)
class TensorTorus:
    """Torus ``gamma (x) gamma_hat`` built from two unit-speed closed curves.

    Frenet data for both factors are cached (first curvature only; the
    elastica classifier computes higher ones itself).  The torus grid is the
    product of the factor grids.
    """

    left: ClosedCurve
    right: ClosedCurve
    left_frenet: FrenetApparatus
    right_frenet: FrenetApparatus
    name: str = ""

    @property
    def ambient_dim(self) -> int:
        return self.left.ambient_dim * self.right.ambient_dim

    @property
    def periods(self) -> tuple[float, float]:
        return (self.left.period, self.right.period)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.left.sample_count, self.right.sample_count)

    def immersion(self, s, s_hat):
        """``y`` on the product of parameter arrays ``s`` and ``s_hat``; shape ``(len(s), len(s_hat), D)``."""
        g = self.left.position(np.atleast_1d(s))
        gh = self.right.position(np.atleast_1d(s_hat))
        return kron(g[:, None, :], gh[None, :, :])

    @cached_property
    def samples(self) -> np.ndarray:
        return kron(self.left_frenet.gamma[:, None, :], self.right_frenet.gamma[None, :, :])

    def conformality_error(self) -> float:
        """Max of ``| |y_s|^2 - 1 |``, ``| |y_t|^2 - 1 |`` and ``|<y_s, y_t>|`` over the grid."""
        g, b = self.left_frenet.gamma, self.left_frenet.frame[0]
        gh, bh = self.right_frenet.gamma, self.right_frenet.frame[0]
        ys = kron(b[:, None, :], gh[None, :, :])
        yt = kron(g[:, None, :], bh[None, :, :])
        return float(
            max(
                np.max(np.abs(np.sum(ys * ys, -1) - 1)),
                np.max(np.abs(np.sum(yt * yt, -1) - 1)),
                np.max(np.abs(np.sum(ys * yt, -1))),
            )
        )


def build_tensor_torus(left: ClosedCurve, right: ClosedCurve, name: str = "", sphere_tol: float = 1e-10) -> TensorTorus:
    """Tensor torus from two unit-speed spherical curves.

    Raises :class:`NotUnitSpeed` or :class:`NotOnSphere` (beyond ``sphere_tol``,
    whatever the curves' own tolerance) for unsuitable factors.
    """
    for c in (left, right):
        dev = np.max(np.abs(np.linalg.norm(c.samples, axis=1) - 1.0))
        if dev > sphere_tol:
            raise NotOnSphere(f"factor {c.name or '<anon>'} off the sphere by {dev:.3e}")
        sdev = np.max(np.abs(c.speed() - 1.0))
        if sdev > UNIT_SPEED_TOL:
            raise NotUnitSpeed(f"factor {c.name or '<anon>'} speed deviates by {sdev:.3e}")
    return TensorTorus(left, right, frenet(left, max_order=1), frenet(right, max_order=1), name)


def _k1_beta1(fr: FrenetApparatus) -> np.ndarray:
    # gamma'' + gamma = k1 beta_1 is well defined even where k1 vanishes
    if fr.frame[1:] and len(fr.curvatures) >= 1:
        return fr.curvatures[0][:, None] * fr.frame[1]
    return np.zeros_like(fr.gamma)


@dataclass(frozen=True, eq=False)
class LiftDerivatives:
    """Canonical lift and its derivatives in ``z = s + i s_hat`` on the torus grid."""

    Y: np.ndarray
    Y_z: np.ndarray
    Y_zbar: np.ndarray
    Y_zz: np.ndarray
    Y_zzbar: np.ndarray


def canonical_lift_derivatives(torus: TensorTorus, i=None, j=None) -> LiftDerivatives:
    """Closed-form ``Y, Y_z, Y_zbar, Y_zz, Y_zzbar`` from the factor Frenet frames.

    With ``i``/``j`` (node indices or index arrays) only those nodes are
    returned; by default the whole product grid.
    """
    fl, fr = torus.left_frenet, torus.right_frenet
    sl = slice(None) if i is None else i
    sr = slice(None) if j is None else j
    g, b0, kb = fl.gamma[sl], fl.frame[0][sl], _k1_beta1(fl)[sl]
    gh, bh0, kbh = fr.gamma[sr], fr.frame[0][sr], _k1_beta1(fr)[sr]

    def t(a, b):
        a = np.atleast_2d(a)
        b = np.atleast_2d(b)
        return kron(a[:, None, :], b[None, :, :])

    y = t(g, gh)
    Y = lift_vector(y, 1.0)
    Y_z = lift_vector(0.5 * t(b0, gh) - 0.5j * t(g, bh0))
    Y_zzbar = lift_vector(0.25 * t(kb, gh) + 0.25 * t(g, kbh) - 0.5 * y)
    Y_zz = lift_vector(0.25 * t(kb, gh) - 0.25 * t(g, kbh) - 0.5j * t(b0, bh0))
    out = LiftDerivatives(Y, Y_z, np.conj(Y_z), Y_zz, Y_zzbar)
    if i is not None and j is not None and np.ndim(i) == 0 and np.ndim(j) == 0:
        out = LiftDerivatives(*(a[0, 0] for a in (Y, Y_z, np.conj(Y_z), Y_zz, Y_zzbar)))
    return out


def numerical_lift_derivatives(torus: TensorTorus) -> LiftDerivatives:
    """Same quantities by spectral differentiation of ``Y(s, s_hat)`` on the grid."""
    from . import spectral

    P, Q = torus.periods
    Y = lift_vector(torus.samples, 1.0)
    Ys = spectral.derivative(Y, P, 1, axis=0)
    Yt = spectral.derivative(Y, Q, 1, axis=1)
    Yss = spectral.derivative(Y, P, 2, axis=0)
    Ytt = spectral.derivative(Y, Q, 2, axis=1)
    Yst = spectral.derivative(Ys, Q, 1, axis=1)
    Y_z = 0.5 * (Ys - 1j * Yt)
    return LiftDerivatives(Y, Y_z, np.conj(Y_z), 0.25 * (Yss - Ytt - 2j * Yst), 0.25 * (Yss + Ytt))


def _grid_from_factors(left_values, right_values):
    return left_values[:, None] + right_values[None, :]


def schwarzian(torus: TensorTorus) -> np.ndarray:
    """``c = (k_1^2 - khat_1^2) / 4`` on the torus grid."""
    return _grid_from_factors(torus.left_frenet.k1**2 / 4, -torus.right_frenet.k1**2 / 4)


def hopf_density(torus: TensorTorus) -> np.ndarray:
    """``<kappa, conj kappa> = 1/4 + (k_1^2 + khat_1^2) / 16`` on the torus grid."""
    return 0.25 + _grid_from_factors(torus.left_frenet.k1**2 / 16, torus.right_frenet.k1**2 / 16)


@dataclass(frozen=True, eq=False)
class ConformalData:
    """Schwarzian, Hopf density and the Hopf differential in the normal frame.

    ``basis`` holds the lifted normal vectors ``L_1, L_2, G_00`` on the grid
    and ``hopf_coefficients`` their complex coefficients
    ``(k_1/4, -khat_1/4, -i/2)``.
    """

    schwarzian: np.ndarray
    hopf_density: np.ndarray
    hopf_coefficients: tuple
    basis: tuple

    def hopf_vector(self) -> np.ndarray:
        return sum(c[..., None] * b for c, b in zip(self.hopf_coefficients, self.basis))

    def density_from_coefficients(self) -> np.ndarray:
        """``sum_ab c_a conj(c_b) <B_a, B_b>`` using the Lorentzian Gram matrix of the basis."""
        total = np.zeros(self.hopf_density.shape, dtype=complex)
        for ca, ba in zip(self.hopf_coefficients, self.basis):
            for cb, bb in zip(self.hopf_coefficients, self.basis):
                total = total + ca * np.conj(cb) * lorentz(ba, bb)
        return total.real


def normal_frame(torus: TensorTorus) -> dict:
    """``L_1, L_2, G_00`` lifted vectors on the grid.

    Where a first curvature vanishes identically its ``beta_1`` is absent and
    the corresponding ``L`` is built from the zero vector; its Hopf
    coefficient is zero there.
    """
    fl, fr = torus.left_frenet, torus.right_frenet
    g, gh = fl.gamma, fr.gamma
    b1 = fl.frame[1] if len(fl.frame) > 1 else np.zeros_like(g)
    bh1 = fr.frame[1] if len(fr.frame) > 1 else np.zeros_like(gh)
    k1, kh1 = fl.k1[:, None, None], fr.k1[None, :, None]

    def t(a, b):
        return kron(a[:, None, :], b[None, :, :])

    Y = lift_vector(t(g, gh), 1.0)
    return {
        "L1": lift_vector(t(b1, gh)) + 0.5 * k1 * Y,
        "L2": lift_vector(t(g, bh1)) + 0.5 * kh1 * Y,
        "G00": lift_vector(t(fl.frame[0], fr.frame[0])),
    }


def conformal_data(torus: TensorTorus) -> ConformalData:
    frame = normal_frame(torus)
    n, m = torus.shape
    k1 = np.broadcast_to(torus.left_frenet.k1[:, None], (n, m))
    kh1 = np.broadcast_to(torus.right_frenet.k1[None, :], (n, m))
    coeffs = (k1 / 4 + 0j, -kh1 / 4 + 0j, np.full((n, m), -0.5j))
    return ConformalData(
        schwarzian=schwarzian(torus),
        hopf_density=hopf_density(torus),
        hopf_coefficients=coeffs,
        basis=(frame["L1"], frame["L2"], frame["G00"]),
    )

"""Willmore energy of tori in spheres, by three routes.

``willmore_parametric``
    integrates ``|H|^2 - K + 1`` against the area element of an arbitrary
    doubly periodic immersion.  ``H`` is half the trace of the second
    fundamental form (normal to the surface inside the sphere) and ``K``
    comes from the Gauss equation in a sphere of curvature one.
``willmore_tensor``
    integrates ``1 + (k_1^2 + khat_1^2)/4`` over ``ds dshat`` for a tensor torus.
``willmore_flat_conformal``
    uses ``|H|^2 + 1 = |Delta y|^2 / 4`` for flat tori in conformal
    coordinates, optionally after a linear change of coordinates.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import spectral
from .errors import DegenerateMetric, NotFlatConformal, NotOnSphere, WillmoreError
from .tensor_surfaces import TensorTorus, build_tensor_torus, kron

DEFAULT_GRID = 256


@dataclass(frozen=True, eq=False)
class ParametricTorus:
    """Doubly periodic immersion ``(u, v) -> y(u, v)`` into a unit sphere.

    ``immersion(u, v)`` takes two 1-D arrays and returns the product-grid
    values, shape ``(len(u), len(v), ambient_dim)``.
    """

    ambient_dim: int
    periods: tuple
    immersion: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = ""
    sphere_tol: float = 1e-12

    def sample(self, grid) -> np.ndarray:
        nu, nv = _grid_pair(grid)
        P, Q = self.periods
        y = np.asarray(self.immersion(spectral.grid(P, nu), spectral.grid(Q, nv)), dtype=float)
        if y.shape != (nu, nv, self.ambient_dim):
            raise ValueError(f"immersion returned shape {y.shape}, expected {(nu, nv, self.ambient_dim)}")
        dev = np.max(np.abs(np.linalg.norm(y, axis=-1) - 1.0))
        if dev > self.sphere_tol:
            raise NotOnSphere(f"torus {self.name or '<anon>'} leaves the sphere by {dev:.3e}")
        return y


def _grid_pair(grid):
    if grid is None:
        return DEFAULT_GRID, DEFAULT_GRID
    if np.ndim(grid) == 0:
        return int(grid), int(grid)
    nu, nv = grid
    return int(nu), int(nv)


@dataclass(frozen=True, eq=False)
class FundamentalForms:
    """First fundamental form and normal second fundamental form on a grid."""

    y: np.ndarray
    y_u: np.ndarray
    y_v: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    h11: np.ndarray
    h12: np.ndarray
    h22: np.ndarray

    @property
    def det(self) -> np.ndarray:
        return self.E * self.G - self.F**2

    def mean_curvature(self) -> np.ndarray:
        """Mean curvature vector ``H = (G h11 - 2F h12 + E h22) / (2 det)``."""
        d = self.det[..., None]
        return (self.G[..., None] * self.h11 - 2 * self.F[..., None] * self.h12 + self.E[..., None] * self.h22) / (2 * d)

    def gauss_curvature(self) -> np.ndarray:
        dot = lambda a, b: np.sum(a * b, axis=-1)
        return 1.0 + (dot(self.h11, self.h22) - dot(self.h12, self.h12)) / self.det


def _derivative_set(y, periods):
    P, Q = periods
    d = spectral.derivative
    y_u = d(y, P, 1, axis=0)
    y_v = d(y, Q, 1, axis=1)
    return y_u, y_v, d(y, P, 2, axis=0), d(y_u, Q, 1, axis=1), d(y, Q, 2, axis=1)


def _normal_part(y, y_u, y_v, vectors):
    """Components of ``vectors`` orthogonal to ``span{y, y_u, y_v}``."""
    basis = np.stack([y, y_u, y_v], axis=-1)
    gram = np.einsum("...ia,...ib->...ab", basis, basis)
    out = []
    for h in vectors:
        rhs = np.einsum("...ia,...i->...a", basis, h)
        c = np.linalg.solve(gram, rhs[..., None])[..., 0]
        out.append(h - np.einsum("...ia,...a->...i", basis, c))
    return out


def fundamental_forms(torus: ParametricTorus, grid=None, min_det: float = 1e-10) -> FundamentalForms:
    """``E, F, G`` and the normal parts ``h_ij`` of ``y_ij`` on the sampling grid.

    Raises :class:`DegenerateMetric` where ``EG - F^2 <= min_det``.
    """
    y = torus.sample(grid)
    y_u, y_v, y_uu, y_uv, y_vv = _derivative_set(y, torus.periods)
    E = np.sum(y_u * y_u, -1)
    F = np.sum(y_u * y_v, -1)
    G = np.sum(y_v * y_v, -1)
    if np.min(E * G - F**2) <= min_det:
        raise DegenerateMetric(f"metric determinant {np.min(E * G - F ** 2):.3e} at some node")
    h11, h12, h22 = _normal_part(y, y_u, y_v, (y_uu, y_uv, y_vv))
    return FundamentalForms(y, y_u, y_v, E, F, G, h11, h12, h22)


@dataclass(frozen=True)
class EnergyReport:
    value: float
    grid: tuple
    method: str
    estimated_error: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = list(self.grid)
        return d

    def to_json(self) -> str:
        from .formats import dumps

        return dumps(self.to_dict())


def _with_error(evaluate, grid, method) -> EnergyReport:
    nu, nv = _grid_pair(grid)
    fine = evaluate((nu, nv))
    try:
        err = abs(fine - evaluate((max(nu // 2, 8), max(nv // 2, 8))))
    except WillmoreError:
        # the half grid does not resolve the surface; no estimate available
        err = np.inf
    return EnergyReport(float(fine), (nu, nv), method, float(err))


def _parametric_value(torus: ParametricTorus, grid) -> float:
    ff = fundamental_forms(torus, grid)
    H = ff.mean_curvature()
    integrand = (np.sum(H * H, -1) - ff.gauss_curvature() + 1.0) * np.sqrt(ff.det)
    P, Q = torus.periods
    return float(integrand.mean() * P * Q)


def willmore_parametric(torus, grid=None) -> EnergyReport:
    """``int (|H|^2 - K + 1) dA`` for any regular torus (tensor tori are converted)."""
    if isinstance(torus, TensorTorus):
        torus = as_parametric(torus)
    return _with_error(lambda g: _parametric_value(torus, g), grid, "parametric")


def _tensor_integrals(L, Lh, k1, kh1) -> float:
    return float(L * Lh + Lh / 4 * spectral.trapezoid(k1**2, L) + L / 4 * spectral.trapezoid(kh1**2, Lh))


def willmore_tensor(torus: TensorTorus, grid=None) -> EnergyReport:
    """``(1/4) int (4 + k_1^2 + khat_1^2) ds dshat`` as a product of 1-D quadratures.

    ``grid=None`` uses the factor sample counts; another grid resamples the
    factors.  The error estimate reuses every second sample of the fine
    curvature data.
    """
    nu, nv = torus.shape if grid is None else _grid_pair(grid)
    if (nu, nv) != torus.shape:
        torus = build_tensor_torus(torus.left.resampled(nu), torus.right.resampled(nv), torus.name)
    L, Lh = torus.periods
    k1, kh1 = torus.left_frenet.k1, torus.right_frenet.k1
    fine = _tensor_integrals(L, Lh, k1, kh1)
    coarse = _tensor_integrals(L, Lh, k1[::2], kh1[::2])
    return EnergyReport(fine, (nu, nv), "tensor_density", float(abs(fine - coarse)))


def _flat_conformal_value(torus, grid, coordinate_map, tol):
    ff = fundamental_forms(torus, grid)
    y = ff.y
    _, _, y_uu, y_uv, y_vv = _derivative_set(y, torus.periods)
    J = np.linalg.inv(np.asarray(coordinate_map, dtype=float))
    # (u, v) = J (phi, psi): d/dphi = J11 d/du + J21 d/dv, d/dpsi = J12 d/du + J22 d/dv
    a, c = J[0, 0], J[1, 0]
    b, d = J[0, 1], J[1, 1]
    y_p = a * ff.y_u + c * ff.y_v
    y_q = b * ff.y_u + d * ff.y_v
    lam_p = np.sum(y_p * y_p, -1)
    lam_q = np.sum(y_q * y_q, -1)
    cross = np.sum(y_p * y_q, -1)
    lam = lam_p.mean()
    dev = max(np.max(np.abs(lam_p - lam)), np.max(np.abs(lam_q - lam)), np.max(np.abs(cross)))
    if dev > tol * max(1.0, lam):
        raise NotFlatConformal(f"coordinates not conformal with constant factor (deviation {dev:.3e})")
    K = ff.gauss_curvature()
    if np.max(np.abs(K)) > 1e-8:
        raise NotFlatConformal(f"Gauss curvature {np.max(np.abs(K)):.3e} is not zero")
    lap = (a * a + b * b) * y_uu + 2 * (a * c + b * d) * y_uv + (c * c + d * d) * y_vv
    integrand = np.sum(lap * lap, -1) / (4 * lam)
    P, Q = torus.periods
    jac = abs(np.linalg.det(coordinate_map))
    return float(integrand.mean() * P * Q * jac)


def willmore_flat_conformal(torus, grid=None, coordinate_map=None, tol: float = 1e-9) -> EnergyReport:
    """``int (|H|^2 + 1) dA`` for flat tori via the Laplacian in conformal coordinates.

    ``coordinate_map`` is a constant 2x2 matrix taking ``(u, v)`` to
    conformal coordinates ``(phi, psi)``; the identity by default.  The
    metric must be ``lambda (dphi^2 + dpsi^2)`` with constant ``lambda``
    (within ``tol``) and zero Gauss curvature, else :class:`NotFlatConformal`.
    """
    if isinstance(torus, TensorTorus):
        torus = as_parametric(torus)
    cmap = np.eye(2) if coordinate_map is None else np.asarray(coordinate_map, dtype=float)
    return _with_error(lambda g: _flat_conformal_value(torus, g, cmap, tol), grid, "flat_conformal")


def as_parametric(torus: TensorTorus) -> ParametricTorus:
    """View a tensor torus as a general immersion over ``[0, L) x [0, Lhat)``."""
    left, right = torus.left.position, torus.right.position

    def immersion(u, v):
        return kron(left(u)[:, None, :], right(v)[None, :, :])

    return ParametricTorus(torus.ambient_dim, torus.periods, immersion, torus.name)


def clifford_torus() -> ParametricTorus:
    """``(cos u, sin u, cos v, sin v) / sqrt2`` on ``[0, 2pi)^2``."""

    def immersion(u, v):
        U, V = np.meshgrid(u, v, indexing="ij")
        return np.stack([np.cos(U), np.sin(U), np.cos(V), np.sin(V)], -1) / np.sqrt(2)

    return ParametricTorus(4, (2 * np.pi, 2 * np.pi), immersion, "clifford")

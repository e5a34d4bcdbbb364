"""Closed curves on unit spheres and their Frenet apparatus.

A curve ``gamma`` in ``S^n`` (ambient ``R^{n+1}``) with unit speed has frame
``{gamma, beta_0, ..., beta_{n-1}}`` and curvatures ``k_1, ..., k_{n-1}``::

    gamma'  = beta_0
    beta_0' = k_1 beta_1 - gamma
    beta_i' = k_{i+1} beta_{i+1} - k_i beta_{i-1}

The frame is obtained by Gram-Schmidt on ``gamma, gamma', gamma'', ...``;
the norm of the ``j``-th orthogonal residual equals ``k_1 ... k_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import spectral
from .errors import DegenerateFrame, NonRegular, NotOnSphere, NotUnitSpeed

DEFAULT_SAMPLES = 256
SPHERE_TOL = 1e-12
UNIT_SPEED_TOL = 1e-8
DEGENERACY_REL = 1e-7


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """Smooth closed curve ``t -> position(t)`` in ``S^{ambient_dim-1}``.

    ``position`` must accept a 1-D array of parameters and return an array
    of shape ``(len(t), ambient_dim)``.  The curve is sampled on the uniform
    grid of ``sample_count`` nodes over ``[0, period)``; construction fails
    with :class:`NotOnSphere` if any sample leaves the sphere by more than
    ``sphere_tol``.
    """

    ambient_dim: int
    period: float
    position: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sample_count: int = DEFAULT_SAMPLES
    sphere_tol: float = SPHERE_TOL
    name: str = ""

    def __post_init__(self):
        if self.ambient_dim < 2:
            raise ValueError("ambient_dim must be at least 2")
        if not self.period > 0:
            raise ValueError("period must be positive")
        if self.sample_count < 8:
            raise ValueError("sample_count must be at least 8")
        pts = self.samples
        if pts.shape != (self.sample_count, self.ambient_dim):
            raise ValueError(f"position returned shape {pts.shape}, expected {(self.sample_count, self.ambient_dim)}")
        dev = np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0))
        if dev > self.sphere_tol:
            raise NotOnSphere(f"curve {self.name or '<anon>'} leaves the unit sphere by {dev:.3e}")

    @classmethod
    def from_samples(cls, samples, period, name="", sphere_tol=SPHERE_TOL):
        """Curve backed by samples; off-grid values use the trigonometric interpolant."""
        samples = np.array(samples, dtype=float)
        series = spectral.FourierSeries(samples, period)
        n = samples.shape[0]

        def position(t, _s=samples, _f=series, _n=n, _p=float(period)):
            t = np.asarray(t, dtype=float)
            # exact samples on the native grid so that file round trips are lossless
            if t.shape == (_n,) and np.allclose(t, spectral.grid(_p, _n), rtol=0, atol=0):
                return _s.copy()
            return _f(t)

        return cls(samples.shape[1], float(period), position, n, sphere_tol, name)

    @cached_property
    def nodes(self) -> np.ndarray:
        return spectral.grid(self.period, self.sample_count)

    @cached_property
    def samples(self) -> np.ndarray:
        return np.asarray(self.position(spectral.grid(self.period, self.sample_count)), dtype=float)

    def derivatives(self, order: int, method: str = "auto") -> list[np.ndarray]:
        """``[gamma, gamma', ..., gamma^(order)]`` on the sample grid."""
        out = [self.samples]
        for p in range(1, order + 1):
            out.append(spectral.derivative(self.samples, self.period, p, axis=0, method=method))
        return out

    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.derivatives(1)[1], axis=1)

    def resampled(self, sample_count: int) -> "ClosedCurve":
        return ClosedCurve(self.ambient_dim, self.period, self.position, sample_count, self.sphere_tol, self.name)


def great_circle(ambient_dim=2, sample_count=DEFAULT_SAMPLES):
    """Unit-speed great circle in the first coordinate plane."""

    def position(t):
        out = np.zeros((len(t), ambient_dim))
        out[:, 0] = np.cos(t)
        out[:, 1] = np.sin(t)
        return out

    return ClosedCurve(ambient_dim, 2 * np.pi, position, sample_count, name="great_circle")


def small_circle(curvature, ambient_dim=3, sample_count=DEFAULT_SAMPLES):
    """Unit-speed circle of geodesic curvature ``curvature`` in ``S^2``.

    The radius is ``1/sqrt(1+k^2)`` and the length ``2 pi / sqrt(1+k^2)``.
    """
    if ambient_dim < 3:
        raise ValueError("a small circle needs ambient_dim >= 3")
    r = 1.0 / np.sqrt(1.0 + curvature**2)
    h = curvature * r
    w = 1.0 / r

    def position(t):
        out = np.zeros((len(t), ambient_dim))
        out[:, 0] = r * np.cos(w * t)
        out[:, 1] = r * np.sin(w * t)
        out[:, 2] = h
        return out

    return ClosedCurve(ambient_dim, 2 * np.pi * r, position, sample_count, name=f"small_circle(k={curvature:g})")


def ejiri_curve(sample_count=DEFAULT_SAMPLES):
    """The circle ``(cos(sqrt3 s), sin(sqrt3 s), sqrt2)/sqrt3`` with ``k_1 = sqrt2``.

    Unit speed; it closes after ``2 pi / sqrt3``, which is used as the period.
    """
    curve = small_circle(np.sqrt(2.0), 3, sample_count)
    return ClosedCurve(3, curve.period, curve.position, sample_count, name="ejiri")


def arclength_reparametrize(curve: ClosedCurve, min_speed: float = 1e-8) -> ClosedCurve:
    """Return the unit-speed reparametrization of ``curve``.

    Raises :class:`NonRegular` if the speed drops below ``min_speed`` at a node.
    The inverse arclength map is found by Newton iteration on the spectral
    primitive of the speed, so the result is accurate to the resolution of
    ``curve.sample_count``.
    """
    speed = curve.speed()
    if speed.min() < min_speed:
        raise NonRegular(f"speed {speed.min():.3e} below {min_speed:g}")
    length = spectral.trapezoid(speed, curve.period)
    if np.max(np.abs(speed - 1.0)) < 1e-13 and abs(length - curve.period) < 1e-12 * length:
        return curve
    series = spectral.FourierSeries(speed, curve.period)
    mean = series.mean
    position = curve.position
    period = curve.period

    def param_of_arclength(s):
        s = np.asarray(s, dtype=float)
        turns = np.floor(s / length)
        rem = s - turns * length
        t = rem / mean
        for _ in range(60):
            step = (series.antiderivative(t) - rem) / series(t)
            t = t - step
            if np.max(np.abs(step), initial=0.0) < 1e-15 * period:
                break
        return t + turns * period

    def unit_position(s):
        return position(param_of_arclength(s))

    return ClosedCurve(curve.ambient_dim, float(length), unit_position, curve.sample_count, curve.sphere_tol, curve.name)


@dataclass(frozen=True, eq=False)
class FrenetApparatus:
    """Frenet data sampled on arclength nodes.

    ``frame[i]`` is ``beta_i`` (shape ``(N, dim)``) and ``curvatures[i-1]``
    is ``k_i``.  When a curvature vanishes identically at level ``d``,
    ``degenerate_from = d``: ``k_d`` is reported (as zeros) and nothing above
    it is computed.
    """

    length: float
    nodes: np.ndarray
    gamma: np.ndarray
    frame: tuple
    curvatures: tuple
    degenerate_from: Optional[int] = None

    @property
    def k1(self) -> np.ndarray:
        return self.curvature_or_zero(1)

    def curvature_or_zero(self, i: int) -> np.ndarray:
        """``k_i``, or zeros when the curve lies in a totally geodesic ``S^i``.

        That is the case when ``i`` exceeds the sphere dimension minus one or
        when a lower curvature vanishes identically.  Raises
        :class:`DegenerateFrame` if ``k_i`` was simply not computed.
        """
        if i <= len(self.curvatures):
            return self.curvatures[i - 1]
        sphere_dim = self.gamma.shape[1] - 1
        if (self.degenerate_from is not None and self.degenerate_from < i) or i > sphere_dim - 1:
            return np.zeros_like(self.nodes)
        raise DegenerateFrame(f"k_{i} was not computed (max_order too small)")

    def orthonormality_error(self) -> float:
        vecs = np.stack((self.gamma,) + tuple(self.frame), axis=1)
        gram = np.einsum("nik,njk->nij", vecs, vecs)
        return float(np.max(np.abs(gram - np.eye(vecs.shape[1]))))

    def frenet_residual(self) -> float:
        """Max deviation from the Frenet equations, differentiating the frame spectrally."""
        d = lambda f: spectral.derivative(f, self.length, 1, axis=0)
        k = [np.zeros_like(self.nodes)] + list(self.curvatures)
        res = [d(self.gamma) - self.frame[0]]
        m = len(self.frame)
        for i in range(m):
            rhs = -self.gamma if i == 0 else -k[i][:, None] * self.frame[i - 1]
            if i + 1 <= len(self.curvatures) and i + 1 < m:
                rhs = rhs + k[i + 1][:, None] * self.frame[i + 1]
            res.append(d(self.frame[i]) - rhs)
        return float(max(np.max(np.abs(r)) for r in res))


def _check_unit_speed(curve, tol=UNIT_SPEED_TOL):
    dev = np.max(np.abs(curve.speed() - 1.0))
    if dev > tol:
        raise NotUnitSpeed(f"curve {curve.name or '<anon>'} deviates from unit speed by {dev:.3e}")


def frenet(curve: ClosedCurve, max_order: Optional[int] = None, degeneracy: float = DEGENERACY_REL) -> FrenetApparatus:
    """Frenet frame and curvatures of a unit-speed closed spherical curve.

    Curvatures ``k_1 .. k_{n-2}`` are non-negative.  When the frame is
    complete (``max_order`` reaches ``n-1``), the last frame vector is
    oriented so that ``det[gamma, beta_0, .., beta_{n-1}] = +1`` and
    ``k_{n-1}`` carries the sign.

    A curvature whose maximum is below ``degeneracy * (1 + max k)`` is
    treated as identically zero and stops the construction.  A curvature
    that vanishes only somewhere raises :class:`DegenerateFrame` if a
    higher curvature was requested.
    """
    _check_unit_speed(curve)
    dim = curve.ambient_dim
    n_sphere = dim - 1
    available = n_sphere - 1
    order = available if max_order is None else min(max_order, available)
    derivs = curve.derivatives(order + 1)
    gamma = derivs[0]

    basis = [gamma, derivs[1] / np.linalg.norm(derivs[1], axis=1)[:, None]]
    curvatures = []
    degenerate_from = None
    prev_norm = np.ones(curve.sample_count)
    kmax = 0.0
    for j in range(1, order + 1):
        v = derivs[j + 1].copy()
        for _ in range(2):
            for e in basis:
                v -= np.einsum("nk,nk->n", v, e)[:, None] * e
        last = j == n_sphere - 1
        if last:
            # complete the orthonormal basis and fix orientation
            beta = _orienting_vector(basis)
            r = np.einsum("nk,nk->n", derivs[j + 1], beta)
        else:
            r = np.linalg.norm(v, axis=1)
            beta = None
        k = r / prev_norm
        kmax = max(kmax, float(np.max(np.abs(k))))
        thr = degeneracy * (1.0 + kmax)
        if np.max(np.abs(k)) < thr:
            curvatures.append(np.zeros_like(k))
            degenerate_from = j
            break
        if np.min(np.abs(k)) < thr and j < order:
            raise DegenerateFrame(f"k_{j} vanishes at some nodes but k_{j + 1} was requested")
        if beta is None:
            with np.errstate(invalid="ignore", divide="ignore"):
                beta = np.where((np.abs(k) >= thr)[:, None], v / r[:, None], 0.0)
        curvatures.append(k)
        basis.append(beta)
        prev_norm = r
    return FrenetApparatus(
        length=curve.period,
        nodes=curve.nodes,
        gamma=gamma,
        frame=tuple(basis[1:]),
        curvatures=tuple(curvatures),
        degenerate_from=degenerate_from,
    )


def _orienting_vector(basis):
    """Unit vector completing ``basis`` (dim-1 orthonormal fields) with det +1."""
    mat = np.stack(basis, axis=1)  # (N, dim-1, dim)
    n, m, dim = mat.shape
    out = np.empty((n, dim))
    for c in range(dim):
        minor = np.delete(mat, c, axis=2)
        out[:, c] = (-1) ** (m + c) * np.linalg.det(minor)
    return out / np.linalg.norm(out, axis=1)[:, None]


def total_space_curvature(curve: ClosedCurve) -> float:
    """``int sqrt(k_1^2 + 1) ds``: total curvature of the curve as a curve in ``R^{n+1}``."""
    fr = frenet(curve, max_order=1)
    return float(spectral.trapezoid(np.sqrt(fr.k1**2 + 1.0), fr.length))


def bending_energy(curve: ClosedCurve, a0: float) -> float:
    """``int (k_1^2 + a0) ds``; bounded below by ``4 pi sqrt(a0 - 1)`` for ``a0 >= 2``."""
    fr = frenet(curve, max_order=1)
    return float(spectral.trapezoid(fr.k1**2 + a0, fr.length))


def bending_energy_bound(a0: float) -> float:
    return 4 * np.pi * np.sqrt(a0 - 1.0)

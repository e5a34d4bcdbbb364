"""Constrained-Willmore tensor tori and the elastica system.

A tensor torus ``gamma (x) gamma_hat`` is constrained Willmore exactly when
one factor is a great circle and the other lies in ``S^3`` with::

    k1'' - k1 k2^2 - a0 k1 + k1^3 / 2 = 0
    2 k1' k2 + k1 k2' = 0                 (i.e. k1^2 k2 = J is constant)

and it is Willmore when ``a0 = 1``.  The multiplier ``q1`` of the
constrained problem satisfies ``a0 = 1 + q1 / 4``.

The second equation is built in: the ODE state is ``(k1, k1')`` and
``k2 = J / k1^2``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import least_squares

from . import spectral
from .errors import BadParams, FrameDrift, NoConvergence, NotClosed, SingularPinch
from .sphere_curves import ClosedCurve, frenet
from .tensor_surfaces import TensorTorus

RTOL = 1e-12
ATOL = 1e-13
PINCH = 1e-12
REORTH_LENGTH = 1.0
MAX_REORTH = 1e-6


@dataclass(frozen=True)
class ElasticaParams:
    """``a0`` and the first integral ``J = k1^2 k2``; ``q1 = 4 (a0 - 1)``."""

    a0: float
    J: float = 0.0

    @property
    def q1(self) -> float:
        return 4.0 * (self.a0 - 1.0)

    @classmethod
    def from_multiplier(cls, q1: float, J: float = 0.0) -> "ElasticaParams":
        return cls(1.0 + q1 / 4.0, J)


def equilibrium_a0(k1: float, k2: float) -> float:
    """``a0`` making constant ``(k1, k2)`` a solution: ``k1^2/2 - k2^2``."""
    return k1**2 / 2 - k2**2


def _rhs(params: ElasticaParams):
    a0, J = params.a0, params.J

    def f(s, state):
        k, kp = state[0], state[1]
        torsion_term = J * J / k**3 if J != 0.0 else 0.0
        return np.array([kp, torsion_term + a0 * k - k**3 / 2])

    return f


@dataclass(frozen=True, eq=False)
class ElasticaProfile:
    """Solution of the elastica system sampled on ``nodes`` (arclength, endpoints included)."""

    nodes: np.ndarray
    k1: np.ndarray
    k1_prime: np.ndarray
    k2: np.ndarray
    params: ElasticaParams
    dense: Optional[Callable] = field(default=None, repr=False)

    @property
    def length(self) -> float:
        return float(self.nodes[-1])

    def first_integral_drift(self) -> float:
        return float(np.max(np.abs(self.k1**2 * self.k2 - self.params.J)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "k1", "k1p", "k2"])
        for row in zip(self.nodes, self.k1, self.k1_prime, self.k2):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()


def solve_elastica(params: ElasticaParams, k1_0: float, k1_prime_0: float, length: float, n_nodes: int = 1025) -> ElasticaProfile:
    """Integrate ``k1'' = J^2/k1^3 + a0 k1 - k1^3/2`` over ``[0, length]``.

    Uses an adaptive 8th-order Dormand-Prince scheme with dense output.
    Raises :class:`SingularPinch` when ``J != 0`` and ``k1`` collapses
    towards zero or the step size underflows.
    """
    if params.J != 0.0 and k1_0 <= 0.0:
        raise SingularPinch("k1_0 must be positive when J != 0")

    def pinch(s, state):
        return state[0] - PINCH

    pinch.terminal = True
    pinch.direction = -1
    events = [pinch] if params.J != 0.0 else None
    s_eval = np.linspace(0.0, length, n_nodes)
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        try:
            sol = solve_ivp(
                _rhs(params), (0.0, length), [k1_0, k1_prime_0], method="DOP853",
                t_eval=s_eval, dense_output=True, rtol=RTOL, atol=ATOL, events=events,
            )
        except FloatingPointError as exc:
            raise SingularPinch(f"integration blew up: {exc}") from exc
    if sol.status == 1:
        raise SingularPinch(f"k1 reached {PINCH:g} at s = {sol.t_events[0][0]:.6g}")
    if sol.status != 0:
        raise SingularPinch(f"step size collapsed: {sol.message}")
    k1, k1p = sol.y
    k2 = params.J / k1**2 if params.J != 0.0 else np.zeros_like(k1)
    return ElasticaProfile(sol.t, k1, k1p, k2, params, sol.sol)


def constant_profile(k1: float, k2: float = 0.0, length: float = 2 * np.pi, n_nodes: int = 257) -> ElasticaProfile:
    """Equilibrium solution with ``a0 = k1^2/2 - k2^2`` and ``J = k1^2 k2``."""
    params = ElasticaParams(equilibrium_a0(k1, k2), k1**2 * k2)
    return solve_elastica(params, k1, 0.0, length, n_nodes)


def cw_residual_components(k1, k2, k3, a0: float, period: float) -> dict:
    """Obstruction profiles on a common periodic grid.

    ``elastica``: ``k1'' - k1 k2^2 - a0 k1 + k1^3/2``;
    ``first_integral``: ``2 k1' k2 + k1 k2'``; ``torsion``: ``k1 k2 k3``.
    """
    k1, k2, k3 = (np.asarray(x, dtype=float) for x in (k1, k2, k3))
    d1 = spectral.derivative(k1, period, 1)
    d2 = spectral.derivative(k1, period, 2)
    dk2 = spectral.derivative(k2, period, 1)
    return {
        "elastica": d2 - k1 * k2**2 - a0 * k1 + k1**3 / 2,
        "first_integral": 2 * d1 * k2 + k1 * dk2,
        "torsion": k1 * k2 * k3,
    }


# -- reconstruction -----------------------------------------------------------


def _frame_rhs(params: ElasticaParams):
    a0, J = params.a0, params.J

    def f(s, state):
        k, kp = state[0], state[1]
        k2 = J / k**2 if J != 0.0 else 0.0
        F = state[2:].reshape(4, 4)
        dF = np.empty_like(F)
        dF[0] = F[1]
        dF[1] = -F[0] + k * F[2]
        dF[2] = -k * F[1] + k2 * F[3]
        dF[3] = -k2 * F[2]
        dk = [kp, (J * J / k**3 if J != 0.0 else 0.0) + a0 * k - k**3 / 2]
        return np.concatenate([dk, dF.ravel()])

    return f


@dataclass(frozen=True, eq=False)
class FrenetArc:
    """Curve in ``S^3`` reconstructed from an elastica profile.

    ``frames[n]`` holds the rows ``gamma, beta_0, beta_1, beta_2`` at
    ``nodes[n]``.  ``max_correction`` is the largest re-orthonormalization
    applied between integration chunks.
    """

    nodes: np.ndarray
    frames: np.ndarray
    k1: np.ndarray
    k1_prime: np.ndarray
    params: ElasticaParams
    pieces: tuple = field(repr=False)
    max_correction: float = 0.0

    @property
    def length(self) -> float:
        return float(self.nodes[-1])

    def state_at(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.empty((len(s), 18))
        starts = np.array([p[0] for p in self.pieces])
        idx = np.clip(np.searchsorted(starts, s, side="right") - 1, 0, len(self.pieces) - 1)
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self.pieces[i][2](s[mask]).T
        return out

    def position(self, s):
        return self.state_at(s)[:, 2:6]

    def to_closed_curve(self, sample_count: int = 256, tol: float = 1e-7, sphere_tol: float = 1e-10) -> ClosedCurve:
        """Closed curve of period ``length``; :class:`NotClosed` if the closure gap exceeds ``tol``.

        Samples are taken on the periodic grid and stripped of the
        integrator's noise floor so that curvatures survive differentiation.
        """
        gaps = closure_error(self)
        if max(gaps.values()) > tol:
            raise NotClosed(f"arc does not close: {gaps}")
        x = spectral.denoise(self.position(spectral.grid(self.length, sample_count)))
        return ClosedCurve.from_samples(x, self.length, "reconstructed", sphere_tol)


def _polar(F):
    u, _, vt = np.linalg.svd(F)
    return u @ vt


def reconstruct_curve_s3(profile: ElasticaProfile, seed_frame=None, reorth_length: float = REORTH_LENGTH) -> FrenetArc:
    """Integrate the Frenet system in ``R^4`` along a profile.

    The frame is re-orthonormalized (polar factor) every ``reorth_length``
    of arclength; a correction above ``1e-6`` raises :class:`FrameDrift`.
    The sampled frames are reported on ``profile.nodes``.
    """
    F0 = np.eye(4) if seed_frame is None else np.asarray(seed_frame, dtype=float)
    if np.max(np.abs(F0 @ F0.T - np.eye(4))) > 1e-12:
        raise BadParams("seed frame is not orthonormal")
    rhs = _frame_rhs(profile.params)
    length = profile.length
    n_chunks = max(1, int(np.ceil(length / reorth_length)))
    edges = np.linspace(0.0, length, n_chunks + 1)
    state = np.concatenate([[profile.k1[0], profile.k1_prime[0]], F0.ravel()])
    pieces = []
    max_corr = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(rhs, (a, b), state, method="DOP853", dense_output=True, rtol=RTOL, atol=ATOL)
        if sol.status != 0:
            raise SingularPinch(f"frame integration failed: {sol.message}")
        pieces.append((a, b, sol.sol))
        state = sol.y[:, -1].copy()
        F = state[2:].reshape(4, 4)
        Fc = _polar(F)
        corr = float(np.max(np.abs(F - Fc)))
        if corr > MAX_REORTH:
            raise FrameDrift(f"re-orthonormalization correction {corr:.3e} at s = {b:.6g}")
        max_corr = max(max_corr, corr)
        state[2:] = Fc.ravel()
    arc = FrenetArc(profile.nodes, np.empty(0), profile.k1, profile.k1_prime, profile.params, tuple(pieces), max_corr)
    states = arc.state_at(profile.nodes)
    return FrenetArc(profile.nodes, states[:, 2:].reshape(-1, 4, 4), states[:, 0], states[:, 1],
                     profile.params, tuple(pieces), max_corr)


def closure_error(arc: FrenetArc) -> dict:
    """Gaps between start and end of the arc: position, full frame, and ``(k1, k1')``."""
    start, end = arc.state_at([0.0, arc.length])
    return {
        "position_gap": float(np.linalg.norm(end[2:6] - start[2:6])),
        "frame_gap": float(np.max(np.abs(end[2:] - start[2:]))),
        "curvature_gap": float(np.max(np.abs(end[:2] - start[:2]))),
    }


def shoot_closed(params: ElasticaParams, init_guess, max_iter: int = 50, tol: float = 1e-7) -> ElasticaProfile:
    """Find ``(k1_0, length)`` so that the reconstructed curve closes up.

    Starts at a critical point of ``k1`` (``k1'(0) = 0``) and minimizes the
    closure gaps by Levenberg-Marquardt.  Raises :class:`NoConvergence`
    unless every gap ends below ``tol``.
    """
    k0_guess, L_guess = init_guess

    def residual(x):
        k0, L = x
        if L <= 0 or (params.J != 0.0 and k0 <= 0):
            return np.full(18, 1e3)
        try:
            prof = solve_elastica(params, k0, 0.0, L, n_nodes=2)
            arc = reconstruct_curve_s3(prof)
        except (SingularPinch, FrameDrift):
            return np.full(18, 1e3)
        start, end = arc.state_at([0.0, L])
        return np.concatenate([end[2:] - start[2:], end[:2] - start[:2]])

    fit = least_squares(residual, [k0_guess, L_guess], method="lm", max_nfev=max_iter * 3, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    k0, L = fit.x
    if not (L > 0) or np.max(np.abs(residual(fit.x))) > tol:
        raise NoConvergence(f"closure residual {np.max(np.abs(fit.fun)):.3e} after {fit.nfev} evaluations")
    profile = solve_elastica(params, k0, 0.0, L)
    gaps = closure_error(reconstruct_curve_s3(profile))
    if max(gaps.values()) > tol:
        raise NoConvergence(f"closure gaps {gaps}")
    return profile


# -- homogeneous solutions ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomogeneousCurve:
    """``(a cos(s/w), a sin(s/w), b cos(lam s/w), b sin(lam s/w))``, ``w = sqrt(a^2 + b^2 lam^2)``."""

    curve: ClosedCurve
    a: float
    b: float
    lam: float
    k1_squared: float
    k2_squared: float

    @property
    def a0(self) -> float:
        return self.k1_squared / 2 - self.k2_squared

    @property
    def params(self) -> ElasticaParams:
        k1 = np.sqrt(self.k1_squared)
        return ElasticaParams(self.a0, k1**2 * np.sqrt(self.k2_squared))


def rational_ratio(lam: float, max_denominator: int = 64, tol: float = 1e-12) -> Optional[Fraction]:
    frac = Fraction(lam).limit_denominator(max_denominator)
    return frac if abs(float(frac) - lam) <= tol else None


def homogeneous_curve(a: float, b: float, lam: float, sample_count: int = 256) -> HomogeneousCurve:
    """Homogeneous curve in ``S^3`` together with its predicted curvatures.

    ``k1^2 = a^2 b^2 (lam^2 - 1)^2 / w^4`` and ``k2^2 = lam^2 / w^4``.
    Raises :class:`BadParams` unless ``a, b > 0`` and ``a^2 + b^2 = 1``, and
    :class:`NotClosed` when ``lam`` is not rational (the curve winds densely).
    """
    if not (a > 0 and b > 0) or abs(a * a + b * b - 1.0) > 1e-12:
        raise BadParams(f"need a, b > 0 and a^2 + b^2 = 1, got a={a}, b={b}")
    frac = rational_ratio(lam)
    if frac is None:
        raise NotClosed(f"lambda = {lam!r} is not rational: the curve does not close")
    w = np.sqrt(a * a + b * b * lam * lam)
    period = 2 * np.pi * w * frac.denominator
    n = sample_count
    while n < 16 * max(frac.denominator, abs(frac.numerator)):
        n *= 2

    def position(s):
        return np.stack([a * np.cos(s / w), a * np.sin(s / w), b * np.cos(lam * s / w), b * np.sin(lam * s / w)], 1)

    curve = ClosedCurve(4, float(period), position, n, name=f"homogeneous(a={a:g},b={b:g},lam={lam:g})")
    k1sq = a * a * b * b * (lam * lam - 1) ** 2 / w**4
    k2sq = lam * lam / w**4
    return HomogeneousCurve(curve, a, b, lam, k1sq, k2sq)


# -- classification -----------------------------------------------------------

NOT_CW = "not_constrained_willmore"
CW = "constrained_willmore"
WILLMORE = "willmore"


@dataclass(frozen=True)
class CWClassification:
    verdict: str
    fitted_a0: Optional[float]
    obstructions: dict
    factor: str = "left"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "fitted_a0": self.fitted_a0, "factor": self.factor,
                "obstructions": dict(self.obstructions)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def classify_tensor_cw(torus: TensorTorus, tol: float = 1e-6) -> CWClassification:
    """Decide whether a tensor torus is (constrained) Willmore.

    The factor with the larger first curvature is the elastica candidate and
    the other must be a great circle.  ``a0`` is fitted by least squares to
    the elastica residual of the candidate; where ``k1`` vanishes
    identically every ``a0`` fits and ``1`` is reported.
    """
    fl = frenet(torus.left, max_order=3)
    fr = frenet(torus.right, max_order=3)
    ml, mr = float(np.max(np.abs(fl.k1))), float(np.max(np.abs(fr.k1)))
    factor, cand, other_max = ("left", fl, mr) if ml >= mr else ("right", fr, ml)
    k1, k2, k3 = (spectral.denoise(cand.curvature_or_zero(i)) for i in (1, 2, 3))
    L = cand.length
    base = spectral.derivative(k1, L, 2) - k1 * k2**2 + k1**3 / 2
    norm = float(np.dot(k1, k1))
    a0 = float(np.dot(base, k1) / norm) if np.max(np.abs(k1)) > tol else 1.0
    res = cw_residual_components(k1, k2, k3, a0, L)
    obstructions = {
        "k1k1hat_product": ml * mr,
        "elastica_residual": float(np.max(np.abs(res["elastica"]))),
        "first_integral_residual": float(np.max(np.abs(res["first_integral"]))),
        "torsion_obstruction": float(np.max(np.abs(res["torsion"]))),
    }
    if other_max > tol or max(v for k, v in obstructions.items() if k != "k1k1hat_product") > tol:
        return CWClassification(NOT_CW, None, obstructions, factor)
    verdict = WILLMORE if abs(a0 - 1.0) < tol else CW
    return CWClassification(verdict, a0, obstructions, factor)

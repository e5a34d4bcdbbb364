"""Named tori, one-parameter families, energy sweeps and stability probes.

Families (parameter domain in brackets):

``ejiri``            Ejiri circle (x) great circle, no parameter
``clifford_double``  great circle (x) great circle, no parameter
``inf_family``       gamma_a (x) gamma_a, gamma_a = (a cos(s/a), a sin(s/a), b)   [a in (0, 1]]
``tilde_family``     Ejiri circle (x) gamma_a                                     [a in (0, 1]]
``scaled_deform``    (a gamma(t/a), b) (x) (a gamma_hat(t/a), b) for a base pair  [a in (0, 1]]
``theta_family``     homogeneous tori y_theta in S^5                               [theta in [0, pi/2]]

Throughout ``b = sqrt(1 - a^2)``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .energy import ParametricTorus, willmore_flat_conformal, willmore_parametric, willmore_tensor
from .errors import OutOfRange
from .sphere_curves import DEFAULT_SAMPLES, ClosedCurve, ejiri_curve, great_circle
from .tensor_surfaces import TensorTorus, build_tensor_torus

FAMILY_NAMES = ("ejiri", "clifford_double", "inf_family", "tilde_family", "scaled_deform", "theta_family")


def theta_rho(theta):
    return np.sqrt(2 + np.sin(2 * theta) ** 2)


_REFERENCES: dict[str, Optional[Callable[[float], float]]] = {
    "ejiri": lambda _: 2 * np.pi**2 * np.sqrt(3),
    "clifford_double": lambda _: 4 * np.pi**2,
    "inf_family": lambda a: 2 * np.pi**2 * (1 + a * a),
    "tilde_family": lambda a: np.pi**2 * (5 * a * a + 1) / (a * np.sqrt(3)),
    "scaled_deform": None,
    "theta_family": lambda t: 6 * np.pi**2 * (2 / theta_rho(t) - 3 / theta_rho(t) ** 3),
}

_RANGES = {
    "ejiri": None,
    "clifford_double": None,
    "inf_family": (0.0, 1.0, False),
    "tilde_family": (0.0, 1.0, False),
    "scaled_deform": (0.0, 1.0, False),
    "theta_family": (0.0, np.pi / 2, True),
}


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """A named family; ``base_pair`` is used by ``scaled_deform`` only (Ejiri pair by default)."""

    name: str
    sample_count: int = DEFAULT_SAMPLES
    base_pair: Optional[tuple] = None

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise OutOfRange(f"unknown family {self.name!r}; choose from {', '.join(FAMILY_NAMES)}")

    @property
    def parameter_range(self):
        r = _RANGES[self.name]
        return None if r is None else r[:2]

    def in_range(self, param) -> bool:
        r = _RANGES[self.name]
        if r is None:
            return True
        lo, hi, closed_lo = r
        return (lo <= param if closed_lo else lo < param) and param <= hi

    def reference(self, param) -> Optional[float]:
        ref = _REFERENCES[self.name]
        return None if ref is None else float(ref(param))


def lifted_circle(a: float, sample_count=DEFAULT_SAMPLES) -> ClosedCurve:
    """``(a cos(s/a), a sin(s/a), b)``: unit speed, period ``2 pi a``, curvature ``b/a``."""
    b = np.sqrt(max(0.0, 1 - a * a))

    def position(s):
        return np.stack([a * np.cos(s / a), a * np.sin(s / a), np.full_like(s, b)], 1)

    return ClosedCurve(3, 2 * np.pi * a, position, sample_count, name=f"gamma_a(a={a:g})")


def scaled_curve(curve: ClosedCurve, a: float) -> ClosedCurve:
    """``t -> (a gamma(t/a), b)`` in one dimension higher, period ``a L``.

    Unit speed when ``gamma`` is; its first curvature squared is
    ``(k_1(t/a)^2 + b^2) / a^2``.
    """
    b = np.sqrt(max(0.0, 1 - a * a))
    pos = curve.position

    def position(t):
        t = np.asarray(t, dtype=float)
        inner = a * pos(t / a)
        return np.concatenate([inner, np.full((len(t), 1), b)], axis=1)

    return ClosedCurve(curve.ambient_dim + 1, a * curve.period, position, curve.sample_count,
                       curve.sphere_tol, f"scaled({curve.name},a={a:g})")


def ejiri_pair(sample_count=DEFAULT_SAMPLES):
    return ejiri_curve(sample_count), great_circle(2, sample_count)


def theta_torus(theta: float) -> ParametricTorus:
    """``y_theta(s, shat)`` on ``[0, 2pi)^2`` (not conformal in these coordinates)."""
    a1 = np.sqrt(1 / 3) * np.cos(theta)
    a2 = np.sqrt(1 / 3) * np.sin(theta)
    a3 = np.sqrt(2 / 3)

    def immersion(s, sh):
        S, H = np.meshgrid(s, sh, indexing="ij")
        return np.stack([a1 * np.cos(S + H), a1 * np.sin(S + H), a2 * np.cos(S - H), a2 * np.sin(S - H),
                         a3 * np.cos(H), a3 * np.sin(H)], -1)

    return ParametricTorus(6, (2 * np.pi, 2 * np.pi), immersion, f"theta_family(theta={theta:g})")


def theta_conformal_map(theta: float) -> np.ndarray:
    """Matrix taking ``(s, shat)`` to conformal coordinates ``(phi, psi)`` for ``y_theta``.

    ``phi = (s + bh1 shat) / sqrt3``, ``psi = shat / b3`` with
    ``b3 = sqrt(3 / (2 + sin^2 2theta))``, ``b1 = 2 b3 sin^2 theta`` and
    ``bh1 = 1 - b1 / b3``.
    """
    b3 = np.sqrt(3 / (2 + np.sin(2 * theta) ** 2))
    b1 = 2 * b3 * np.sin(theta) ** 2
    bh1 = 1 - b1 / b3
    return np.array([[1 / np.sqrt(3), bh1 / np.sqrt(3)], [0.0, 1 / b3]])


def make_surface(spec: FamilySpec, param: Optional[float] = None):
    """Build the family member at ``param`` (a TensorTorus, or a ParametricTorus for ``theta_family``)."""
    if spec.parameter_range is not None and (param is None or not spec.in_range(param)):
        raise OutOfRange(f"{spec.name}: parameter {param!r} outside {spec.parameter_range}")
    n = spec.sample_count
    name = spec.name if param is None else f"{spec.name}({param:g})"
    if spec.name == "ejiri":
        return build_tensor_torus(*ejiri_pair(n), name=name)
    if spec.name == "clifford_double":
        return build_tensor_torus(great_circle(2, n), great_circle(2, n), name=name)
    if spec.name == "inf_family":
        return build_tensor_torus(lifted_circle(param, n), lifted_circle(param, n), name=name)
    if spec.name == "tilde_family":
        return build_tensor_torus(ejiri_curve(n), lifted_circle(param, n), name=name)
    if spec.name == "scaled_deform":
        left, right = spec.base_pair or ejiri_pair(n)
        if param == 1.0:
            return build_tensor_torus(left, right, name=name)
        return build_tensor_torus(scaled_curve(left, param), scaled_curve(right, param), name=name)
    return theta_torus(param)


def family_energy(spec: FamilySpec, param, grid=None, method: str = "auto") -> float:
    """W at ``param``.

    ``method``: ``tensor`` (density route), ``parametric`` (general
    formula), ``conformal`` (flat-conformal shortcut; for ``theta_family``
    in the ``(phi, psi)`` coordinates), or ``auto`` (tensor for tensor
    families, parametric for ``theta_family``).
    """
    surf = make_surface(spec, param)
    if method == "auto":
        method = "parametric" if spec.name == "theta_family" else "tensor"
    if method == "tensor":
        if not isinstance(surf, TensorTorus):
            raise OutOfRange(f"{spec.name} is not a tensor family")
        return willmore_tensor(surf, grid).value
    if method == "parametric":
        return willmore_parametric(surf, grid).value
    if method == "conformal":
        cmap = theta_conformal_map(param) if spec.name == "theta_family" else None
        return willmore_flat_conformal(surf, grid, cmap).value
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class SweepRow:
    param: float
    value: float
    reference: Optional[float]
    abs_err: Optional[float]


def energy_sweep(spec: FamilySpec, params, grid=None, method: str = "auto") -> list[SweepRow]:
    rows = []
    for p in params:
        w = family_energy(spec, float(p), grid, method)
        ref = spec.reference(float(p))
        rows.append(SweepRow(float(p), w, ref, None if ref is None else abs(w - ref)))
    return rows


def sweep_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "value", "reference", "abs_err"])
    fmt = lambda x: "" if x is None else f"{x:.17g}"
    for r in rows:
        w.writerow([fmt(r.param), fmt(r.value), fmt(r.reference), fmt(r.abs_err)])
    return buf.getvalue()


@dataclass(frozen=True)
class StabilityProbe:
    """Finite-difference derivatives of ``W`` along a family.

    ``sign_stable`` records whether the steps ``h`` and ``h/2`` give
    derivatives of the same sign; the reported derivatives are the
    Richardson combinations of the two.  ``stencil`` is ``central``, or
    ``backward``/``forward`` at an end of the parameter range.
    """

    at: float
    h: float
    first_derivative: float
    second_derivative: float
    conformal_class_drift: float
    sign_stable: bool
    stencil: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _differences(f, x, h, stencil):
    if stencil == "central":
        fm, f0, fp = f(x - h), f(x), f(x + h)
        return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / h**2
    sgn = -1.0 if stencil == "backward" else 1.0
    f0, f1, f2, f3 = (f(x + sgn * i * h) for i in range(4))
    d1 = sgn * (-3 * f0 + 4 * f1 - f2) / (2 * h)
    d2 = (2 * f0 - 5 * f1 + 4 * f2 - f3) / h**2
    return d1, d2


def conformal_modulus(spec: FamilySpec, param) -> complex:
    """Modulus ``tau = omega_2 / omega_1`` of the period lattice in conformal coordinates.

    Tensor tori have the rectangular lattice ``(L, 0), (0, Lhat)``; the
    theta tori have the sheared lattice spanned by the images of
    ``(2pi, 0)`` and ``(0, 2pi)`` under :func:`theta_conformal_map`.
    """
    surface = make_surface(spec, param)
    if isinstance(surface, TensorTorus):
        L, Lh = surface.periods
        return complex(0.0, Lh / L)
    M = theta_conformal_map(param)
    w1 = M @ [2 * np.pi, 0.0]
    w2 = M @ [0.0, 2 * np.pi]
    return complex(*w2) / complex(*w1)


def stability_probe(spec: FamilySpec, at: float, h: float = 1e-3, grid=None, method: str = "auto") -> StabilityProbe:
    """Derivatives of ``W`` at ``at`` with Richardson refinement at ``h/2``.

    Central differences in the interior; one-sided second-order stencils
    at a family end point (``a = 1`` is the interesting point for the
    deformation families and lies on the boundary).
    """
    if spec.parameter_range is None:
        raise OutOfRange(f"{spec.name} has no parameter")
    if not spec.in_range(at):
        raise OutOfRange(f"{spec.name}: {at!r} outside {spec.parameter_range}")
    if spec.in_range(at - h) and spec.in_range(at + h):
        stencil = "central"
    elif spec.in_range(at - 3 * h):
        stencil = "backward"
    elif spec.in_range(at + 3 * h):
        stencil = "forward"
    else:
        raise OutOfRange(f"{spec.name}: step {h} too large at {at}")
    f = lambda p: family_energy(spec, p, grid, method)
    d1h, d2h = _differences(f, at, h, stencil)
    d1q, d2q = _differences(f, at, h / 2, stencil)
    d1 = (4 * d1q - d1h) / 3
    d2 = (4 * d2q - d2h) / 3
    sign_stable = bool(np.sign(d1h) == np.sign(d1q))
    ends = (at - h, at + h) if stencil == "central" else (at, at + (-h if stencil == "backward" else h))
    drift = abs(conformal_modulus(spec, ends[1]) - conformal_modulus(spec, ends[0]))
    return StabilityProbe(float(at), float(h), float(d1), float(d2), float(drift), sign_stable, stencil)

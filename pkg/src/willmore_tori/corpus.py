"""Deterministic test corpus of closed spherical curves and tensor tori."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .elastica import homogeneous_curve
from .families import FamilySpec, make_surface
from .sphere_curves import ClosedCurve, arclength_reparametrize, ejiri_curve, frenet, great_circle, small_circle
from .tensor_surfaces import build_tensor_torus

SEED = 20131014
EQUALITY_A0 = {2.0: 0.0, 3.0: 1.0, 4.0: np.sqrt(2.0), 6.0: 2.0}


@dataclass(frozen=True, eq=False)
class CorpusCurve:
    curve: ClosedCurve
    kind: str
    # a0 for which this curve is the equality circle of the bending bound
    equality_a0: Optional[float] = None


def perturbed_circle(rng, ambient_dim, base_curvature, amplitude, modes=3, sample_count=256, name=""):
    """A small circle plus a random low-mode perturbation, projected to the sphere and unit-speed."""
    r = 1 / np.sqrt(1 + base_curvature**2)
    h = base_curvature * r
    coeffs = rng.normal(size=(modes, 2, ambient_dim))
    coeffs /= np.arange(1, modes + 1)[:, None, None] ** 3

    def raw(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros((len(t), ambient_dim))
        out[:, 0] = r * np.cos(t)
        out[:, 1] = r * np.sin(t)
        out[:, 2] = h
        for m in range(modes):
            out += amplitude * (np.outer(np.cos((m + 1) * t), coeffs[m, 0]) + np.outer(np.sin((m + 1) * t), coeffs[m, 1]))
        return out / np.linalg.norm(out, axis=1)[:, None]

    return arclength_reparametrize(ClosedCurve(ambient_dim, 2 * np.pi, raw, sample_count, name=name))


@lru_cache(maxsize=None)
def curve_corpus(sample_count: int = 256) -> tuple:
    """Fifty curves: equality circles, other circles, homogeneous curves, random perturbations."""
    rng = np.random.default_rng(SEED)
    items = []
    for a0, k in EQUALITY_A0.items():
        c = great_circle(3, sample_count) if k == 0 else small_circle(k, 3, sample_count)
        items.append(CorpusCurve(c, "equality_circle", a0))
    for k in (0.25, 0.5, 0.8, 1.2, 3.0, 5.0):
        items.append(CorpusCurve(small_circle(k, 3, sample_count), "circle"))
    for a, b, lam in ((0.6, 0.8, 2.0), (0.8, 0.6, 3.0), (0.6, 0.8, 0.5)):
        items.append(CorpusCurve(homogeneous_curve(a, b, lam, sample_count).curve, "homogeneous"))
    while len(items) < 30:
        c = perturbed_circle(rng, 3, rng.uniform(0.3, 2.5), rng.uniform(0.03, 0.15), sample_count=sample_count,
                             name=f"s2_perturbed_{len(items)}")
        items.append(CorpusCurve(c, "perturbed_s2"))
    while len(items) < 50:
        c = perturbed_circle(rng, 4, rng.uniform(0.8, 2.0), rng.uniform(0.02, 0.08), sample_count=sample_count,
                             name=f"s3_perturbed_{len(items)}")
        if np.min(frenet(c, max_order=1).k1) < 0.2:
            continue
        items.append(CorpusCurve(c, "perturbed_s3"))
    return tuple(items)


@lru_cache(maxsize=None)
def torus_corpus() -> tuple:
    """Named tensor tori plus ten pairs drawn from the curve corpus."""
    curves = curve_corpus()
    tori = [
        make_surface(FamilySpec("ejiri")),
        make_surface(FamilySpec("clifford_double")),
        make_surface(FamilySpec("inf_family"), 0.3),
        make_surface(FamilySpec("tilde_family"), 0.5),
        build_tensor_torus(homogeneous_curve(0.6, 0.8, 2.0).curve, great_circle(), "homogeneous(0.6,0.8,2)xcircle"),
    ]
    pairs = ((10, 12), (4, 14), (15, 16), (20, 31), (22, 7), (33, 2), (35, 40), (26, 45), (11, 48), (18, 0))
    for i, j in pairs:
        tori.append(build_tensor_torus(curves[i].curve, curves[j].curve, f"corpus[{i}]x[{j}]"))
    return tuple(tori)


def ejiri_perturbations(count: int = 200, seed: int = SEED + 1, max_amplitude: float = 0.2) -> list:
    """Closed curves near the Ejiri circle; element 0 is the Ejiri circle itself."""
    rng = np.random.default_rng(seed)
    out = [ejiri_curve()]
    amps = np.linspace(0.0, max_amplitude, count)[1:]
    for amp in amps:
        while True:
            dim = 3 if rng.random() < 0.5 else 4
            c = perturbed_circle(rng, dim, np.sqrt(2.0), amp, name=f"ejiri_perturbed({amp:.4f})")
            # redraw near-cusp samples whose reparametrization is under-resolved
            if np.max(np.abs(c.speed() - 1)) < 1e-10:
                break
        out.append(c)
    return out

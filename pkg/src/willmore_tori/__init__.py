"""Willmore energy of tensor product tori in spheres.

Modules:
    sphere_curves    closed curves in unit spheres, Frenet data, bending energies
    tensor_surfaces  tensor product tori, canonical lift and conformal invariants
    energy           Willmore energy by three independent routes
    elastica         elastica ODE, reconstruction in S^3, closure shooting, classification
    families         named surfaces, parameter sweeps, stability probes
    cli              command-line front end
"""
from .energy import EnergyReport, ParametricTorus, willmore_flat_conformal, willmore_parametric, willmore_tensor
from .errors import WillmoreError
from .sphere_curves import ClosedCurve, frenet
from .tensor_surfaces import TensorTorus, build_tensor_torus

__version__ = "0.1.0"

__all__ = [
    "ClosedCurve", "EnergyReport", "ParametricTorus", "TensorTorus", "WillmoreError", "build_tensor_torus",
    "frenet", "willmore_flat_conformal", "willmore_parametric", "willmore_tensor",
]

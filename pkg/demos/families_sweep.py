"""Energy along the named one-parameter families.

inf_family drifts down towards 2 pi^2 without reaching it, tilde_family has
an interior minimum, and theta_family peaks at the Ejiri torus.
"""
import numpy as np
from scipy.optimize import minimize_scalar

from willmore_tori.families import FamilySpec, energy_sweep, family_energy, stability_probe

print("inf_family: W(a) against 2 pi^2 (1 + a^2)")
for row in energy_sweep(FamilySpec("inf_family"), [1.0, 0.5, 0.2, 0.1, 0.05]):
    print(f"  a = {row.param:5.2f}  W = {row.value:.10f}  W - 2pi^2 = {row.value - 2 * np.pi**2:.3e}")

spec = FamilySpec("tilde_family")
res = minimize_scalar(lambda a: family_energy(spec, a), bounds=(0.2, 1.0), method="bounded",
                      options={"xatol": 1e-8})
print(f"\ntilde_family minimum at a = {res.x:.6f} (1/sqrt(5) = {1 / np.sqrt(5):.6f}), W = {res.fun:.10f}")

print("\ntheta_family from theta = 0 to pi/2")
spec = FamilySpec("theta_family")
for t in np.linspace(0, np.pi / 2, 9):
    print(f"  theta = {t:.4f}  W = {family_energy(spec, t, grid=64):.10f}")
p = stability_probe(spec, np.pi / 4, grid=64)
print(f"  at pi/4: W' = {p.first_derivative:.2e}, W'' = {p.second_derivative:.4f} (a local maximum)")

# stretching the Ejiri factors apart lowers the energy
p = stability_probe(FamilySpec("scaled_deform"), 1.0)
print(f"\nscaled_deform at a = 1 ({p.stencil}): dW/da = {p.first_derivative:.8f}, "
      f"conformal class drift {p.conformal_class_drift:.1e}")

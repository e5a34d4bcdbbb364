"""Closed elastica by shooting, then a look at the reconstructed curve.

With a0 = 1 the constant solution k1 = sqrt(2) is the Ejiri circle.  We
start the shooting off that point and let it find the closure again.
"""
import numpy as np

from willmore_tori.elastica import (ElasticaParams, closure_error, reconstruct_curve_s3, shoot_closed,
                                    solve_elastica)
from willmore_tori.sphere_curves import frenet

prof = shoot_closed(ElasticaParams(1.0), (np.sqrt(2) + 0.01, 2 * np.pi / np.sqrt(3) + 0.05))
print(f"shooting: k1(0) = {prof.k1[0]:.12f}, length = {prof.length:.12f}")
print(f"          sqrt(2) = {np.sqrt(2):.12f}, 2pi/sqrt(3) = {2 * np.pi / np.sqrt(3):.12f}")

arc = reconstruct_curve_s3(prof)
print("closure gaps:", {k: f"{v:.1e}" for k, v in closure_error(arc).items()})
curve = arc.to_closed_curve()
fr = frenet(curve, max_order=1)
print(f"reconstructed k1 spread: {np.ptp(fr.k1):.1e}")

# a non-constant orbit with torsion, checking the first integral k1^2 k2 = J
p = solve_elastica(ElasticaParams(1.5, 0.4), 1.3, 0.0, 100.0)
print(f"\nwith J = 0.4 over length 100: first integral drift {p.first_integral_drift():.1e}, "
      f"k1 in [{p.k1.min():.4f}, {p.k1.max():.4f}]")

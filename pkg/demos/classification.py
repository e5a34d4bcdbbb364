"""Which tensor tori are constrained Willmore?

A torus built from a small circle and a great circle always is, with
multiplier a0 = k^2 / 2.  Two generic circles are not, since k1 khat1 must
vanish.
"""
from willmore_tori.elastica import classify_tensor_cw, homogeneous_curve
from willmore_tori.sphere_curves import ejiri_curve, great_circle, small_circle
from willmore_tori.tensor_surfaces import build_tensor_torus

pairs = [
    ("ejiri", ejiri_curve(), great_circle()),
    ("small(1.2) x great", small_circle(1.2), great_circle()),
    ("small(0.5) x small(0.8)", small_circle(0.5), small_circle(0.8)),
    ("homogeneous(0.6,0.8,2) x great", homogeneous_curve(0.6, 0.8, 2.0).curve, great_circle()),
]
for name, left, right in pairs:
    c = classify_tensor_cw(build_tensor_torus(left, right))
    a0 = "" if c.fitted_a0 is None else f"a0 = {c.fitted_a0:.6f}"
    print(f"{name:32s} {c.verdict:26s} {a0}")
